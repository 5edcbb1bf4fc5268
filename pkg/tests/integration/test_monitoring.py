"""
Integration tests for monitoring
"""

import pytest

from trajectory_grpo_kit.monitoring import BaseMonitor, NoOpMonitor
from trajectory_grpo_kit.monitoring.prometheus import PROMETHEUS_AVAILABLE
from trajectory_grpo_kit.policy import ValidationReport, grpo_train

pytestmark = pytest.mark.integration


class TestNoOpMonitor:
    """Tests for NoOpMonitor."""

    def test_noop_monitor_is_base_monitor(self):
        """Test NoOpMonitor implements the interface."""
        assert isinstance(NoOpMonitor(), BaseMonitor)

    def test_noop_monitor_accepts_every_call(self):
        """Test NoOpMonitor methods are no-ops."""
        monitor = NoOpMonitor()
        monitor.increment("iterations_total")
        monitor.set_gauge("surrogate", 0.1)
        monitor.observe_histogram("iteration_duration_seconds", 0.5)
        monitor.record_iteration(0, {"rot": -0.1}, 0.0, 0.5)
        monitor.record_validation(0, ValidationReport(0.1, 0.01, -0.2, 4))
        monitor.record_error("NumericalError", phase="grpo")

    def test_training_with_noop_monitor(self, pretrained_policy, small_bank, smoke_config, mock_monitor):
        """Test grpo_train accepts a NoOpMonitor."""
        result = grpo_train(pretrained_policy, small_bank, None, smoke_config.merge({"iterations": 1}), monitor=mock_monitor)
        assert len(result.records) == 1


@pytest.mark.requires_prometheus
@pytest.mark.skipif(not PROMETHEUS_AVAILABLE, reason="prometheus-client not installed")
class TestPrometheusMonitor:
    """Tests for PrometheusMonitor."""

    @pytest.fixture
    def monitor(self):
        from trajectory_grpo_kit.monitoring import PrometheusMonitor

        return PrometheusMonitor(prefix="test_")

    def value(self, monitor, name, labels=None):
        return monitor.registry.get_sample_value(name, labels or {})

    def test_private_registry(self):
        """Test two monitors do not collide on metric names."""
        from trajectory_grpo_kit.monitoring import PrometheusMonitor

        PrometheusMonitor()
        PrometheusMonitor()

    def test_record_iteration(self, monitor):
        """Test iteration counter, reward gauges, surrogate and duration."""
        monitor.record_iteration(0, {"rot": -0.2, "trans": -0.05}, 0.01, 0.3)
        monitor.record_iteration(1, {"rot": -0.1, "trans": -0.04}, 0.02, 0.2)
        assert self.value(monitor, "test_iterations_total") == 2.0
        assert self.value(monitor, "test_reward_mean", {"channel": "rot"}) == -0.1
        assert self.value(monitor, "test_surrogate") == 0.02
        assert self.value(monitor, "test_iteration_duration_seconds_count") == 2.0

    def test_record_validation(self, monitor):
        """Test validation gauges per quantity."""
        monitor.record_validation(10, ValidationReport(0.12, 0.03, -0.4, 8))
        assert self.value(monitor, "test_validation", {"quantity": "d_trans"}) == 0.12
        assert self.value(monitor, "test_validation", {"quantity": "s_mot"}) == -0.4

    def test_record_error(self, monitor):
        """Test error counter labels."""
        monitor.record_error("NumericalError", phase="grpo")
        monitor.record_error("NumericalError")
        assert self.value(monitor, "test_errors_total", {"error_type": "NumericalError", "phase": "grpo"}) == 1.0
        assert self.value(monitor, "test_errors_total", {"error_type": "NumericalError", "phase": "unknown"}) == 1.0

    def test_generic_metrics(self, monitor):
        """Test increment, set_gauge and observe_histogram create metrics on demand."""
        monitor.increment("restarts", labels={"reason": "nan"})
        monitor.set_gauge("learning_rate", 0.001)
        monitor.observe_histogram("sampling_seconds", 0.2)
        assert self.value(monitor, "test_restarts_total", {"reason": "nan"}) == 1.0
        assert self.value(monitor, "test_learning_rate") == 0.001

    def test_label_mismatch(self, monitor):
        """Test reusing a metric name with different labels."""
        monitor.set_gauge("queue", 1.0, labels={"kind": "a"})
        with pytest.raises(ValueError):
            monitor.set_gauge("queue", 1.0)

    def test_push_metrics(self, monkeypatch):
        """Test pushing is skipped without a gateway and failures are logged, not raised."""
        from trajectory_grpo_kit.monitoring import PrometheusMonitor
        from trajectory_grpo_kit.monitoring import prometheus as prometheus_module

        pushed = []
        monkeypatch.delenv("PROMETHEUS_PUSH_GATEWAY", raising=False)
        monkeypatch.setattr(prometheus_module, "push_to_gateway", lambda *args, **kwargs: pushed.append(kwargs["job"]))
        PrometheusMonitor().push_metrics()
        assert pushed == []

        PrometheusMonitor(push_gateway="localhost:9091", job_name="drift").push_metrics()
        assert pushed == ["drift"]

        def unreachable(*args, **kwargs):
            raise OSError("connection refused")

        monkeypatch.setattr(prometheus_module, "push_to_gateway", unreachable)
        PrometheusMonitor(push_gateway="localhost:9091").push_metrics()

    def test_training_reports(self, monitor, pretrained_policy, small_bank, smoke_config):
        """Test grpo_train drives the Prometheus metrics."""
        grpo_train(pretrained_policy, small_bank, None, smoke_config.merge({"iterations": 2}), monitor=monitor)
        assert self.value(monitor, "test_iterations_total") == 2.0
        assert self.value(monitor, "test_reward_mean", {"channel": "trans"}) is not None
