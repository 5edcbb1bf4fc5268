"""
Prometheus metrics implementation.

Requires: prometheus-client
"""

import os
import threading
from typing import Any, Dict, FrozenSet, Mapping, Optional, Tuple

try:
    from prometheus_client import (
        CollectorRegistry, Counter, Gauge, Histogram, push_to_gateway
    )
    PROMETHEUS_AVAILABLE = True
except ImportError:
    PROMETHEUS_AVAILABLE = False
    CollectorRegistry = None
    Counter = None
    Gauge = None
    Histogram = None
    push_to_gateway = None

from ..core.logging import LoggerAdapter
from .base import BaseMonitor, MetricType

_DURATION_BUCKETS = (0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.5, 5.0, 10.0, 30.0, 60.0)


class PrometheusMonitor(BaseMonitor):
    """Prometheus monitor for training runs.

    Features:
        - Per-channel mean reward gauges
        - Surrogate objective gauge and iteration counter
        - Iteration duration histogram
        - Validation gauges (d_trans, d_rot, s_mot)
        - Error counters by type and phase
        - Push gateway support (optional)

    Args:
        registry: Prometheus registry; a private one is created if None
        prefix: Metric name prefix (default: "traj_kit_")
        push_gateway: Push gateway URL (if using push model)
        job_name: Job name for push gateway
    """

    def __init__(
        self,
        registry: Optional[Any] = None,
        prefix: Optional[str] = None,
        push_gateway: Optional[str] = None,
        job_name: Optional[str] = None
    ):
        if not PROMETHEUS_AVAILABLE:
            raise ImportError(
                "prometheus-client is required for Prometheus monitoring. "
                "Install it with: pip install trajectory-grpo-kit[monitoring]"
            )

        self.registry = registry if registry is not None else CollectorRegistry()
        self.prefix = prefix or os.getenv("TRAJ_KIT_METRICS_PREFIX", "traj_kit_")
        self.push_gateway = push_gateway or os.getenv("PROMETHEUS_PUSH_GATEWAY")
        self.job_name = job_name or os.getenv("PROMETHEUS_JOB_NAME", "trajectory_grpo_kit")

        # key = (metric_name, frozenset(label_names))
        self._metric_cache: Dict[Tuple[str, FrozenSet[str]], Any] = {}
        self._cache_lock = threading.RLock()

        self._init_metrics()

    def _init_metrics(self):
        self.iterations_total = Counter(
            f"{self.prefix}iterations_total",
            "Completed GRPO iterations",
            registry=self.registry
        )
        self.reward_mean = Gauge(
            f"{self.prefix}reward_mean",
            "Mean raw reward of the last iteration",
            ["channel"],
            registry=self.registry
        )
        self.surrogate = Gauge(
            f"{self.prefix}surrogate",
            "Clipped surrogate objective of the last iteration",
            registry=self.registry
        )
        self.iteration_duration = Histogram(
            f"{self.prefix}iteration_duration_seconds",
            "Wall-clock duration of one GRPO iteration",
            buckets=_DURATION_BUCKETS,
            registry=self.registry
        )
        self.validation = Gauge(
            f"{self.prefix}validation",
            "Latest validation means",
            ["quantity"],
            registry=self.registry
        )
        self.errors_total = Counter(
            f"{self.prefix}errors_total",
            "Total number of errors",
            ["error_type", "phase"],
            registry=self.registry
        )

    def _get_or_create_metric(
        self,
        metric_type: MetricType,
        name: str,
        labels: Optional[Dict[str, str]] = None
    ) -> Any:
        """Get or create a metric with consistent label handling.

        Raises:
            ValueError: If same metric name used with different label sets
        """
        full_name = f"{self.prefix}{name}"
        label_names = frozenset(labels.keys()) if labels else frozenset()
        cache_key = (full_name, label_names)

        with self._cache_lock:
            existing_keys = [k for k in self._metric_cache if k[0] == full_name]
            if existing_keys and cache_key not in self._metric_cache:
                raise ValueError(
                    f"Metric '{full_name}' already exists with labels {set(existing_keys[0][1])}. "
                    f"Cannot create with different labels {set(label_names)}."
                )

            if cache_key not in self._metric_cache:
                label_list = sorted(label_names)
                if metric_type is MetricType.COUNTER:
                    metric = Counter(full_name, f"Counter metric: {name}", label_list, registry=self.registry)
                elif metric_type is MetricType.GAUGE:
                    metric = Gauge(full_name, f"Gauge metric: {name}", label_list, registry=self.registry)
                else:
                    metric = Histogram(
                        full_name,
                        f"Histogram metric: {name}",
                        label_list,
                        buckets=_DURATION_BUCKETS,
                        registry=self.registry
                    )
                self._metric_cache[cache_key] = metric

            return self._metric_cache[cache_key]

    def push_metrics(self) -> None:
        """Push metrics to push gateway (if configured)."""
        if not self.push_gateway:
            return

        try:
            push_to_gateway(self.push_gateway, job=self.job_name, registry=self.registry)
        except Exception as e:
            logger = LoggerAdapter.get_logger(__name__)
            logger.error(
                f"Failed to push metrics to gateway {self.push_gateway}: {e}",
                exc_info=True,
                extra={"push_gateway": self.push_gateway, "job_name": self.job_name}
            )

    def increment(self, name: str, value: float = 1.0, labels: Optional[Dict[str, str]] = None) -> None:
        counter = self._get_or_create_metric(MetricType.COUNTER, name, labels)
        if labels:
            counter.labels(**labels).inc(value)
        else:
            counter.inc(value)

    def set_gauge(self, name: str, value: float, labels: Optional[Dict[str, str]] = None) -> None:
        gauge = self._get_or_create_metric(MetricType.GAUGE, name, labels)
        if labels:
            gauge.labels(**labels).set(value)
        else:
            gauge.set(value)

    def observe_histogram(self, name: str, value: float, labels: Optional[Dict[str, str]] = None) -> None:
        histogram = self._get_or_create_metric(MetricType.HISTOGRAM, name, labels)
        if labels:
            histogram.labels(**labels).observe(value)
        else:
            histogram.observe(value)

    def record_iteration(
        self,
        iteration: int,
        reward_means: Mapping[str, float],
        surrogate: float,
        duration: float
    ) -> None:
        self.iterations_total.inc()
        for channel, value in reward_means.items():
            self.reward_mean.labels(channel=channel).set(value)
        self.surrogate.set(surrogate)
        self.iteration_duration.observe(duration)
        self.push_metrics()

    def record_validation(self, iteration: int, report: Any) -> None:
        for quantity in ("d_trans", "d_rot", "s_mot"):
            self.validation.labels(quantity=quantity).set(getattr(report, quantity))

    def record_error(self, error_type: str, phase: Optional[str] = None) -> None:
        self.errors_total.labels(error_type=error_type, phase=phase or "unknown").inc()
