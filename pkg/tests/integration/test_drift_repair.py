"""
End-to-end scale-drift repair: pretrain on a scale-corrupted corpus, then
fine-tune with GRPO and compare validation errors.
"""

import io

import numpy as np
import pytest

from trajectory_grpo_kit.config import RunConfig
from trajectory_grpo_kit.core.seeding import derive_seed
from trajectory_grpo_kit.io import MetricsSink
from trajectory_grpo_kit.policy import evaluate_policy, flow_pretrain, grpo_train, validation_set
from trajectory_grpo_kit.sampling import build_drift_corpus, generate_bank

pytestmark = [pytest.mark.integration, pytest.mark.slow]


@pytest.fixture(scope="module")
def drift_config() -> RunConfig:
    return RunConfig.for_drift_repair()


@pytest.fixture(scope="module")
def drift_bank(drift_config):
    return generate_bank(200, drift_config.n_frames, seed=derive_seed(drift_config.seed, "bank"), kind="mixed")


@pytest.fixture(scope="module")
def drift_pretrained(drift_config, drift_bank):
    corpus = build_drift_corpus(
        drift_bank,
        drift_config.rescale_spec(),
        (drift_config.drift_scale_low, drift_config.drift_scale_high),
        derive_seed(drift_config.seed, "drift-corpus"),
    )
    return flow_pretrain(corpus, drift_config).policy


@pytest.fixture(scope="module")
def frozen_conditions(drift_config, drift_bank):
    return validation_set(drift_bank, drift_config.rescale_spec(), 32, derive_seed(drift_config.seed, "frozen"))


@pytest.fixture(scope="module")
def baseline(drift_pretrained, frozen_conditions, drift_config):
    return evaluate_policy(drift_pretrained, frozen_conditions, drift_config)


def _train(policy, bank, conditions, config):
    """(TrainResult, metrics stream text) of one run."""
    stream = io.StringIO()
    result = grpo_train(policy, bank, None, config, sink=MetricsSink(stream), validation_conditions=conditions)
    return result, stream.getvalue()


def _final_report(policy, bank, conditions, config):
    result, _ = _train(policy, bank, conditions, config)
    return result.validation[config.iterations]


@pytest.fixture(scope="module")
def full_run(drift_pretrained, drift_bank, frozen_conditions, drift_config):
    return _train(drift_pretrained, drift_bank, frozen_conditions, drift_config)


@pytest.fixture(scope="module")
def full_report(full_run, drift_config):
    result, _ = full_run
    return result.validation[drift_config.iterations]


class TestDriftRepair:
    """Tests for the full drift-repair experiment."""

    def test_full_reward_repairs_drift(self, full_report, baseline):
        """Test full-reward training cuts d_trans by 30% without hurting smoothness by more than 10%."""
        assert full_report.d_trans <= 0.7 * baseline.d_trans
        assert full_report.s_mot >= baseline.s_mot - 0.1 * abs(baseline.s_mot)

    def test_geometry_only_improves(self, drift_pretrained, drift_bank, frozen_conditions, drift_config, baseline):
        """Test geometry-only training lowers d_trans."""
        config = drift_config.merge({"reward_set": "geometry-only"})
        final = _final_report(drift_pretrained, drift_bank, frozen_conditions, config)
        assert final.d_trans < baseline.d_trans

    def test_aesthetic_only_improves_less(
        self, drift_pretrained, drift_bank, frozen_conditions, drift_config, baseline, full_report
    ):
        """Test aesthetic-only training improves d_trans less than the full reward set."""
        aesthetic = _final_report(
            drift_pretrained, drift_bank, frozen_conditions, drift_config.merge({"reward_set": "aesthetic-only"})
        )
        assert baseline.d_trans - aesthetic.d_trans < baseline.d_trans - full_report.d_trans


class TestDriftRepairDeterminism:
    """Tests for reproducibility of the drift-repair run."""

    def test_full_run_repeats(self, full_run, drift_pretrained, drift_bank, frozen_conditions, drift_config):
        """Test rerunning the full 200-iteration run reproduces its metrics stream and parameters exactly."""
        first_result, first_stream = full_run
        second_result, second_stream = _train(drift_pretrained, drift_bank, frozen_conditions, drift_config)
        assert second_stream == first_stream
        assert len(first_stream.splitlines()) == drift_config.iterations
        assert np.array_equal(second_result.policy.params, first_result.policy.params)
