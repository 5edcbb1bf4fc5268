"""
Unit tests for policy validation
"""

import pytest

from trajectory_grpo_kit.core.exceptions import InvalidInputError
from trajectory_grpo_kit.policy import DEFAULT_SPEED_FACTORS, evaluate_policy, speed_sweep, validation_set

pytestmark = pytest.mark.unit


class TestValidationSet:
    """Tests for validation_set."""

    def test_count_and_determinism(self, small_bank, smoke_config):
        """Test the set has count entries and repeats for a seed."""
        a = validation_set(small_bank, smoke_config.rescale_spec(), 5, seed=1)
        b = validation_set(small_bank, smoke_config.rescale_spec(), 5, seed=1)
        assert len(a) == 5
        assert all(x.allclose(y, atol=0.0) for x, y in zip(a, b))

    def test_rejects_empty(self, small_bank, smoke_config):
        """Test count < 1."""
        with pytest.raises(InvalidInputError):
            validation_set(small_bank, smoke_config.rescale_spec(), 0, seed=1)


class TestEvaluatePolicy:
    """Tests for evaluate_policy and speed_sweep."""

    def test_report(self, fresh_policy, small_bank, smoke_config):
        """Test the report holds finite means over every condition."""
        conditions = validation_set(small_bank, smoke_config.rescale_spec(), 3, seed=2)
        report = evaluate_policy(fresh_policy, conditions, smoke_config)
        assert report.count == 3
        assert report.d_trans >= 0.0 and report.d_rot >= 0.0
        assert report.s_mot <= 0.0
        assert set(report.to_dict()) == {"d_trans", "d_rot", "s_mot", "count"}

    def test_bit_identical(self, fresh_policy, small_bank, smoke_config):
        """Test two evaluations of one policy agree exactly."""
        conditions = validation_set(small_bank, smoke_config.rescale_spec(), 3, seed=2)
        assert evaluate_policy(fresh_policy, conditions, smoke_config) == evaluate_policy(
            fresh_policy, conditions, smoke_config
        )

    def test_empty_conditions(self, fresh_policy, smoke_config):
        """Test an empty condition set."""
        with pytest.raises(InvalidInputError):
            evaluate_policy(fresh_policy, [], smoke_config)

    def test_speed_sweep(self, fresh_policy, small_bank, smoke_config):
        """Test one report per speed factor."""
        conditions = validation_set(small_bank, smoke_config.rescale_spec(), 2, seed=3)
        reports = speed_sweep(fresh_policy, conditions, smoke_config)
        assert list(reports) == list(DEFAULT_SPEED_FACTORS)
        assert all(r.count == 2 for r in reports.values())
