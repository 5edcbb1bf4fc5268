"""
Unit tests for the velocity network, its closed-form gradients and the optimizers
"""

import numpy as np
import pytest

from trajectory_grpo_kit.core.exceptions import InvalidInputError
from trajectory_grpo_kit.grpo import StepBatch, surrogate_objective, timestep_weights
from trajectory_grpo_kit.policy import (
    CONDITION_LAYERS,
    SGD,
    Adam,
    PolicyArchitecture,
    WindowSchedule,
    backward,
    clip_grad_norm,
    forward,
    init_policy,
    layer_mask,
    log_density_gradient,
    make_optimizer,
    rollout_log_densities,
    sample_group,
)

pytestmark = pytest.mark.unit

TINY = PolicyArchitecture(n_frames=2, hidden_width=5, time_frequencies=2, condition_width=3)


def relative_error(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(a) + np.linalg.norm(b), 1e-300))


def finite_difference(objective, params: np.ndarray, h: float = 1e-5) -> np.ndarray:
    grad = np.empty_like(params)
    for i in range(params.size):
        plus, minus = params.copy(), params.copy()
        plus[i] += h
        minus[i] -= h
        grad[i] = (objective(plus) - objective(minus)) / (2 * h)
    return grad


class TestArchitecture:
    """Tests for PolicyArchitecture."""

    def test_dimensions(self):
        """Test latent and input widths."""
        assert TINY.latent_dim == 12
        assert TINY.input_dim == 12 + 4 + 3

    def test_parameter_count(self):
        """Test the flat vector covers every layer exactly once."""
        slices = TINY.layer_slices()
        assert sum(s.stop - s.start for s in slices.values()) == TINY.parameter_count
        assert max(s.stop for s in slices.values()) == TINY.parameter_count

    def test_from_config(self, smoke_config):
        """Test the architecture follows the config."""
        arch = PolicyArchitecture.from_config(smoke_config)
        assert arch.n_frames == smoke_config.n_frames
        assert arch.hidden_width == smoke_config.hidden_width

    def test_rejects_bad_width(self):
        """Test widths must be positive integers."""
        with pytest.raises(InvalidInputError):
            PolicyArchitecture(n_frames=4, hidden_width=0)


class TestFlowPolicy:
    """Tests for FlowPolicy and init_policy."""

    def test_init_deterministic(self):
        """Test equal seeds give equal parameters."""
        assert np.array_equal(init_policy(TINY, seed=1).params, init_policy(TINY, seed=1).params)
        assert not np.array_equal(init_policy(TINY, seed=1).params, init_policy(TINY, seed=2).params)

    def test_params_read_only(self):
        """Test the parameter vector cannot be written in place."""
        policy = init_policy(TINY, seed=0)
        with pytest.raises(ValueError):
            policy.params[0] = 1.0

    def test_with_params_keeps_hash(self):
        """Test with_params keeps the config hash unless overridden."""
        policy = init_policy(TINY, seed=0, config_hash="abc")
        assert policy.with_params(np.zeros(TINY.parameter_count)).config_hash == "abc"
        assert policy.with_params(np.zeros(TINY.parameter_count), "def").config_hash == "def"

    def test_wrong_parameter_count(self):
        """Test a parameter vector of the wrong length."""
        with pytest.raises(InvalidInputError):
            init_policy(TINY, seed=0).with_params(np.zeros(3))

    def test_velocity_single_row(self):
        """Test a single latent gives a single velocity."""
        policy = init_policy(TINY, seed=0)
        v = policy.velocity(np.zeros(12), 0.5, np.zeros(12))
        assert v.shape == (12,)

    def test_forward_rejects_bad_latent(self):
        """Test z must have the latent width."""
        with pytest.raises(InvalidInputError):
            forward(init_policy(TINY, seed=0), np.zeros((2, 5)), np.zeros(2), np.zeros(12))

    def test_forward_rejects_terminal_time(self):
        """Test t = 1 is outside the velocity's domain."""
        with pytest.raises(InvalidInputError):
            forward(init_policy(TINY, seed=0), np.zeros((2, 12)), np.array([0.5, 1.0]), np.zeros(12))

    def test_zero_network_points_at_condition(self):
        """Test all-zero parameters give the straight-path velocity toward c."""
        policy = init_policy(TINY, seed=0).with_params(np.zeros(TINY.parameter_count))
        rng = np.random.default_rng(2)
        z, c = rng.normal(size=(3, 12)), rng.normal(size=(3, 12))
        t = np.array([0.0, 0.25, 0.9])
        out, _ = forward(policy, z, t, c)
        assert np.allclose(out, (c - z) / (1.0 - t)[:, None])


class TestBackward:
    """Finite-difference checks of the closed-form gradients."""

    def test_backward_matches_finite_difference(self):
        """Test backward against central differences, relative error < 1e-4."""
        rng = np.random.default_rng(0)
        policy = init_policy(TINY, seed=3)
        z = rng.normal(size=(4, 12))
        t = rng.uniform(size=4)
        c = rng.normal(size=(1, 12))
        grad_out = rng.normal(size=(4, 12))

        _, cache = forward(policy, z, t, c)
        analytic = backward(policy, cache, grad_out)

        def objective(params):
            out, _ = forward(policy.with_params(params), z, t, c)
            return float(np.sum(out * grad_out))

        numeric = finite_difference(objective, policy.params.copy())
        assert relative_error(analytic, numeric) < 1e-4

    def test_log_density_gradient(self):
        """Test log_density_gradient against finite differences of the recomputed densities."""
        rng = np.random.default_rng(1)
        policy = init_policy(TINY, seed=4)
        condition = rng.normal(size=12)
        rollouts = sample_group(policy, condition, WindowSchedule(3, 1), group_size=3, num_steps=6, seed=2)
        coefficients = rng.normal(size=(3, 3))

        _, handle = rollout_log_densities(policy, rollouts, condition, 6)
        analytic = log_density_gradient(policy, handle, coefficients, 6)

        def objective(params):
            logp, _ = rollout_log_densities(policy.with_params(params), rollouts, condition, 6)
            return float(np.sum(coefficients * logp))

        numeric = finite_difference(objective, policy.params.copy())
        assert relative_error(analytic, numeric) < 1e-4

    def test_surrogate_gradient(self):
        """Test the surrogate gradient chained through the log-densities."""
        rng = np.random.default_rng(2)
        behavior_policy = init_policy(TINY, seed=5)
        policy = behavior_policy.with_params(behavior_policy.params + rng.normal(scale=1e-3, size=TINY.parameter_count))
        condition = rng.normal(size=12)
        rollouts = sample_group(behavior_policy, condition, WindowSchedule(2, 1), group_size=4, num_steps=5, seed=3)
        behavior = np.stack([r.log_densities for r in rollouts])
        advantages = np.array([1.0, -1.0, 0.5, -0.5])
        weights = timestep_weights(range(2))

        logp, handle = rollout_log_densities(policy, rollouts, condition, 5)
        result = surrogate_objective(StepBatch(logp, behavior, weights, advantages), eps_clip=0.2)
        analytic = log_density_gradient(policy, handle, result.logp_grad, 5)

        def objective(params):
            current, _ = rollout_log_densities(policy.with_params(params), rollouts, condition, 5)
            return surrogate_objective(StepBatch(current, behavior, weights, advantages), eps_clip=0.2).value

        numeric = finite_difference(objective, policy.params.copy())
        assert relative_error(analytic, numeric) < 1e-4


class TestLayerMask:
    """Tests for layer_mask."""

    def test_condition_layers_frozen(self):
        """Test frozen layers are zero and the rest one."""
        mask = layer_mask(TINY, list(CONDITION_LAYERS))
        slices = TINY.layer_slices()
        for name, s in slices.items():
            expected = 0.0 if name in CONDITION_LAYERS else 1.0
            assert np.all(mask[s] == expected)

    def test_nothing_frozen(self):
        """Test an empty frozen list."""
        assert np.all(layer_mask(TINY, []) == 1.0)


class TestOptimizers:
    """Tests for SGD, Adam and gradient clipping."""

    def test_sgd_step(self):
        """Test SGD moves against the gradient."""
        assert np.allclose(SGD(0.1).step(np.array([1.0, 2.0]), np.array([1.0, -1.0])), [0.9, 2.1])

    def test_adam_zero_gradient(self):
        """Test Adam leaves parameters exactly unchanged on a zero gradient."""
        params = np.array([0.3, -0.2])
        optimizer = Adam(0.01)
        for _ in range(3):
            assert np.array_equal(optimizer.step(params, np.zeros(2)), params)

    def test_adam_zero_gradient_after_step(self):
        """Test a zero gradient after a real step neither moves parameters nor advances the moments."""
        grad = np.array([0.5, -1.5])
        reference = Adam(0.01)
        expected = reference.step(reference.step(np.zeros(2), grad), grad)

        optimizer = Adam(0.01)
        params = optimizer.step(np.zeros(2), grad)
        assert np.array_equal(optimizer.step(params, np.zeros(2)), params)
        assert np.array_equal(optimizer.step(params, grad), expected)

    def test_adam_first_step_size(self):
        """Test the bias-corrected first step has size ≈ learning rate."""
        result = Adam(0.01).step(np.zeros(2), np.array([5.0, -0.1]))
        assert np.allclose(result, [-0.01, 0.01], atol=1e-8)

    def test_make_optimizer(self):
        """Test optimizer selection by name."""
        assert isinstance(make_optimizer("adam", 0.1), Adam)
        assert isinstance(make_optimizer("SGD", 0.1), SGD)

    def test_rejects_bad_learning_rate(self):
        """Test non-positive learning rates."""
        with pytest.raises(InvalidInputError):
            SGD(0.0)

    def test_clip_grad_norm(self):
        """Test clipping scales down to max_norm and reports the original norm."""
        grad, norm = clip_grad_norm(np.array([3.0, 4.0]), 1.0)
        assert norm == 5.0
        assert np.allclose(grad, [0.6, 0.8])

    def test_clip_disabled(self):
        """Test max_norm = 0 leaves the gradient unchanged."""
        grad, _ = clip_grad_norm(np.array([3.0, 4.0]), 0.0)
        assert np.array_equal(grad, [3.0, 4.0])
