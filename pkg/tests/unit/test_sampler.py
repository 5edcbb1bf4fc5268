"""
Unit tests for the windowed SDE sampler
"""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from trajectory_grpo_kit.core.exceptions import InvalidInputError
from trajectory_grpo_kit.grpo import gaussian_log_density
from trajectory_grpo_kit.policy import (
    PolicyArchitecture,
    WindowSchedule,
    encode,
    init_policy,
    initial_noise,
    rollout_log_densities,
    sample_group,
    sample_ode,
    step_sigma,
    step_time,
    transition_log_density,
)
from trajectory_grpo_kit.sampling import random_smooth_trajectory

pytestmark = pytest.mark.unit

ARCH = PolicyArchitecture(n_frames=3, hidden_width=8, time_frequencies=2, condition_width=4)


@pytest.fixture
def policy():
    return init_policy(ARCH, seed=7)


@pytest.fixture
def condition():
    return encode(random_smooth_trajectory(3, seed=2))


class TestWindowSchedule:
    """Tests for WindowSchedule.active_steps."""

    def test_starts_at_end(self):
        """Test iteration 0 covers the last W steps."""
        assert WindowSchedule(5, 5).active_steps(0, 25) == (20, 21, 22, 23, 24)

    def test_shifts_every_period(self):
        """Test the window moves one step toward t = 0 per period."""
        window = WindowSchedule(5, 5)
        assert window.active_steps(4, 25) == (20, 21, 22, 23, 24)
        assert window.active_steps(5, 25) == (19, 20, 21, 22, 23)
        assert window.active_steps(100, 25) == (0, 1, 2, 3, 4)

    def test_wraps_to_end(self):
        """Test the wrapping window jumps back after reaching step 0."""
        window = WindowSchedule(5, 5, wrap=True)
        assert window.active_steps(105, 25) == (20, 21, 22, 23, 24)

    def test_no_wrap_stays_at_start(self):
        """Test the non-wrapping window stays at step 0."""
        window = WindowSchedule(5, 5, wrap=False)
        assert window.active_steps(105, 25) == (0, 1, 2, 3, 4)
        assert window.active_steps(10_000, 25) == (0, 1, 2, 3, 4)

    def test_full_window(self):
        """Test W = T makes every step stochastic at every iteration."""
        window = WindowSchedule(6, 1)
        for iteration in range(10):
            assert window.active_steps(iteration, 6) == tuple(range(6))

    def test_window_too_large(self):
        """Test W > T."""
        with pytest.raises(InvalidInputError):
            WindowSchedule(6, 1).active_steps(0, 5)

    def test_invalid_size(self):
        """Test W < 1."""
        with pytest.raises(InvalidInputError):
            WindowSchedule(0, 1)

    def test_from_config(self, smoke_config):
        """Test construction from a RunConfig."""
        window = WindowSchedule.from_config(smoke_config)
        assert window.size == smoke_config.window_size
        assert window.wrap == smoke_config.window_wrap


class TestStepNoise:
    """Tests for step_time and step_sigma."""

    def test_first_step(self):
        """Test σ_0 = η√(1/T)."""
        assert step_sigma(0, 25, 0.7) == pytest.approx(0.7 * math.sqrt(1 / 25))

    def test_decreasing(self):
        """Test σ shrinks toward t = 1."""
        sigmas = [step_sigma(k, 10, 0.7) for k in range(10)]
        assert all(a > b for a, b in zip(sigmas, sigmas[1:]))
        assert step_time(5, 10) == 0.5

    def test_zero_eta(self):
        """Test η = 0 gives σ = 0 and a zero transition log-density."""
        assert step_sigma(3, 10, 0.0) == 0.0
        assert transition_log_density(np.ones(3), np.zeros(3), 0.0) == 0.0


class TestSampleGroup:
    """Tests for sample_group and sample_ode."""

    def test_group_shape(self, policy, condition):
        """Test rollout count, latent width and recorded steps."""
        rollouts = sample_group(policy, condition, WindowSchedule(3, 1), group_size=4, num_steps=8, seed=0)
        assert len(rollouts) == 4
        for j, rollout in enumerate(rollouts):
            assert rollout.latent.shape == (18,)
            assert len(rollout.trajectory) == 3
            assert rollout.active_steps == (5, 6, 7)
            assert rollout.states.shape == (3, 18)
            assert rollout.log_densities.shape == (3,)
            assert rollout.seed == (0, j)

    def test_deterministic(self, policy, condition):
        """Test equal seeds give identical rollouts."""
        a = sample_group(policy, condition, WindowSchedule(3, 1), 3, 8, seed=5)
        b = sample_group(policy, condition, WindowSchedule(3, 1), 3, 8, seed=5)
        for x, y in zip(a, b):
            assert np.array_equal(x.latent, y.latent)
            assert np.array_equal(x.log_densities, y.log_densities)

    def test_rollouts_differ(self, policy, condition):
        """Test rollouts of one group take different noise."""
        a, b = sample_group(policy, condition, WindowSchedule(3, 1), 2, 8, seed=5)
        assert not np.array_equal(a.latent, b.latent)

    def test_zero_eta_identical(self, policy, condition):
        """Test η = 0 makes every rollout of the group identical."""
        rollouts = sample_group(policy, condition, WindowSchedule(3, 1), 3, 8, seed=1, eta=0.0)
        for rollout in rollouts[1:]:
            assert np.array_equal(rollout.latent, rollouts[0].latent)
        assert np.all(rollouts[0].log_densities == 0.0)

    def test_zero_eta_matches_ode(self, policy, condition):
        """Test η = 0 reproduces the deterministic sampler."""
        (rollout,) = sample_group(policy, condition, WindowSchedule(3, 1), 1, 8, seed=4, eta=0.0)
        assert rollout.trajectory.allclose(sample_ode(policy, condition, 8, seed=4), atol=1e-12)

    def test_recorded_log_density(self, policy, condition):
        """Test stored log-densities equal the Gaussian density of the stored transitions."""
        rollouts = sample_group(policy, condition, WindowSchedule(4, 1), 3, 8, seed=2)
        for rollout in rollouts:
            for k in range(len(rollout.active_steps)):
                expected = gaussian_log_density(rollout.next_states[k], rollout.means[k], rollout.sigmas[k])
                assert rollout.log_densities[k] == pytest.approx(expected, rel=1e-12)

    def test_recomputed_log_density(self, policy, condition):
        """Test rollout_log_densities reproduces the sampling-time values."""
        rollouts = sample_group(policy, condition, WindowSchedule(4, 1), 3, 8, seed=3)
        logp, _ = rollout_log_densities(policy, rollouts, condition, 8)
        recorded = np.stack([r.log_densities for r in rollouts])
        assert np.allclose(logp, recorded, rtol=1e-9, atol=1e-9)

    def test_executor_matches_serial(self, policy, condition):
        """Test a thread pool gives the same rollouts in the same order."""
        serial = sample_group(policy, condition, WindowSchedule(3, 1), 4, 8, seed=6)
        with ThreadPoolExecutor(max_workers=2) as executor:
            parallel = sample_group(policy, condition, WindowSchedule(3, 1), 4, 8, seed=6, executor=executor)
        for a, b in zip(serial, parallel):
            assert np.array_equal(a.latent, b.latent)

    def test_shared_initial_noise(self, policy, condition):
        """Test every rollout starts from the group's z₀."""
        rollouts = sample_group(policy, condition, WindowSchedule(1, 1), 3, 4, seed=8)
        # the window covers only the last step, so its input state is shared
        for rollout in rollouts:
            assert np.array_equal(rollout.states[0], rollouts[0].states[0])

    def test_initial_noise(self):
        """Test z₀ is a deterministic standard-normal draw per seed."""
        assert np.array_equal(initial_noise(8, 18), initial_noise(8, 18))
        assert not np.array_equal(initial_noise(8, 18), initial_noise(9, 18))

    @pytest.mark.parametrize("kwargs", [{"group_size": 0}, {"num_steps": 0}, {"eta": -1.0}])
    def test_invalid_arguments(self, policy, condition, kwargs):
        """Test invalid group size, step count and η."""
        arguments = {"group_size": 2, "num_steps": 4, "eta": 0.7, **kwargs}
        with pytest.raises(InvalidInputError):
            sample_group(policy, condition, WindowSchedule(1, 1), seed=0, **arguments)
