"""
Euler sampling with a stochastic window.

T Euler steps of size Δt = 1/T carry z from noise (t = 0) to a trajectory
latent (t = 1). Step k runs from t_k = k/T. Steps in the active window add
Gaussian noise, z ← z + v̂Δt + σ_k ξ with σ_k = η√Δt(1 − t_k), and record the
log-density of the taken transition; all other steps are deterministic.

A group shares its initial noise z₀; each rollout j draws its window noise
from its own stream (seed, j).
"""

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..core.exceptions import InvalidInputError
from ..core.logging import LoggerAdapter
from ..core.seeding import make_rng
from ..geometry.se3 import Trajectory
from ..grpo.surrogate import gaussian_log_density
from .latent import decode
from .network import FlowPolicy, backward, forward

_logger = LoggerAdapter.get_logger(__name__)


@dataclass(frozen=True)
class WindowSchedule:
    """Sliding window of W stochastic steps.

    Starts on the last W steps (t near 1) and moves one step toward t = 0
    every ``shift_period`` iterations. With ``wrap`` it jumps back to the end
    after reaching step 0; otherwise it stays at step 0.
    """

    size: int = 5
    shift_period: int = 5
    wrap: bool = True

    def __post_init__(self):
        if self.size < 1:
            raise InvalidInputError(field_name="size", value=self.size, expected="window size >= 1")
        if self.shift_period < 1:
            raise InvalidInputError(field_name="shift_period", value=self.shift_period, expected="shift period >= 1")

    @classmethod
    def from_config(cls, config) -> "WindowSchedule":
        return cls(config.window_size, config.window_shift_period, config.window_wrap)

    def active_steps(self, iteration: int, num_steps: int) -> Tuple[int, ...]:
        if self.size > num_steps:
            raise InvalidInputError(field_name="size", value=self.size, expected=f"window size <= num_steps ({num_steps})")
        last_start = num_steps - self.size
        shift = iteration // self.shift_period
        if self.wrap:
            start = last_start - shift % (last_start + 1)
        else:
            start = max(0, last_start - shift)
        return tuple(range(start, start + self.size))


def step_time(step: int, num_steps: int) -> float:
    return step / num_steps


def step_sigma(step: int, num_steps: int, eta: float) -> float:
    """σ_k = η √Δt (1 − t_k)."""
    return eta * math.sqrt(1.0 / num_steps) * (1.0 - step_time(step, num_steps))


@dataclass(frozen=True, eq=False)
class Rollout:
    """One sampled trajectory with its stochastic transitions.

    Attributes:
        latent: final z at t = 1
        trajectory: decoded ``latent``
        active_steps: window step indices, in order
        states: (S, D) z before each window step
        next_states: (S, D) z after it
        means: (S, D) z + v̂Δt under the behavior parameters
        sigmas: (S,) σ_k
        log_densities: (S,) log 𝒩(next; mean, σ²I); 0 where σ = 0
        seed: stream seed of this rollout's window noise
    """

    latent: np.ndarray
    trajectory: Trajectory
    active_steps: Tuple[int, ...]
    states: np.ndarray
    next_states: np.ndarray
    means: np.ndarray
    sigmas: np.ndarray
    log_densities: np.ndarray
    seed: Tuple[int, int]


def transition_log_density(next_state: np.ndarray, mean: np.ndarray, sigma: float) -> float:
    """Gaussian log-density of one window transition (0 for a deterministic step)."""
    if sigma == 0.0:
        return 0.0
    return gaussian_log_density(next_state, mean, sigma)


def initial_noise(seed: int, dim: int) -> np.ndarray:
    return make_rng(seed, "z0").standard_normal(dim)


def sample_rollout(
    policy: FlowPolicy,
    condition: np.ndarray,
    z0: np.ndarray,
    active_steps: Sequence[int],
    num_steps: int,
    eta: float,
    seed: int,
    index: int,
    frame_rate: float = 30.0,
) -> Rollout:
    """Integrate one rollout from ``z0``; window noise comes from (seed, index)."""
    rng = make_rng(seed, "rollout", index)
    dt = 1.0 / num_steps
    active = set(active_steps)
    z = np.array(z0, dtype=float)
    states, next_states, means, sigmas, log_densities = [], [], [], [], []
    for step in range(num_steps):
        v = policy.velocity(z, step_time(step, num_steps), condition)
        mean = z + v * dt
        if step in active:
            sigma = step_sigma(step, num_steps, eta)
            z_next = mean + sigma * rng.standard_normal(z.size)
            states.append(z)
            next_states.append(z_next)
            means.append(mean)
            sigmas.append(sigma)
            log_densities.append(transition_log_density(z_next, mean, sigma))
            z = z_next
        else:
            z = mean
    width = z.size
    return Rollout(
        latent=z,
        trajectory=decode(z, frame_rate),
        active_steps=tuple(sorted(active)),
        states=np.array(states).reshape(-1, width),
        next_states=np.array(next_states).reshape(-1, width),
        means=np.array(means).reshape(-1, width),
        sigmas=np.array(sigmas, dtype=float),
        log_densities=np.array(log_densities, dtype=float),
        seed=(seed, index),
    )


def sample_group(
    policy: FlowPolicy,
    condition: np.ndarray,
    window: WindowSchedule,
    group_size: int,
    num_steps: int,
    seed: int,
    iteration: int = 0,
    eta: float = 0.7,
    frame_rate: float = 30.0,
    executor=None,
) -> List[Rollout]:
    """G rollouts for one condition latent.

    Args:
        executor: Optional ``concurrent.futures`` executor; results keep
            rollout order either way.
    """
    if group_size < 1:
        raise InvalidInputError(field_name="group_size", value=group_size, expected="group size >= 1")
    if num_steps < 1:
        raise InvalidInputError(field_name="num_steps", value=num_steps, expected="num_steps >= 1")
    if not (math.isfinite(eta) and eta >= 0):
        raise InvalidInputError(field_name="eta", value=eta, expected="eta >= 0")
    active = window.active_steps(iteration, num_steps)
    condition = np.asarray(condition, dtype=float).reshape(-1)
    z0 = initial_noise(seed, policy.architecture.latent_dim)
    _logger.debug(f"Sampling group: G={group_size}, T={num_steps}, window={active[0]}..{active[-1]}, seed={seed}")

    def run(index: int) -> Rollout:
        return sample_rollout(policy, condition, z0, active, num_steps, eta, seed, index, frame_rate)

    if executor is None:
        return [run(j) for j in range(group_size)]
    return list(executor.map(run, range(group_size)))


def sample_ode(
    policy: FlowPolicy,
    condition: np.ndarray,
    num_steps: int,
    seed: int,
    frame_rate: float = 30.0,
) -> Trajectory:
    """Deterministic (η = 0) sample from z₀ of ``seed``."""
    z = initial_noise(seed, policy.architecture.latent_dim)
    dt = 1.0 / num_steps
    condition = np.asarray(condition, dtype=float).reshape(-1)
    for step in range(num_steps):
        z = z + policy.velocity(z, step_time(step, num_steps), condition) * dt
    return decode(z, frame_rate)


# ============================================================================
# LOG-DENSITIES UNDER CURRENT PARAMETERS
# ============================================================================

def _stack(rollouts: Sequence[Rollout], num_steps: int):
    states = np.concatenate([r.states for r in rollouts])
    next_states = np.concatenate([r.next_states for r in rollouts])
    times = np.concatenate([[step_time(k, num_steps) for k in r.active_steps] for r in rollouts])
    sigmas = np.concatenate([r.sigmas for r in rollouts])
    return states, next_states, times, sigmas


def rollout_log_densities(
    policy: FlowPolicy,
    rollouts: Sequence[Rollout],
    condition: np.ndarray,
    num_steps: int,
) -> Tuple[np.ndarray, object]:
    """(G, S) log-densities of the stored transitions under ``policy``.

    Returns the densities and an opaque handle for :func:`log_density_gradient`.
    """
    states, next_states, times, sigmas = _stack(rollouts, num_steps)
    velocity, cache = forward(policy, states, times, np.asarray(condition, dtype=float).reshape(1, -1))
    means = states + velocity / num_steps
    residual = next_states - means
    d = states.shape[1]
    with np.errstate(divide="ignore", invalid="ignore"):
        safe = np.where(sigmas > 0, sigmas, 1.0)
        logp = -0.5 * np.sum(residual ** 2, axis=1) / safe ** 2 - d * np.log(safe) - 0.5 * d * math.log(2.0 * math.pi)
    logp = np.where(sigmas > 0, logp, 0.0)
    g = len(rollouts)
    return logp.reshape(g, -1), (cache, residual, sigmas)


def log_density_gradient(
    policy: FlowPolicy,
    handle,
    coefficients: np.ndarray,
    num_steps: int,
) -> np.ndarray:
    """Flat Σ_{j,t} coefficients[j, t] · ∂logp_jt/∂θ.

    ∂logp/∂v̂ = (next − mean) Δt / σ², which backpropagates through the network.
    """
    cache, residual, sigmas = handle
    coeff = np.asarray(coefficients, dtype=float).reshape(-1)
    scale = np.where(sigmas > 0, coeff / (num_steps * np.where(sigmas > 0, sigmas, 1.0) ** 2), 0.0)
    return backward(policy, cache, residual * scale[:, None])
