"""
Clipped, timestep-weighted surrogate objective (no KL term).

    J = (1/G) Σ_j Σ_t w_t · min(ρ_jt A_j, clip(ρ_jt, 1 − ε, 1 + ε) A_j)
    ρ_jt = exp(logp_current − logp_behavior)

w_t multiplies the whole clipped term. The gradient flows only through
logp_current and only where the unclipped branch attains the min (ties count
as unclipped); there ∂J/∂logp_current = w_t ρ A / G.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..config.choices import TimestepSchedule
from ..core.exceptions import InvalidInputError, NumericalError


@dataclass(frozen=True, eq=False)
class StepBatch:
    """Log-densities of the taken transitions over (rollout j, active step t).

    Attributes:
        logp_current: (G, S) under the parameters being optimized
        logp_behavior: (G, S) frozen at sampling time
        step_weights: (S,) positive w_t
        advantages: (G,) fused A_total
        steps: (S,) sampler step indices, used in error messages
    """

    logp_current: np.ndarray
    logp_behavior: np.ndarray
    step_weights: np.ndarray
    advantages: np.ndarray
    steps: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        current = np.atleast_2d(np.asarray(self.logp_current, dtype=float))
        behavior = np.atleast_2d(np.asarray(self.logp_behavior, dtype=float))
        weights = np.asarray(self.step_weights, dtype=float).reshape(-1)
        advantages = np.asarray(self.advantages, dtype=float).reshape(-1)
        if current.shape != behavior.shape:
            raise InvalidInputError(
                field_name="logp_behavior",
                expected=f"shape {current.shape}",
                received=f"shape {behavior.shape}",
            )
        rollouts, steps = current.shape
        if weights.shape != (steps,):
            raise InvalidInputError(field_name="step_weights", expected=f"{steps} weights", received=f"shape {weights.shape}")
        if advantages.shape != (rollouts,):
            raise InvalidInputError(field_name="advantages", expected=f"{rollouts} advantages", received=f"shape {advantages.shape}")
        if not (np.all(np.isfinite(current)) and np.all(np.isfinite(behavior))):
            raise InvalidInputError(field_name="logp_current", expected="finite log-densities")
        if not np.all(np.isfinite(advantages)):
            raise InvalidInputError(field_name="advantages", expected="finite advantages")
        if not (np.all(np.isfinite(weights)) and np.all(weights > 0)):
            raise InvalidInputError(field_name="step_weights", expected="positive timestep weights")
        step_ids = tuple(range(steps)) if self.steps is None else tuple(int(s) for s in self.steps)
        if len(step_ids) != steps:
            raise InvalidInputError(field_name="steps", value=len(step_ids), expected=f"{steps} step indices")
        object.__setattr__(self, "logp_current", current)
        object.__setattr__(self, "logp_behavior", behavior)
        object.__setattr__(self, "step_weights", weights)
        object.__setattr__(self, "advantages", advantages)
        object.__setattr__(self, "steps", step_ids)

    @property
    def group_size(self) -> int:
        return int(self.logp_current.shape[0])


@dataclass(frozen=True, eq=False)
class SurrogateResult:
    """Objective value plus the per-term pieces its gradient needs.

    Attributes:
        value: J
        ratios: (G, S) ρ
        terms: (G, S) w_t · min(...), the summands before the 1/G mean
        unclipped: (G, S) True where the unclipped branch attains the min
        logp_grad: (G, S) ∂J/∂logp_current
        clip_fraction: share of terms where the clipped branch is strictly smaller
    """

    value: float
    ratios: np.ndarray
    terms: np.ndarray
    unclipped: np.ndarray
    logp_grad: np.ndarray
    clip_fraction: float


def surrogate_objective(batch: StepBatch, eps_clip: float = 0.2) -> SurrogateResult:
    """Evaluate the clipped surrogate on ``batch``.

    Raises:
        InvalidInputError: eps_clip outside (0, 1)
        NumericalError: a ratio overflows, naming the rollout and step
    """
    if not (0.0 < eps_clip < 1.0):
        raise InvalidInputError(field_name="eps_clip", value=eps_clip, expected="eps_clip in (0, 1)")

    with np.errstate(over="ignore"):
        ratios = np.exp(batch.logp_current - batch.logp_behavior)
    bad = np.argwhere(~np.isfinite(ratios))
    if bad.size:
        rollout, step = (int(i) for i in bad[0])
        raise NumericalError(rollout=rollout, step=batch.steps[step])

    advantages = batch.advantages[:, None]
    unclipped_term = ratios * advantages
    clipped_term = np.clip(ratios, 1.0 - eps_clip, 1.0 + eps_clip) * advantages
    unclipped = unclipped_term <= clipped_term
    chosen = np.where(unclipped, unclipped_term, clipped_term)

    weights = batch.step_weights[None, :]
    terms = weights * chosen
    g = batch.group_size
    value = float(np.sum(terms.sum(axis=1)) / g)
    logp_grad = np.where(unclipped, weights * unclipped_term, 0.0) / g
    return SurrogateResult(
        value=value,
        ratios=ratios,
        terms=terms,
        unclipped=unclipped,
        logp_grad=logp_grad,
        clip_fraction=float(np.mean(~unclipped)),
    )


def timestep_weights(
    active_steps: Sequence[int],
    schedule: TimestepSchedule = TimestepSchedule.UNIFORM,
    step_sigmas: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """Positive w_t over the active steps, summing to 1.

    ``uniform`` gives 1/|active|; ``noise-proportional`` gives σ_t²/Σσ², where
    ``step_sigmas`` are the noise scales of the active steps. If every σ is
    zero (pure-ODE sampling) the weights fall back to uniform.

    Raises:
        InvalidInputError: empty active set or missing/negative sigmas
    """
    count = len(active_steps)
    if count == 0:
        raise InvalidInputError(field_name="active_steps", value=0, expected="at least one active step")
    schedule = TimestepSchedule.parse(schedule)
    uniform = np.full(count, 1.0 / count)
    if schedule == TimestepSchedule.UNIFORM:
        return uniform

    if step_sigmas is None or len(step_sigmas) != count:
        raise InvalidInputError(field_name="step_sigmas", expected=f"{count} step noise scales")
    sq = np.asarray(step_sigmas, dtype=float) ** 2
    if not np.all(np.isfinite(sq)):
        raise InvalidInputError(field_name="step_sigmas", expected="finite noise scales")
    total = float(sq.sum())
    if total == 0.0:
        return uniform
    if np.any(sq == 0.0):
        raise InvalidInputError(field_name="step_sigmas", expected="all noise scales nonzero or all zero")
    return sq / total


def gaussian_log_density(x: np.ndarray, mean: np.ndarray, sigma: float) -> float:
    """log 𝒩(x; mean, σ²I) for an isotropic Gaussian."""
    diff = np.asarray(x, dtype=float) - np.asarray(mean, dtype=float)
    d = diff.size
    return float(-0.5 * (diff @ diff) / (sigma * sigma) - d * math.log(sigma) - 0.5 * d * math.log(2.0 * math.pi))
