"""
Validation of a policy on a frozen condition set.

Samples are pure-ODE (η = 0) from per-condition seeds that never change, and
errors are measured on the exact decoded output with no estimator noise, so
two evaluations of the same parameters agree bit for bit.
"""

from dataclasses import asdict, dataclass
from typing import Dict, List, Sequence

import numpy as np

from ..config.choices import WeightScheme
from ..core.exceptions import InvalidInputError
from ..core.seeding import derive_seed
from ..geometry.se3 import Trajectory
from ..reward.aesthetic import aesthetic_channels
from ..reward.geometry import geometry_errors, temporal_weights
from ..sampling.rescale import RescaleSpec, rescale_trajectory, sample_target_trajectory
from .latent import encode
from .network import FlowPolicy
from .sampler import sample_ode

DEFAULT_SPEED_FACTORS = (1.0, 1.5, 2.0)


@dataclass(frozen=True)
class ValidationReport:
    """Means over a condition set."""

    d_trans: float
    d_rot: float
    s_mot: float
    count: int

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def validation_set(bank: Sequence[Trajectory], spec: RescaleSpec, count: int, seed: int) -> List[Trajectory]:
    """``count`` rescaled targets drawn from ``bank`` on a dedicated seed stream."""
    if count < 1:
        raise InvalidInputError(field_name="count", value=count, expected="count >= 1")
    return [sample_target_trajectory(bank, spec, derive_seed(seed, "validation", k)) for k in range(count)]


def evaluate_policy(policy: FlowPolicy, conditions: Sequence[Trajectory], config) -> ValidationReport:
    """Mean d_trans, d_rot and s_mot of ODE samples against their conditions."""
    if len(conditions) == 0:
        raise InvalidInputError(field_name="conditions", value=0, expected="at least one condition")
    weights = temporal_weights(config.n_frames, WeightScheme.parse(config.weight_scheme))
    d_trans, d_rot, s_mot = [], [], []
    for k, condition in enumerate(conditions):
        sample = sample_ode(
            policy,
            encode(condition),
            config.num_steps,
            derive_seed(config.seed, "validation-sample", k),
            frame_rate=condition.frame_rate,
        )
        errors = geometry_errors(condition, sample, weights)
        d_trans.append(errors.d_trans)
        d_rot.append(errors.d_rot)
        s_mot.append(aesthetic_channels(sample).s_mot)
    return ValidationReport(
        d_trans=float(np.mean(d_trans)),
        d_rot=float(np.mean(d_rot)),
        s_mot=float(np.mean(s_mot)),
        count=len(conditions),
    )


def speed_sweep(
    policy: FlowPolicy,
    conditions: Sequence[Trajectory],
    config,
    factors: Sequence[float] = DEFAULT_SPEED_FACTORS,
) -> Dict[float, ValidationReport]:
    """One report per camera-speed factor; each condition has its translations
    and rotation angles multiplied by the factor before conditioning."""
    reports = {}
    for factor in factors:
        scaled = [rescale_trajectory(c, factor, factor) for c in conditions]
        reports[float(factor)] = evaluate_policy(policy, scaled, config)
    return reports
