"""
Metric-aware target-trajectory sampling.

A bank trajectory is brought to physically plausible speeds: its maximum
frame-to-frame translation and rotation speeds are measured, target speeds
τ are drawn from truncated Gaussians, and the gauge-normalized trajectory is
scaled uniformly, translations by s_trans = τ_trans/(v_trans + ε) and
rotations in the Lie algebra, R̃ = exp(s_rot · log R).
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..core.exceptions import InvalidInputError
from ..core.logging import LoggerAdapter
from ..core.seeding import derive_seed, make_rng
from ..geometry.se3 import (
    NEAR_PI,
    Pose,
    Trajectory,
    ensure_log_safe,
    exp_so3,
    log_so3,
    normalize_gauge,
    relative_pose,
)
from .truncnorm import sample_truncated_gaussian

_logger = LoggerAdapter.get_logger(__name__)


@dataclass(frozen=True)
class RescaleSpec:
    """Truncated-Gaussian target speeds (metres/frame, radians/frame) and guard ε.

    Defaults describe walking / steady-cam motion.
    """

    mu_t: float = 0.05
    sigma_t: float = 0.03
    a_t: float = 0.01
    b_t: float = 0.15
    mu_r: float = 0.017
    sigma_r: float = 0.009
    a_r: float = 0.002
    b_r: float = 0.05
    eps: float = 1e-8

    def __post_init__(self):
        for name in ("mu_t", "sigma_t", "a_t", "b_t", "mu_r", "sigma_r", "a_r", "b_r", "eps"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidInputError(field_name=name, value=value, expected="finite value")
        for name in ("sigma_t", "sigma_r", "a_t", "b_t", "a_r", "b_r", "eps"):
            if getattr(self, name) <= 0:
                raise InvalidInputError(field_name=name, value=getattr(self, name), expected="value > 0")
        if self.a_t >= self.b_t:
            raise InvalidInputError(field_name="a_t", value=self.a_t, expected=f"a_t < b_t ({self.b_t})")
        if self.a_r >= self.b_r:
            raise InvalidInputError(field_name="a_r", value=self.a_r, expected=f"a_r < b_r ({self.b_r})")


@dataclass(frozen=True)
class SpeedProfile:
    v_trans_max: float
    v_rot_max: float

    def __post_init__(self):
        for name in ("v_trans_max", "v_rot_max"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidInputError(field_name=name, value=value, expected="finite value >= 0")


@dataclass(frozen=True, eq=False)
class RescaleDraw:
    """Everything one target draw decided, for logging and the CLI."""

    bank_index: int
    tau_trans: float
    tau_rot: float
    s_trans: float
    s_rot: float
    trajectory: Trajectory


def max_speeds(t: Trajectory) -> SpeedProfile:
    """Largest ‖t_{i+1} − t_i‖ and ‖log(R_iᵀR_{i+1})‖ over consecutive frames."""
    if len(t) < 2:
        raise InvalidInputError(field_name="t", value=len(t), expected="at least 2 poses")
    translations = t.translations
    v_trans = float(np.max(np.linalg.norm(np.diff(translations, axis=0), axis=1)))
    v_rot = max(
        float(np.linalg.norm(log_so3(relative_pose(a, b).rotation)))
        for a, b in zip(t.poses[:-1], t.poses[1:])
    )
    return SpeedProfile(v_trans_max=v_trans, v_rot_max=v_rot)


def rescale_factors(p: SpeedProfile, tau_trans: float, tau_rot: float, eps: float = 1e-8) -> Tuple[float, float]:
    """(s_trans, s_rot) = (τ_trans/(v_trans + ε), τ_rot/(v_rot + ε))."""
    for name, value in (("tau_trans", tau_trans), ("tau_rot", tau_rot), ("eps", eps)):
        if not (math.isfinite(value) and value > 0):
            raise InvalidInputError(field_name=name, value=value, expected="finite value > 0")
    return tau_trans / (p.v_trans_max + eps), tau_rot / (p.v_rot_max + eps)


def rescale_trajectory(t: Trajectory, s_trans: float, s_rot: float) -> Trajectory:
    """Scale the gauge-normalized ``t``: t̃_i = s_trans·t_i, R̃_i = exp(s_rot·log R_i).

    Raises:
        AmbiguousLogError: a gauge-normalized rotation lies within 1e-6 of angle π
    """
    for name, value in (("s_trans", s_trans), ("s_rot", s_rot)):
        if not math.isfinite(value):
            raise InvalidInputError(field_name=name, value=value, expected="finite scale")
    normalized = normalize_gauge(t)
    ensure_log_safe(normalized, operation="rescale_trajectory", margin=NEAR_PI)
    poses = [
        Pose(exp_so3(s_rot * log_so3(pose.rotation)), s_trans * pose.translation)
        for pose in normalized.poses
    ]
    return normalized.with_poses(poses)


def sample_target_draw(bank: Sequence[Trajectory], spec: RescaleSpec, seed: int) -> RescaleDraw:
    """Pick a bank trajectory uniformly and rescale it to sampled target speeds.

    Raises:
        InvalidInputError: empty bank
        AmbiguousLogError: propagated from rescale_trajectory
    """
    if len(bank) == 0:
        raise InvalidInputError(field_name="bank", value=0, expected="non-empty trajectory bank")
    index = int(make_rng(seed, "bank-index").integers(len(bank)))
    tau_trans = sample_truncated_gaussian(spec.mu_t, spec.sigma_t, spec.a_t, spec.b_t, derive_seed(seed, "tau-trans"))
    tau_rot = sample_truncated_gaussian(spec.mu_r, spec.sigma_r, spec.a_r, spec.b_r, derive_seed(seed, "tau-rot"))
    source = bank[index]
    s_trans, s_rot = rescale_factors(max_speeds(source), tau_trans, tau_rot, spec.eps)
    trajectory = rescale_trajectory(source, s_trans, s_rot)
    _logger.debug(
        f"Target draw: bank[{index}] tau_trans={tau_trans:.5f} tau_rot={tau_rot:.5f} "
        f"s_trans={s_trans:.4g} s_rot={s_rot:.4g}"
    )
    return RescaleDraw(index, tau_trans, tau_rot, s_trans, s_rot, trajectory)


def sample_target_trajectory(bank: Sequence[Trajectory], spec: RescaleSpec, seed: int) -> Trajectory:
    """Trajectory of :func:`sample_target_draw`."""
    return sample_target_draw(bank, spec, seed).trajectory
