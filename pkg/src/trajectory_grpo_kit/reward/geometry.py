"""
Verifiable geometry reward.

Both trajectories are gauge-normalized (first pose → identity) before
comparison, then per-frame translation distances and geodesic rotation
angles are averaged with temporal weights that grow with the frame index,
so late frames (where drift accumulates) count most. Errors become rewards
by negation.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..config.choices import WeightScheme
from ..core.exceptions import InvalidInputError
from ..geometry.se3 import Trajectory, geodesic_angle, normalize_gauge

_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TemporalWeights:
    """Per-frame weights summing to 1.

    Linear and quadratic weights must be strictly increasing; uniform
    weights (ablation only) must all be equal.
    """

    w: np.ndarray
    scheme: WeightScheme = WeightScheme.LINEAR

    def __post_init__(self):
        w = np.array(self.w, dtype=float).reshape(-1)
        scheme = WeightScheme.parse(self.scheme)
        if w.size < 2:
            raise InvalidInputError(field_name="w", value=w.size, expected="at least 2 weights")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidInputError(field_name="w", expected="finite non-negative weights")
        if abs(float(w.sum()) - 1.0) > _SUM_TOL:
            raise InvalidInputError(field_name="w", value=float(w.sum()), expected="weights summing to 1")
        steps = np.diff(w)
        if scheme.is_increasing() and not np.all(steps > 0):
            raise InvalidInputError(field_name="w", expected="strictly increasing weights")
        if not scheme.is_increasing() and not np.all(w == w[0]):
            raise InvalidInputError(field_name="w", expected="equal weights for the uniform scheme")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "scheme", scheme)

    def __len__(self) -> int:
        return int(self.w.size)


def linear_weights(n: int) -> TemporalWeights:
    """w_i = 2i / (n(n+1)), i = 1..n.

    Examples:
        >>> linear_weights(4).w.tolist()
        [0.1, 0.2, 0.3, 0.4]
    """
    return temporal_weights(n, WeightScheme.LINEAR)


def temporal_weights(n: int, scheme: WeightScheme = WeightScheme.LINEAR) -> TemporalWeights:
    """Normalized weights for ``n`` frames: linear ∝ i, quadratic ∝ i², uniform 1/n."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidInputError(field_name="n", value=n, expected="frame count >= 2")
    scheme = WeightScheme.parse(scheme)
    i = np.arange(1, n + 1, dtype=float)
    if scheme == WeightScheme.LINEAR:
        w = 2.0 * i / (n * (n + 1))
    elif scheme == WeightScheme.QUADRATIC:
        w = 6.0 * i * i / (n * (n + 1) * (2 * n + 1))
    else:
        w = np.full(n, 1.0 / n)
    return TemporalWeights(w, scheme)


@dataclass(frozen=True)
class GeometryErrors:
    """Weighted translation (metres) and rotation (radians) deviations."""

    d_trans: float
    d_rot: float

    def __post_init__(self):
        for name in ("d_trans", "d_rot"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidInputError(field_name=name, value=value, expected="finite value >= 0")

    @property
    def d_rot_degrees(self) -> float:
        return math.degrees(self.d_rot)


def per_frame_errors(target: Trajectory, estimated: Trajectory) -> Tuple[np.ndarray, np.ndarray]:
    """Unweighted per-frame translation and rotation errors after gauge fixing.

    Raises:
        InvalidInputError: trajectories differ in length
    """
    if len(target) != len(estimated):
        raise InvalidInputError(
            field_name="estimated",
            value=len(estimated),
            expected=f"same frame count as target ({len(target)})",
        )
    target = normalize_gauge(target)
    estimated = normalize_gauge(estimated)
    trans = np.array([
        float(np.linalg.norm(a.translation - b.translation)) for a, b in zip(target.poses, estimated.poses)
    ])
    rot = np.array([geodesic_angle(a.rotation, b.rotation) for a, b in zip(target.poses, estimated.poses)])
    return trans, rot


def geometry_errors(target: Trajectory, estimated: Trajectory, w: TemporalWeights) -> GeometryErrors:
    """d_trans = Σ w_i ‖t_i − t̂_i‖, d_rot = Σ w_i ∠(R_i, R̂_i) on gauge-normalized inputs.

    Raises:
        InvalidInputError: length mismatch between the trajectories or the weights
    """
    if len(w) != len(target):
        raise InvalidInputError(field_name="w", value=len(w), expected=f"one weight per frame ({len(target)})")
    trans, rot = per_frame_errors(target, estimated)
    return GeometryErrors(d_trans=float(w.w @ trans), d_rot=float(w.w @ rot))


def geometry_reward_channels(e: GeometryErrors) -> Tuple[float, float]:
    """(r_trans, r_rot) = (−d_trans, −d_rot)."""
    return -e.d_trans, -e.d_rot
