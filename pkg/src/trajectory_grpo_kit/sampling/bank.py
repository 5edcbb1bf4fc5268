"""
Synthetic trajectory banks and the scale-drift corpus.

Camera frame convention: x right, y down, z forward (looking along +z).
Every generated trajectory starts at the identity pose.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from ..config.choices import BankKind
from ..core.exceptions import InvalidInputError
from ..core.logging import LoggerAdapter
from ..core.seeding import derive_seed, make_rng
from ..geometry.se3 import Pose, Rotation, Trajectory, exp_so3, normalize_gauge, rot_x, rot_y
from .rescale import RescaleSpec, sample_target_trajectory

_logger = LoggerAdapter.get_logger(__name__)

MAX_BANK_ANGLE = 0.9
#   so(3) norm cap for random trajectories (radians from the first frame)

CANONICAL_KINDS: Tuple[str, ...] = (
    "pan-left",
    "pan-right",
    "tilt-up",
    "tilt-down",
    "translate-up",
    "translate-down",
    "zoom-in",
    "zoom-out",
    "arc-left",
    "arc-right",
)

_ARC_RADIUS = 2.0


def _check_frames(n_frames: int) -> None:
    if n_frames < 2:
        raise InvalidInputError(field_name="n_frames", value=n_frames, expected="n_frames >= 2")


def random_smooth_trajectory(n_frames: int, seed: int, frame_rate: float = 30.0) -> Trajectory:
    """Cubic-spline-smoothed random walk in position and orientation.

    Knots are a Gaussian random walk pinned to zero at the first knot, so the
    trajectory starts at the identity; orientations stay below 1 rad.
    """
    _check_frames(n_frames)
    rng = make_rng(seed, "smooth-trajectory")
    knots = max(4, n_frames // 4 + 2)
    knot_times = np.linspace(0.0, 1.0, knots)

    trans_knots = np.vstack([np.zeros(3), np.cumsum(rng.normal(0.0, 0.3, size=(knots - 1, 3)), axis=0)])
    rot_knots = np.vstack([np.zeros(3), np.cumsum(rng.normal(0.0, 0.15, size=(knots - 1, 3)), axis=0)])

    times = np.linspace(0.0, 1.0, n_frames)
    translations = CubicSpline(knot_times, trans_knots, axis=0)(times)
    omegas = CubicSpline(knot_times, rot_knots, axis=0)(times)

    norms = np.linalg.norm(omegas, axis=1, keepdims=True)
    omegas = np.where(norms > MAX_BANK_ANGLE, omegas * (MAX_BANK_ANGLE / np.maximum(norms, 1e-300)), omegas)
    translations[0] = 0.0
    omegas[0] = 0.0

    poses = [Pose(exp_so3(w), t) for w, t in zip(omegas, translations)]
    return normalize_gauge(Trajectory(tuple(poses), frame_rate=frame_rate))


def canonical_trajectory(
    kind: str,
    n_frames: int,
    speed: float = 0.05,
    angular_speed: float = 0.02,
    frame_rate: float = 30.0,
) -> Trajectory:
    """One of the ten canonical camera moves at constant speed.

    Args:
        kind: One of ``CANONICAL_KINDS``
        n_frames: Frame count (>= 2)
        speed: Translation per frame in metres (translate/zoom moves)
        angular_speed: Rotation per frame in radians (pan/tilt/arc moves)
    """
    _check_frames(n_frames)
    if kind not in CANONICAL_KINDS:
        raise InvalidInputError(field_name="kind", value=kind, expected=f"one of {', '.join(CANONICAL_KINDS)}")

    poses: List[Pose] = []
    for i in range(n_frames):
        angle = i * angular_speed
        offset = i * speed
        rotation = Rotation.identity()
        translation = np.zeros(3)
        if kind == "pan-left":
            rotation = rot_y(-angle)
        elif kind == "pan-right":
            rotation = rot_y(angle)
        elif kind == "tilt-up":
            rotation = rot_x(angle)
        elif kind == "tilt-down":
            rotation = rot_x(-angle)
        elif kind == "translate-up":
            translation = np.array([0.0, -offset, 0.0])
        elif kind == "translate-down":
            translation = np.array([0.0, offset, 0.0])
        elif kind == "zoom-in":
            translation = np.array([0.0, 0.0, offset])
        elif kind == "zoom-out":
            translation = np.array([0.0, 0.0, -offset])
        else:
            # orbit a point _ARC_RADIUS ahead, keeping it centred
            phi = angle if kind == "arc-left" else -angle
            rotation = rot_y(phi)
            translation = np.array([-_ARC_RADIUS * np.sin(phi), 0.0, _ARC_RADIUS * (1.0 - np.cos(phi))])
        poses.append(Pose(rotation, translation))
    return Trajectory(tuple(poses), frame_rate=frame_rate)


def generate_bank(
    count: int,
    n_frames: int,
    seed: int,
    kind: BankKind = BankKind.RANDOM,
    frame_rate: float = 30.0,
) -> List[Trajectory]:
    """``count`` trajectories; deterministic given ``seed``.

    ``canonical`` cycles through CANONICAL_KINDS with per-entry speed factors
    in [0.5, 1.5]; ``mixed`` alternates random (even index) and canonical.
    """
    if count < 1:
        raise InvalidInputError(field_name="count", value=count, expected="count >= 1")
    _check_frames(n_frames)
    kind = BankKind.parse(kind)

    bank = []
    for k in range(count):
        use_canonical = kind == BankKind.CANONICAL or (kind == BankKind.MIXED and k % 2 == 1)
        if use_canonical:
            factor = float(make_rng(seed, "canonical-speed", k).uniform(0.5, 1.5))
            name = CANONICAL_KINDS[(k // 2 if kind == BankKind.MIXED else k) % len(CANONICAL_KINDS)]
            bank.append(canonical_trajectory(name, n_frames, 0.05 * factor, 0.02 * factor, frame_rate))
        else:
            bank.append(random_smooth_trajectory(n_frames, derive_seed(seed, "bank", k), frame_rate))
    _logger.debug(f"Generated {count} {kind.value} trajectories of {n_frames} frames")
    return bank


@dataclass(frozen=True, eq=False)
class DriftSample:
    """Condition at physical speed and the scale-corrupted regression target."""

    condition: Trajectory
    target: Trajectory
    scale: float


def build_drift_corpus(
    bank: Sequence[Trajectory],
    rescale_spec: RescaleSpec,
    scale_range: Tuple[float, float],
    seed: int,
) -> List[DriftSample]:
    """One sample per bank entry: condition = rescaled entry, target = condition with translations × u.

    ``u`` is drawn uniformly from ``scale_range`` per sample, so a model
    fitted to the corpus learns shape but not metric scale.
    """
    if len(bank) == 0:
        raise InvalidInputError(field_name="bank", value=0, expected="non-empty trajectory bank")
    low, high = scale_range
    if not 0 < low <= high:
        raise InvalidInputError(field_name="scale_range", value=scale_range, expected="0 < low <= high")

    corpus = []
    for i, entry in enumerate(bank):
        condition = sample_target_trajectory([entry], rescale_spec, derive_seed(seed, "drift-condition", i))
        u = float(make_rng(seed, "drift-scale", i).uniform(low, high))
        target = condition.with_poses([Pose(p.rotation, u * p.translation) for p in condition.poses])
        corpus.append(DriftSample(condition, target, u))
    return corpus
