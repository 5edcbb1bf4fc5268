"""
Rigid-body math on SO(3)/SE(3).

Rotations are stored as 3×3 matrices. Poses are camera-to-world transforms:
``x_world = R @ x_cam + t`` with ``t`` the camera centre in metres. Every
value type is immutable (frozen dataclass over read-only arrays) and every
operation is a pure function.

Conventions:
    compose(a, b)        = a ∘ b          (R_a R_b, R_a t_b + t_a)
    inverse(p)           = p⁻¹            (Rᵀ, −Rᵀ t)
    relative_pose(a, b)  = a⁻¹ ∘ b        (R_aᵀ R_b, R_aᵀ (t_b − t_a))
    normalize_gauge(T)   = (p₁⁻¹ ∘ p_i)_i
"""

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import (
    AmbiguousLogError,
    InvalidInputError,
    InvalidRotationError,
)

# --------------------------------------------------------------
# NUMERICAL TOLERANCES
# --------------------------------------------------------------
ORTHONORMALITY_TOL = 1e-6
#   Largest |mᵀm − I| entry (and |det − 1|) a matrix may show and still be
#   accepted as a rotation. Matrices built by this module sit near 1e-15.

SMALL_ANGLE = 1e-8
#   Below this angle exp/log switch to second-order Taylor terms.

NEAR_PI = 1e-6
#   Within this distance of π the log axis is read from the symmetric part.

_IDENTITY = np.eye(3)
_IDENTITY.setflags(write=False)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _as_vector3(value, field_name: str) -> np.ndarray:
    vector = np.array(value, dtype=float).reshape(-1)
    if vector.shape != (3,):
        raise InvalidInputError(
            field_name=field_name,
            expected="3-vector",
            received=f"shape {np.shape(value)}",
        )
    if not np.all(np.isfinite(vector)):
        raise InvalidInputError(field_name=field_name, value=vector.tolist(), expected="finite components")
    return vector


def _check_rotation_matrix(m: np.ndarray, operation: Optional[str] = None) -> None:
    orthonormality_error = float(np.max(np.abs(m.T @ m - _IDENTITY)))
    determinant = float(np.linalg.det(m))
    if orthonormality_error > ORTHONORMALITY_TOL or abs(determinant - 1.0) > ORTHONORMALITY_TOL:
        raise InvalidRotationError(
            orthonormality_error=orthonormality_error,
            determinant=determinant,
            tolerance=ORTHONORMALITY_TOL,
            operation=operation,
        )


# ============================================================================
# DOMAIN TYPES
# ============================================================================

@dataclass(frozen=True, eq=False)
class Rotation:
    """Element of SO(3) stored as a read-only 3×3 matrix.

    Raises:
        InvalidInputError: wrong shape or non-finite entries
        InvalidRotationError: mᵀm ≠ I or det(m) ≠ 1 beyond ORTHONORMALITY_TOL
    """

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (3, 3):
            raise InvalidInputError(field_name="m", expected="3x3 matrix", received=f"shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidInputError(field_name="m", expected="finite entries")
        _check_rotation_matrix(m, operation="Rotation")
        object.__setattr__(self, "m", _frozen(m))

    @classmethod
    def identity(cls) -> "Rotation":
        return cls._trusted(np.eye(3))

    @classmethod
    def _trusted(cls, m: np.ndarray) -> "Rotation":
        # Skips validation; only for matrices this module constructed itself.
        instance = object.__new__(cls)
        object.__setattr__(instance, "m", _frozen(np.array(m, dtype=float)))
        return instance

    def transpose(self) -> "Rotation":
        return Rotation._trusted(self.m.T)

    def __matmul__(self, other: "Rotation") -> "Rotation":
        return Rotation._trusted(self.m @ other.m)

    def allclose(self, other: "Rotation", atol: float = 1e-9) -> bool:
        return bool(np.allclose(self.m, other.m, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        return f"Rotation(angle={rotation_angle(self):.6f})"


@dataclass(frozen=True, eq=False)
class Pose:
    """Rigid transform: rotation plus translation in metres."""

    rotation: Rotation
    translation: np.ndarray

    def __post_init__(self):
        if not isinstance(self.rotation, Rotation):
            raise InvalidInputError(field_name="rotation", expected="Rotation", received=type(self.rotation).__name__)
        object.__setattr__(self, "translation", _frozen(_as_vector3(self.translation, "translation")))

    @classmethod
    def identity(cls) -> "Pose":
        return cls(Rotation.identity(), np.zeros(3))

    def allclose(self, other: "Pose", atol: float = 1e-9) -> bool:
        return self.rotation.allclose(other.rotation, atol) and bool(
            np.allclose(self.translation, other.translation, rtol=0.0, atol=atol)
        )

    def __repr__(self) -> str:
        return f"Pose(rotation={self.rotation!r}, translation={self.translation.tolist()})"


@dataclass(frozen=True)
class Intrinsics:
    """Pinhole intrinsics in pixels. Carried through I/O, never used by rewards."""

    fx: float
    fy: float
    cx: float
    cy: float

    def __post_init__(self):
        for name in ("fx", "fy"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidInputError(field_name=name, value=value, expected="positive focal length")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-indexed sequence of N ≥ 2 poses with optional per-frame intrinsics.

    ``frame_rate`` (frames per second) is metadata; serialization derives
    timestamps from it.
    """

    poses: Tuple[Pose, ...]
    intrinsics: Optional[Tuple[Intrinsics, ...]] = None
    frame_rate: float = 30.0

    def __post_init__(self):
        poses = tuple(self.poses)
        if len(poses) < 2:
            raise InvalidInputError(field_name="poses", value=len(poses), expected="at least 2 poses")
        for index, pose in enumerate(poses):
            if not isinstance(pose, Pose):
                raise InvalidInputError(field_name=f"poses[{index}]", expected="Pose", received=type(pose).__name__)
        object.__setattr__(self, "poses", poses)

        if self.intrinsics is not None:
            intrinsics = tuple(self.intrinsics)
            if len(intrinsics) != len(poses):
                raise InvalidInputError(
                    field_name="intrinsics",
                    value=len(intrinsics),
                    expected=f"one Intrinsics per frame ({len(poses)})",
                )
            object.__setattr__(self, "intrinsics", intrinsics)

        if not (math.isfinite(self.frame_rate) and self.frame_rate > 0):
            raise InvalidInputError(field_name="frame_rate", value=self.frame_rate, expected="positive frames per second")

    # --------------------------------------------------------------
    # CONSTRUCTION
    # --------------------------------------------------------------
    @classmethod
    def from_arrays(
        cls,
        rotations: np.ndarray,
        translations: np.ndarray,
        frame_rate: float = 30.0,
        intrinsics: Optional[Sequence[Intrinsics]] = None,
    ) -> "Trajectory":
        """Build from (N, 3, 3) rotation and (N, 3) translation arrays."""
        rotations = np.asarray(rotations, dtype=float)
        translations = np.asarray(translations, dtype=float)
        if rotations.ndim != 3 or rotations.shape[1:] != (3, 3):
            raise InvalidInputError(field_name="rotations", expected="array of shape (N, 3, 3)", received=f"shape {rotations.shape}")
        if translations.shape != (rotations.shape[0], 3):
            raise InvalidInputError(
                field_name="translations",
                expected=f"array of shape ({rotations.shape[0]}, 3)",
                received=f"shape {translations.shape}",
            )
        poses = tuple(Pose(Rotation(r), t) for r, t in zip(rotations, translations))
        return cls(poses, tuple(intrinsics) if intrinsics is not None else None, frame_rate)

    def with_poses(self, poses: Sequence[Pose]) -> "Trajectory":
        """Same metadata, new poses (lengths must agree when intrinsics are set)."""
        return Trajectory(tuple(poses), self.intrinsics, self.frame_rate)

    # --------------------------------------------------------------
    # ACCESSORS
    # --------------------------------------------------------------
    @property
    def translations(self) -> np.ndarray:
        return np.stack([pose.translation for pose in self.poses])

    @property
    def rotations(self) -> np.ndarray:
        return np.stack([pose.rotation.m for pose in self.poses])

    def __len__(self) -> int:
        return len(self.poses)

    def __iter__(self) -> Iterator[Pose]:
        return iter(self.poses)

    def __getitem__(self, index: int) -> Pose:
        return self.poses[index]

    def allclose(self, other: "Trajectory", atol: float = 1e-9) -> bool:
        return len(self) == len(other) and all(a.allclose(b, atol) for a, b in zip(self.poses, other.poses))

    def __repr__(self) -> str:
        return f"Trajectory(frames={len(self)}, frame_rate={self.frame_rate})"


# ============================================================================
# LIE-ALGEBRA MAPS
# ============================================================================

def hat(omega) -> np.ndarray:
    """3-vector → skew-symmetric matrix [ω]ₓ."""
    x, y, z = _as_vector3(omega, "omega")
    return np.array([
        [0.0, -z, y],
        [z, 0.0, -x],
        [-y, x, 0.0],
    ])


def vee(m: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix → 3-vector (inverse of :func:`hat`)."""
    m = np.asarray(m, dtype=float)
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def exp_so3(omega) -> Rotation:
    """Rodrigues exponential: rotation about ω/‖ω‖ by ‖ω‖ radians.

    Below SMALL_ANGLE the sin/cos coefficients are replaced by their
    second-order Taylor expansions.

    Raises:
        InvalidInputError: non-finite or wrongly shaped input

    Examples:
        >>> exp_so3([0.0, 0.0, math.pi / 2]).m.round(12)
        array([[ 0., -1.,  0.],
               [ 1.,  0.,  0.],
               [ 0.,  0.,  1.]])
    """
    omega = _as_vector3(omega, "omega")
    theta_sq = float(omega @ omega)
    theta = math.sqrt(theta_sq)
    if theta < SMALL_ANGLE:
        a = 1.0 - theta_sq / 6.0
        b = 0.5 - theta_sq / 24.0
    else:
        a = math.sin(theta) / theta
        half = math.sin(0.5 * theta)
        b = 2.0 * half * half / theta_sq
    k = hat(omega)
    return Rotation._trusted(np.eye(3) + a * k + b * (k @ k))


def _axis_near_pi(m: np.ndarray, cos_theta: float, sin_axis: np.ndarray) -> np.ndarray:
    # Symmetric part: cosθ·I + (1 − cosθ)·n nᵀ. At θ = π this is (m + I)/2.
    outer = (0.5 * (m + m.T) - cos_theta * _IDENTITY) / (1.0 - cos_theta)
    k = int(np.argmax(np.diag(outer)))
    axis = outer[:, k] / math.sqrt(max(outer[k, k], 0.0))
    # Off-diagonal entries of column k already carry the signs relative to n_k > 0;
    # away from exact π the antisymmetric part decides the overall sign.
    if float(axis @ sin_axis) < 0.0:
        axis = -axis
    return axis / np.linalg.norm(axis)


def log_so3(r: Union[Rotation, np.ndarray]) -> np.ndarray:
    """Principal axis-angle vector of a rotation, norm in [0, π].

    Raises:
        InvalidRotationError: matrix input violating orthonormality beyond 1e-6
    """
    if isinstance(r, Rotation):
        m = r.m
    else:
        m = np.asarray(r, dtype=float)
        if m.shape != (3, 3) or not np.all(np.isfinite(m)):
            raise InvalidInputError(field_name="r", expected="finite 3x3 rotation matrix")
        _check_rotation_matrix(m, operation="log_so3")

    sin_axis = 0.5 * vee(m - m.T)
    sin_theta = float(np.linalg.norm(sin_axis))
    cos_theta = min(1.0, max(-1.0, 0.5 * (float(np.trace(m)) - 1.0)))
    theta = math.atan2(sin_theta, cos_theta)

    if theta < SMALL_ANGLE:
        return sin_axis * (1.0 + theta * theta / 6.0)
    if math.pi - theta < NEAR_PI:
        return theta * _axis_near_pi(m, cos_theta, sin_axis)
    return sin_axis * (theta / sin_theta)


def geodesic_angle(a: Rotation, b: Rotation) -> float:
    """Geodesic distance arccos((Tr(aᵀb) − 1)/2) on SO(3), in [0, π].

    The cosine is clamped to [−1, 1]; the angle is taken with atan2 against
    the antisymmetric part of aᵀb, which equals the arccos form but keeps
    full precision near 0 and π. Equal rotations give exactly 0.
    """
    if a is b or np.array_equal(a.m, b.m):
        return 0.0
    m = a.m.T @ b.m
    cos_theta = min(1.0, max(-1.0, 0.5 * (float(np.trace(m)) - 1.0)))
    sin_theta = 0.5 * float(np.linalg.norm(vee(m - m.T)))
    return math.atan2(sin_theta, cos_theta)


def rotation_angle(r: Rotation) -> float:
    """Angle of ``r`` from the identity."""
    return float(np.linalg.norm(log_so3(r)))


def rot_x(angle: float) -> Rotation:
    return exp_so3([angle, 0.0, 0.0])


def rot_y(angle: float) -> Rotation:
    return exp_so3([0.0, angle, 0.0])


def rot_z(angle: float) -> Rotation:
    return exp_so3([0.0, 0.0, angle])


# ============================================================================
# POSE ALGEBRA
# ============================================================================

def compose(a: Pose, b: Pose) -> Pose:
    """a ∘ b: apply ``b`` first, then ``a``."""
    return Pose(
        Rotation._trusted(a.rotation.m @ b.rotation.m),
        a.rotation.m @ b.translation + a.translation,
    )


def inverse(p: Pose) -> Pose:
    rt = p.rotation.m.T
    return Pose(Rotation._trusted(rt), -(rt @ p.translation))


def relative_pose(a: Pose, b: Pose) -> Pose:
    """Transform taking frame ``a`` to frame ``b``: compose(a, relative_pose(a, b)) = b."""
    rt = a.rotation.m.T
    return Pose(
        Rotation._trusted(rt @ b.rotation.m),
        rt @ (b.translation - a.translation),
    )


def transform_trajectory(g: Pose, t: Trajectory) -> Trajectory:
    """Left-compose every pose with ``g`` (a change of world frame)."""
    return t.with_poses([compose(g, pose) for pose in t.poses])


def normalize_gauge(t: Trajectory) -> Trajectory:
    """Express ``t`` relative to its first pose so that pose₁ is the identity.

    All pairwise relative poses are preserved; the operation is idempotent.
    """
    anchor = t.poses[0]
    poses = [Pose.identity()]
    poses.extend(relative_pose(anchor, pose) for pose in t.poses[1:])
    return t.with_poses(poses)


def ensure_log_safe(t: Trajectory, operation: str, margin: float = NEAR_PI) -> None:
    """Raise AmbiguousLogError if any rotation of ``t`` is within ``margin`` of angle π."""
    for index, pose in enumerate(t.poses):
        angle = geodesic_angle(_IDENTITY_ROTATION, pose.rotation)
        if angle >= math.pi - margin:
            raise AmbiguousLogError(angle=angle, frame_index=index, operation=operation)


_IDENTITY_ROTATION = Rotation.identity()
