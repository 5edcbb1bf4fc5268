"""
Trajectory ↔ flat latent vector.

Per frame the latent holds the 3 translation coordinates followed by the 3
so(3) coordinates of the gauge-normalized rotation, giving 6·N values.
"""

import math

import numpy as np

from ..core.exceptions import EncodingError, InvalidInputError
from ..geometry.se3 import Pose, Trajectory, exp_so3, log_so3, normalize_gauge

LATENT_ANGLE_LIMIT = math.pi - 1e-3
FRAME_DIM = 6


def latent_dim(n_frames: int) -> int:
    return FRAME_DIM * n_frames


def encode(t: Trajectory) -> np.ndarray:
    """Gauge-normalize ``t`` and flatten it to a (6N,) latent.

    Raises:
        EncodingError: a normalized rotation is at or beyond π − 1e-3
    """
    normalized = normalize_gauge(t)
    z = np.empty((len(normalized), FRAME_DIM))
    for index, pose in enumerate(normalized.poses):
        omega = log_so3(pose.rotation)
        angle = float(np.linalg.norm(omega))
        if angle >= LATENT_ANGLE_LIMIT:
            raise EncodingError(frame_index=index, angle=angle, limit=LATENT_ANGLE_LIMIT)
        z[index, :3] = pose.translation
        z[index, 3:] = omega
    return z.reshape(-1)


def clamp_latent(z: np.ndarray) -> np.ndarray:
    """Copy of ``z`` with every so(3) block shrunk into the legal ball."""
    frames = np.array(z, dtype=float).reshape(-1, FRAME_DIM)
    norms = np.linalg.norm(frames[:, 3:], axis=1)
    over = norms > LATENT_ANGLE_LIMIT
    if np.any(over):
        frames[over, 3:] *= (LATENT_ANGLE_LIMIT / norms[over])[:, None]
    return frames.reshape(-1)


def decode(z: np.ndarray, frame_rate: float = 30.0) -> Trajectory:
    """(6N,) latent → Trajectory; total on finite input.

    Raises:
        InvalidInputError: length not a multiple of 6, fewer than 2 frames,
            or non-finite entries
    """
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.size % FRAME_DIM or z.size < 2 * FRAME_DIM:
        raise InvalidInputError(field_name="z", value=z.size, expected="length 6·N with N >= 2")
    if not np.all(np.isfinite(z)):
        raise InvalidInputError(field_name="z", expected="finite latent")
    frames = clamp_latent(z).reshape(-1, FRAME_DIM)
    poses = tuple(Pose(exp_so3(frame[3:]), frame[:3]) for frame in frames)
    return Trajectory(poses, frame_rate=frame_rate)
