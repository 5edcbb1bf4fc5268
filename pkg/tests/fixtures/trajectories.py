"""
Hand-built trajectories shared by the tests
"""

from typing import Optional, Sequence

import numpy as np

from trajectory_grpo_kit.geometry import Pose, Rotation, Trajectory, exp_so3, rot_z


def make_trajectory(translations, rotations: Optional[Sequence[Rotation]] = None, frame_rate: float = 30.0) -> Trajectory:
    """Trajectory from translations and optional Rotation objects (identity when omitted)."""
    if rotations is None:
        rotations = [Rotation.identity()] * len(translations)
    poses = tuple(Pose(r, np.asarray(t, dtype=float)) for r, t in zip(rotations, translations))
    return Trajectory(poses, frame_rate=frame_rate)


def static_trajectory(n_frames: int = 4) -> Trajectory:
    """Identity rotations, zero translations."""
    return make_trajectory([np.zeros(3)] * n_frames)


def coaxial_trajectory(n_frames: int, step_angle: float) -> Trajectory:
    """R_i = rot_z(i·step_angle), zero translations."""
    return make_trajectory([np.zeros(3)] * n_frames, [rot_z(i * step_angle) for i in range(n_frames)])


def random_trajectory(rng: np.random.Generator, n_frames: int = 8, max_angle: float = 2.5) -> Trajectory:
    """Unstructured random poses; rotation angles stay below ``max_angle``."""
    poses = []
    for _ in range(n_frames):
        omega = rng.normal(size=3)
        omega *= rng.uniform(0.0, max_angle) / np.linalg.norm(omega)
        poses.append(Pose(exp_so3(omega), rng.normal(scale=2.0, size=3)))
    return Trajectory(tuple(poses))


def random_pose(rng: np.random.Generator) -> Pose:
    omega = rng.normal(size=3)
    omega *= rng.uniform(0.0, 3.0) / np.linalg.norm(omega)
    return Pose(exp_so3(omega), rng.normal(scale=5.0, size=3))
