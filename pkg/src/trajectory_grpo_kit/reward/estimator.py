"""
Noisy pose-estimation oracle.

Stands in for a learned metric 3D evaluator: returns the input trajectory
with per-frame Gaussian translation jitter and a left-multiplied random
rotation. Frame 1 is the gauge anchor and stays exact.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..core.exceptions import InvalidInputError
from ..core.seeding import make_rng
from ..geometry.se3 import Pose, Trajectory, exp_so3


@dataclass(frozen=True)
class EstimatorNoise:
    sigma_trans: float
    sigma_rot: float
    seed: int = 0

    def __post_init__(self):
        for name in ("sigma_trans", "sigma_rot"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidInputError(field_name=name, value=value, expected="finite value >= 0")
        if self.seed < 0:
            raise InvalidInputError(field_name="seed", value=self.seed, expected="non-negative seed")

    @property
    def is_exact(self) -> bool:
        return self.sigma_trans == 0.0 and self.sigma_rot == 0.0


def noisy_estimator(generated: Trajectory, noise: EstimatorNoise) -> Trajectory:
    """Perturb frames 2..N of ``generated``; deterministic given ``noise.seed``."""
    if noise.is_exact:
        return generated

    rng = make_rng(noise.seed, "estimator")
    count = len(generated) - 1
    trans_noise = rng.normal(0.0, 1.0, size=(count, 3)) * noise.sigma_trans
    rot_noise = rng.normal(0.0, 1.0, size=(count, 3)) * noise.sigma_rot

    poses = [generated.poses[0]]
    for pose, dt, dr in zip(generated.poses[1:], trans_noise, rot_noise):
        poses.append(Pose(exp_so3(dr) @ pose.rotation, pose.translation + dt))
    return generated.with_poses(poses)
