"""
Rigid-body geometry for trajectory-grpo-kit
"""

from .se3 import (
    Intrinsics,
    Pose,
    Rotation,
    Trajectory,
    compose,
    ensure_log_safe,
    exp_so3,
    geodesic_angle,
    hat,
    inverse,
    log_so3,
    normalize_gauge,
    relative_pose,
    rot_x,
    rot_y,
    rot_z,
    rotation_angle,
    transform_trajectory,
    vee,
)

__all__ = [
    'Intrinsics',
    'Pose',
    'Rotation',
    'Trajectory',
    'compose',
    'ensure_log_safe',
    'exp_so3',
    'geodesic_angle',
    'hat',
    'inverse',
    'log_so3',
    'normalize_gauge',
    'relative_pose',
    'rot_x',
    'rot_y',
    'rot_z',
    'rotation_angle',
    'transform_trajectory',
    'vee',
]
