"""
Reward channels for trajectory-grpo-kit
"""

from .geometry import (
    GeometryErrors,
    TemporalWeights,
    geometry_errors,
    geometry_reward_channels,
    linear_weights,
    per_frame_errors,
    temporal_weights,
)
from .estimator import EstimatorNoise, noisy_estimator
from .aesthetic import AestheticScores, aesthetic_channels

__all__ = [
    'GeometryErrors',
    'TemporalWeights',
    'geometry_errors',
    'geometry_reward_channels',
    'linear_weights',
    'per_frame_errors',
    'temporal_weights',
    'EstimatorNoise',
    'noisy_estimator',
    'AestheticScores',
    'aesthetic_channels',
]
