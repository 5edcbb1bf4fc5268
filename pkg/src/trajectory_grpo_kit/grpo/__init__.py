"""
Group Relative Policy Optimization arithmetic
"""

from .advantages import (
    AdvantageSet,
    ChannelWeights,
    RewardVector,
    compute_advantages,
    fuse_advantages,
    group_std,
    normalize_channel,
    normalize_groups,
)
from .surrogate import (
    StepBatch,
    SurrogateResult,
    gaussian_log_density,
    surrogate_objective,
    timestep_weights,
)

__all__ = [
    'AdvantageSet',
    'ChannelWeights',
    'RewardVector',
    'compute_advantages',
    'fuse_advantages',
    'group_std',
    'normalize_channel',
    'normalize_groups',
    'StepBatch',
    'SurrogateResult',
    'gaussian_log_density',
    'surrogate_objective',
    'timestep_weights',
]
