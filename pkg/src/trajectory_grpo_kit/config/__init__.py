"""
Configuration module for trajectory-grpo-kit
"""

from .choices import BankKind, MonitorKind, RewardSet, RLOptimizer, StdMode, TimestepSchedule, WeightScheme
from .run_config import RunConfig, config_keys
from .presets import (
    AESTHETIC_CHANNELS,
    CHANNELS,
    GEOMETRY_CHANNELS,
    REWARD_SET_MASKS,
    effective_channel_weights,
)
from .loader import (
    ENV_LOADER_AVAILABLE,
    get_config_from_env,
    load_config,
    load_config_file,
    parse_config_text,
)

__all__ = [
    'BankKind',
    'MonitorKind',
    'RewardSet',
    'RLOptimizer',
    'StdMode',
    'TimestepSchedule',
    'WeightScheme',
    'RunConfig',
    'config_keys',
    'AESTHETIC_CHANNELS',
    'CHANNELS',
    'GEOMETRY_CHANNELS',
    'REWARD_SET_MASKS',
    'effective_channel_weights',
    'ENV_LOADER_AVAILABLE',
    'get_config_from_env',
    'load_config',
    'load_config_file',
    'parse_config_text',
]
