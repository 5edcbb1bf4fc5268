"""
Core module for trajectory-grpo-kit
"""

from .exceptions import (
    TrajKitError,
    InvalidInputError,
    # Geometry
    GeometryError,
    InvalidRotationError,
    AmbiguousLogError,
    EncodingError,
    # Trajectory I/O
    TrajectoryIOError,
    TrajectoryParseError,
    TrajectoryValidationError,
    # Config
    ConfigError,
    # Sampling
    SamplingError,
    DegenerateSupportError,
    # Optimization
    OptimizationError,
    NumericalError,
    NonFiniteGradientError,
    # Checkpoints
    CheckpointError,
    CheckpointVersionError,
)
from .logging import LoggerAdapter
from .seeding import derive_seed, make_rng

__all__ = [
    'TrajKitError',
    'InvalidInputError',
    'GeometryError',
    'InvalidRotationError',
    'AmbiguousLogError',
    'EncodingError',
    'TrajectoryIOError',
    'TrajectoryParseError',
    'TrajectoryValidationError',
    'ConfigError',
    'SamplingError',
    'DegenerateSupportError',
    'OptimizationError',
    'NumericalError',
    'NonFiniteGradientError',
    'CheckpointError',
    'CheckpointVersionError',
    'LoggerAdapter',
    'derive_seed',
    'make_rng',
]
