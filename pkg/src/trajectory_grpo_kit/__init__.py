"""
Trajectory GRPO Kit

Verifiable geometry rewards on SE(3) camera trajectories, metric-aware
target rescaling, and group-relative policy optimization of a small
flow-matching trajectory generator.
"""

# Version
__version__ = "0.1.0"

# Config exports
from .config import (
    BankKind,
    RewardSet,
    RLOptimizer,
    RunConfig,
    StdMode,
    TimestepSchedule,
    WeightScheme,
    CHANNELS,
    REWARD_SET_MASKS,
    ENV_LOADER_AVAILABLE,
    get_config_from_env,
    load_config,
    load_config_file,
)

# Core exports
from .core import (
    TrajKitError,
    InvalidInputError,
    GeometryError,
    InvalidRotationError,
    AmbiguousLogError,
    EncodingError,
    TrajectoryIOError,
    TrajectoryParseError,
    TrajectoryValidationError,
    ConfigError,
    SamplingError,
    DegenerateSupportError,
    OptimizationError,
    NumericalError,
    NonFiniteGradientError,
    CheckpointError,
    CheckpointVersionError,
    LoggerAdapter,
    derive_seed,
    make_rng,
)

# Geometry exports
from .geometry import (
    Intrinsics,
    Pose,
    Rotation,
    Trajectory,
    exp_so3,
    geodesic_angle,
    log_so3,
    normalize_gauge,
    relative_pose,
)

# I/O exports
from .io import (
    MetricsSink,
    emit_metrics,
    parse_trajectory,
    read_trajectory,
    read_trajectory_bank,
    serialize_trajectory,
    write_trajectory,
)

# Reward exports
from .reward import (
    EstimatorNoise,
    GeometryErrors,
    TemporalWeights,
    aesthetic_channels,
    geometry_errors,
    geometry_reward_channels,
    linear_weights,
    noisy_estimator,
    temporal_weights,
)

# Sampling exports
from .sampling import (
    RescaleSpec,
    SpeedProfile,
    build_drift_corpus,
    generate_bank,
    max_speeds,
    rescale_factors,
    rescale_trajectory,
    sample_target_trajectory,
    sample_truncated_gaussian,
)

# GRPO exports
from .grpo import (
    AdvantageSet,
    ChannelWeights,
    StepBatch,
    compute_advantages,
    fuse_advantages,
    normalize_channel,
    surrogate_objective,
    timestep_weights,
)

# Policy exports
from .policy import (
    FlowPolicy,
    PolicyArchitecture,
    Rollout,
    ValidationReport,
    WindowSchedule,
    decode,
    encode,
    evaluate_policy,
    flow_pretrain,
    grpo_train,
    init_policy,
    load_checkpoint,
    sample_group,
    save_checkpoint,
    speed_sweep,
)

# Monitoring exports
# PrometheusMonitor is None without prometheus-client
from .monitoring import BaseMonitor, MetricType, NoOpMonitor, PrometheusMonitor
from .monitoring import PROMETHEUS_AVAILABLE as MONITORING_AVAILABLE

__all__ = [
    # Version
    '__version__',
    # Config
    'BankKind',
    'RewardSet',
    'RLOptimizer',
    'RunConfig',
    'StdMode',
    'TimestepSchedule',
    'WeightScheme',
    'CHANNELS',
    'REWARD_SET_MASKS',
    'ENV_LOADER_AVAILABLE',
    'get_config_from_env',
    'load_config',
    'load_config_file',
    # Core
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
    # Geometry
    'Intrinsics',
    'Pose',
    'Rotation',
    'Trajectory',
    'exp_so3',
    'geodesic_angle',
    'log_so3',
    'normalize_gauge',
    'relative_pose',
    # I/O
    'MetricsSink',
    'emit_metrics',
    'parse_trajectory',
    'read_trajectory',
    'read_trajectory_bank',
    'serialize_trajectory',
    'write_trajectory',
    # Reward
    'EstimatorNoise',
    'GeometryErrors',
    'TemporalWeights',
    'aesthetic_channels',
    'geometry_errors',
    'geometry_reward_channels',
    'linear_weights',
    'noisy_estimator',
    'temporal_weights',
    # Sampling
    'RescaleSpec',
    'SpeedProfile',
    'build_drift_corpus',
    'generate_bank',
    'max_speeds',
    'rescale_factors',
    'rescale_trajectory',
    'sample_target_trajectory',
    'sample_truncated_gaussian',
    # GRPO
    'AdvantageSet',
    'ChannelWeights',
    'StepBatch',
    'compute_advantages',
    'fuse_advantages',
    'normalize_channel',
    'surrogate_objective',
    'timestep_weights',
    # Policy
    'FlowPolicy',
    'PolicyArchitecture',
    'Rollout',
    'ValidationReport',
    'WindowSchedule',
    'decode',
    'encode',
    'evaluate_policy',
    'flow_pretrain',
    'grpo_train',
    'init_policy',
    'load_checkpoint',
    'sample_group',
    'save_checkpoint',
    'speed_sweep',
    # Monitoring
    'BaseMonitor',
    'MetricType',
    'NoOpMonitor',
    'PrometheusMonitor',
    'MONITORING_AVAILABLE',
]
