"""
Toy flow-matching trajectory policy: latent codec, velocity network,
windowed SDE sampler, pretraining, GRPO training, checkpoints and validation.
"""

from .checkpoint import (
    MAGIC,
    VERSION,
    checkpoint_bytes,
    load_checkpoint,
    policy_from_bytes,
    save_checkpoint,
)
from .evaluation import (
    DEFAULT_SPEED_FACTORS,
    ValidationReport,
    evaluate_policy,
    speed_sweep,
    validation_set,
)
from .latent import FRAME_DIM, LATENT_ANGLE_LIMIT, clamp_latent, decode, encode, latent_dim
from .network import (
    CONDITION_LAYERS,
    LAYER_NAMES,
    FlowPolicy,
    ForwardCache,
    PolicyArchitecture,
    backward,
    forward,
    init_policy,
    layer_mask,
    time_embedding,
)
from .optim import SGD, Adam, clip_grad_norm, make_optimizer
from .pretrain import PretrainResult, encode_corpus, flow_matching_loss, flow_pretrain, max_training_time
from .sampler import (
    Rollout,
    WindowSchedule,
    initial_noise,
    log_density_gradient,
    rollout_log_densities,
    sample_group,
    sample_ode,
    sample_rollout,
    step_sigma,
    step_time,
    transition_log_density,
)
from .trainer import TrainResult, grpo_train, rollout_rewards

__all__ = [
    'MAGIC',
    'VERSION',
    'checkpoint_bytes',
    'load_checkpoint',
    'policy_from_bytes',
    'save_checkpoint',
    'DEFAULT_SPEED_FACTORS',
    'ValidationReport',
    'evaluate_policy',
    'speed_sweep',
    'validation_set',
    'FRAME_DIM',
    'LATENT_ANGLE_LIMIT',
    'clamp_latent',
    'decode',
    'encode',
    'latent_dim',
    'CONDITION_LAYERS',
    'LAYER_NAMES',
    'FlowPolicy',
    'ForwardCache',
    'PolicyArchitecture',
    'backward',
    'forward',
    'init_policy',
    'layer_mask',
    'time_embedding',
    'SGD',
    'Adam',
    'clip_grad_norm',
    'make_optimizer',
    'PretrainResult',
    'encode_corpus',
    'flow_matching_loss',
    'flow_pretrain',
    'max_training_time',
    'Rollout',
    'WindowSchedule',
    'initial_noise',
    'log_density_gradient',
    'rollout_log_densities',
    'sample_group',
    'sample_ode',
    'sample_rollout',
    'step_sigma',
    'step_time',
    'transition_log_density',
    'TrainResult',
    'grpo_train',
    'rollout_rewards',
]
