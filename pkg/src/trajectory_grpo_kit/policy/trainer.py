"""
GRPO training loop.

One iteration:
    1. draw ``conditions_per_iteration`` targets from the bank at sampled
       physical speeds
    2. sample a group of G rollouts per target inside the current window
    3. score each decoded rollout: geometry channels through the noisy
       estimator against the target, aesthetic channels on the rollout itself
    4. normalize and fuse advantages per group
    5. ``inner_updates`` ascent steps on the clipped surrogate
    6. write one metrics record; its surrogate and clip fraction are
       evaluated at the updated parameters against the sampling-time
       log-densities

Every random stream is derived from ``config.seed`` and the iteration,
condition and rollout indices, so a run is reproducible regardless of
``num_workers``.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import ExitStack
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from typing_extensions import TypeAlias

from ..config.choices import RLOptimizer, StdMode, TimestepSchedule, WeightScheme
from ..config.presets import CHANNELS
from ..core.exceptions import InvalidInputError, NonFiniteGradientError, TrajKitError
from ..core.logging import LoggerAdapter
from ..core.seeding import derive_seed
from ..geometry.se3 import Trajectory
from ..grpo.advantages import AdvantageSet, ChannelWeights, RewardVector, compute_advantages
from ..grpo.surrogate import StepBatch, surrogate_objective, timestep_weights
from ..io.metrics import MetricsSink
from ..monitoring import BaseMonitor, NoOpMonitor
from ..reward.aesthetic import aesthetic_channels
from ..reward.estimator import EstimatorNoise, noisy_estimator
from ..reward.geometry import TemporalWeights, geometry_errors, geometry_reward_channels, temporal_weights
from ..sampling.rescale import RescaleSpec, sample_target_draw
from .evaluation import ValidationReport, evaluate_policy, validation_set
from .latent import encode
from .network import CONDITION_LAYERS, FlowPolicy, PolicyArchitecture, layer_mask
from .optim import clip_grad_norm, make_optimizer
from .sampler import Rollout, WindowSchedule, log_density_gradient, rollout_log_densities, sample_group, step_sigma

_logger = LoggerAdapter.get_logger(__name__)

ProgressCallback: TypeAlias = Callable[[int, Dict[str, Any]], None]
CheckpointCallback: TypeAlias = Callable[[int, FlowPolicy], None]


@dataclass(frozen=True, eq=False)
class TrainResult:
    """Final policy, emitted metrics records and validation history.

    ``validation`` maps the number of completed iterations to the report
    taken at that point; key 0 is the starting policy.
    """

    policy: FlowPolicy
    records: List[Dict[str, Any]]
    validation: Dict[int, ValidationReport] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class _GroupSample:
    target: Trajectory
    condition: np.ndarray
    rollouts: List[Rollout]
    rewards: List[RewardVector]


def rollout_rewards(
    rollout: Rollout,
    target: Trajectory,
    weights: TemporalWeights,
    noise: EstimatorNoise,
) -> RewardVector:
    """All five reward channels for one rollout."""
    estimate = noisy_estimator(rollout.trajectory, noise)
    r_trans, r_rot = geometry_reward_channels(geometry_errors(target, estimate, weights))
    scores = aesthetic_channels(rollout.trajectory)
    return {"rot": r_rot, "trans": r_trans, "vis": scores.s_vis, "mot": scores.s_mot, "hps": scores.s_hps}


def _check_inputs(policy: FlowPolicy, bank: Sequence[Trajectory], config) -> None:
    if len(bank) == 0:
        raise InvalidInputError(field_name="bank", value=0, expected="non-empty trajectory bank")
    lengths = {len(t) for t in bank}
    if lengths != {config.n_frames}:
        raise InvalidInputError(
            field_name="bank",
            expected=f"trajectories of n_frames={config.n_frames}",
            received=f"lengths {sorted(lengths)}",
        )
    architecture = PolicyArchitecture.from_config(config)
    if policy.architecture != architecture:
        raise InvalidInputError(
            field_name="policy",
            expected=f"architecture {architecture.to_dict()}",
            received=f"{policy.architecture.to_dict()}",
        )


def grpo_train(
    policy: FlowPolicy,
    bank: Sequence[Trajectory],
    rescale_spec: Optional[RescaleSpec],
    config,
    sink: Optional[MetricsSink] = None,
    monitor: Optional[BaseMonitor] = None,
    validation_conditions: Optional[Sequence[Trajectory]] = None,
    progress: Optional[ProgressCallback] = None,
    checkpoint_callback: Optional[CheckpointCallback] = None,
) -> TrainResult:
    """Run ``config.iterations`` GRPO iterations starting from ``policy``.

    Args:
        policy: starting policy, usually a pretrained checkpoint
        bank: source trajectories for target draws, all of ``n_frames`` frames
        rescale_spec: target speed distribution; ``config.rescale_spec()`` if None
        config: RunConfig
        sink: metrics destination; one record per iteration
        monitor: optional monitoring backend
        validation_conditions: frozen conditions for periodic validation;
            drawn from ``bank`` when validation is enabled and none are given
        progress: called as ``progress(iteration, record)``
        checkpoint_callback: called as ``callback(iterations_done, policy)``
            every ``checkpoint_every`` iterations

    Returns:
        TrainResult. With zero iterations the input policy is returned as is.

    Raises:
        NonFiniteGradientError: gradient became NaN/inf, naming the iteration
        TrajKitError: propagated from sampling, rewards or the surrogate
    """
    _check_inputs(policy, bank, config)
    monitor = monitor or NoOpMonitor()
    spec = rescale_spec if rescale_spec is not None else config.rescale_spec()
    window = WindowSchedule.from_config(config)
    channel_weights = ChannelWeights.from_config(config)
    frame_weights = temporal_weights(config.n_frames, WeightScheme.parse(config.weight_scheme))
    std_mode = StdMode.parse(config.std_mode)
    schedule = TimestepSchedule.parse(config.timestep_schedule)
    optimizer = make_optimizer(RLOptimizer.parse(config.rl_optimizer), config.rl_learning_rate)
    frozen = list(CONDITION_LAYERS) if config.freeze_condition_embedding else []
    mask = layer_mask(policy.architecture, frozen)
    T = config.num_steps

    validation: Dict[int, ValidationReport] = {}
    if config.validation_every > 0 and validation_conditions is None:
        validation_conditions = validation_set(bank, spec, config.validation_conditions, config.seed)
    if validation_conditions is not None and config.validation_every > 0:
        validation[0] = evaluate_policy(policy, validation_conditions, config)
        _logger.info(f"Validation before training: d_trans={validation[0].d_trans:.6f} m")

    _logger.info(
        f"GRPO training: iterations={config.iterations}, G={config.group_size}, T={T}, "
        f"W={config.window_size}, reward_set={config.reward_set}, optimizer={config.rl_optimizer}"
    )

    records: List[Dict[str, Any]] = []
    params = np.array(policy.params)

    with ExitStack() as stack:
        executor = None
        if config.num_workers > 1:
            executor = stack.enter_context(ThreadPoolExecutor(max_workers=config.num_workers))

        for iteration in range(config.iterations):
            started = time.perf_counter()
            active = window.active_steps(iteration, T)
            try:
                groups = _sample_groups(policy, bank, spec, config, window, frame_weights, iteration, executor)
                advantages = compute_advantages([g.rewards for g in groups], channel_weights, config.eps_std, std_mode)
                step_weights = timestep_weights(active, schedule, [step_sigma(k, T, config.sde_eta) for k in active])

                for _ in range(config.inner_updates):
                    _, _, grad = _surrogate_gradient(policy, groups, advantages, step_weights, active, config)
                    grad = grad * mask
                    if not np.all(np.isfinite(grad)):
                        raise NonFiniteGradientError(iteration=iteration)
                    grad, _ = clip_grad_norm(grad, config.max_grad_norm)
                    params = optimizer.step(params, -grad)
                    policy = policy.with_params(params)
                surrogate, clip_fraction, _ = _surrogate_gradient(
                    policy, groups, advantages, step_weights, active, config, with_grad=False
                )
            except TrajKitError as e:
                monitor.record_error(type(e).__name__, phase="grpo")
                raise

            done = iteration + 1
            duration = time.perf_counter() - started
            record = _metrics_record(
                iteration, groups, advantages, surrogate, clip_fraction, active,
                duration if config.metrics_timing else 0.0,
            )
            if validation_conditions is not None and config.validation_every > 0 and done % config.validation_every == 0:
                report = evaluate_policy(policy, validation_conditions, config)
                validation[done] = report
                record["validation"] = report.to_dict()
                monitor.record_validation(iteration, report)

            if sink is not None:
                sink.emit(record)
            records.append(record)
            monitor.record_iteration(iteration, record["reward_mean"], record["surrogate"], duration)
            _logger.info(
                f"Iteration {iteration}: surrogate={record['surrogate']:.6f} "
                f"r_trans={record['reward_mean']['trans']:.6f} window={active[0]}..{active[-1]}"
            )
            if progress is not None:
                progress(iteration, record)
            if checkpoint_callback is not None and config.checkpoint_every > 0 and done % config.checkpoint_every == 0:
                checkpoint_callback(done, policy)

    if config.iterations > 0:
        policy = policy.with_params(params, config_hash=config.config_hash())
    return TrainResult(policy=policy, records=records, validation=validation)


def _sample_groups(policy, bank, spec, config, window, frame_weights, iteration, executor) -> List[_GroupSample]:
    groups = []
    for c in range(config.conditions_per_iteration):
        draw = sample_target_draw(bank, spec, derive_seed(config.seed, "condition", iteration, c))
        target = draw.trajectory
        condition = encode(target)
        rollouts = sample_group(
            policy,
            condition,
            window,
            config.group_size,
            config.num_steps,
            derive_seed(config.seed, "group", iteration, c),
            iteration=iteration,
            eta=config.sde_eta,
            frame_rate=target.frame_rate,
            executor=executor,
        )

        def score(j: int) -> RewardVector:
            noise = EstimatorNoise(
                config.estimator_sigma_trans,
                config.estimator_sigma_rot,
                derive_seed(config.seed, "estimator", iteration, c, j),
            )
            return rollout_rewards(rollouts[j], target, frame_weights, noise)

        indices = range(len(rollouts))
        rewards = list(executor.map(score, indices)) if executor is not None else [score(j) for j in indices]
        groups.append(_GroupSample(target, condition, rollouts, rewards))
    return groups


def _surrogate_gradient(policy, groups, advantages, step_weights, active, config, with_grad=True):
    """Mean surrogate over groups, mean clip fraction and ∂J/∂θ (None without ``with_grad``)."""
    total = 0.0
    clipped = 0.0
    grad = np.zeros(policy.architecture.parameter_count) if with_grad else None
    for group, adv in zip(groups, advantages):
        logp, handle = rollout_log_densities(policy, group.rollouts, group.condition, config.num_steps)
        behavior = np.stack([r.log_densities for r in group.rollouts])
        batch = StepBatch(logp, behavior, step_weights, adv.fused, steps=active)
        result = surrogate_objective(batch, config.eps_clip)
        total += result.value
        clipped += result.clip_fraction
        if with_grad:
            grad += log_density_gradient(policy, handle, result.logp_grad, config.num_steps)
    n = len(groups)
    return total / n, clipped / n, grad / n if with_grad else None


def _metrics_record(
    iteration: int,
    groups: Sequence[_GroupSample],
    advantages: Sequence[AdvantageSet],
    surrogate: float,
    clip_fraction: float,
    active: Sequence[int],
    wall_seconds: float,
) -> Dict[str, Any]:
    rewards = [r for g in groups for r in g.rewards]
    fused = np.concatenate([a.fused for a in advantages])
    return {
        "iteration": iteration,
        "reward_mean": {channel: float(np.mean([r[channel] for r in rewards])) for channel in CHANNELS},
        "advantage_mean": float(np.mean(fused)),
        "advantage_abs_mean": float(np.mean(np.abs(fused))),
        "surrogate": float(surrogate),
        "clip_fraction": clip_fraction,
        "window": [int(active[0]), int(active[-1])],
        "wall_seconds": float(wall_seconds),
    }
