"""
``trajectory-grpo`` command line.

Subcommands:
    eval       geometry errors between a target and an estimated trajectory
    rescale    rescale one trajectory to sampled physical speeds
    gen-bank   write a synthetic trajectory bank
    pretrain   flow-matching pretraining on the drift corpus of a bank
    train      GRPO fine-tuning from a checkpoint
    rollout    sample one group from a checkpoint

Exit codes: 0 on success, 1 for any library error, 2 for a missing input
file (and for usage errors, as argparse does). Errors go to stderr as one
line naming the offending input; nothing is written to stdout first.
"""

import argparse
import csv
import io
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from .. import __version__
from ..config.choices import BankKind, MonitorKind, WeightScheme
from ..config.loader import ENV_LOADER_AVAILABLE, get_config_from_env, load_config_file
from ..config.run_config import RunConfig
from ..core.exceptions import InvalidInputError, TrajectoryIOError, TrajKitError
from ..core.logging import LoggerAdapter
from ..core.seeding import derive_seed
from ..geometry.se3 import Trajectory
from ..io.metrics import MetricsSink
from ..io.trajectory_file import atomic_write_bytes, read_trajectory, read_trajectory_bank, write_trajectory
from ..monitoring import PROMETHEUS_AVAILABLE, BaseMonitor, NoOpMonitor, PrometheusMonitor
from ..policy.checkpoint import load_checkpoint, save_checkpoint
from ..policy.latent import encode
from ..policy.pretrain import flow_pretrain
from ..policy.sampler import WindowSchedule, sample_group
from ..policy.trainer import grpo_train
from ..reward.geometry import geometry_errors, per_frame_errors, temporal_weights
from ..sampling.bank import build_drift_corpus, generate_bank
from ..sampling.rescale import rescale_trajectory, sample_target_draw

_logger = LoggerAdapter.get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISSING_FILE = 2


def _angle_text(radians: float) -> str:
    return f"{radians:.12g} rad ({math.degrees(radians):.12g} deg)"


def _load_run_config(args) -> RunConfig:
    """Defaults, then the ``--config`` file, then ``.env`` and TRAJ_KIT_* variables, then flags."""
    config = load_config_file(args.config) if getattr(args, "config", None) else RunConfig()
    env_file = Path(".env") if ENV_LOADER_AVAILABLE and Path(".env").is_file() else None
    config = get_config_from_env(config, env_file=env_file)
    overrides = {
        "seed": getattr(args, "seed", None),
        "iterations": getattr(args, "iterations", None),
        "validation_every": getattr(args, "validate_every", None),
    }
    return config.merge(overrides)


def _read_bank(directory: str, config: RunConfig) -> List[Trajectory]:
    bank = read_trajectory_bank(directory)
    lengths = sorted({len(t) for t in bank})
    if lengths != [config.n_frames]:
        raise InvalidInputError(
            field_name="bank",
            value=directory,
            expected=f"trajectories of n_frames={config.n_frames}",
            received=f"lengths {lengths}",
        )
    return bank


# ============================================================================
# SUBCOMMANDS
# ============================================================================

def cmd_eval(args) -> int:
    target = read_trajectory(args.target)
    estimated = read_trajectory(args.estimated)
    weights = temporal_weights(len(target), WeightScheme.parse(args.weights))
    errors = geometry_errors(target, estimated, weights)
    trans, rot = per_frame_errors(target, estimated)

    if args.csv:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["frame", "weight", "trans_error_m", "rot_error_rad", "rot_error_deg"])
        for i, (w, dt, dr) in enumerate(zip(weights.w, trans, rot)):
            writer.writerow([i, repr(float(w)), repr(float(dt)), repr(float(dr)), repr(math.degrees(dr))])
        try:
            atomic_write_bytes(args.csv, buffer.getvalue().encode("utf-8"))
        except OSError as e:
            raise TrajectoryIOError("Cannot write CSV file", source=args.csv, original_error=e)

    print(f"frames  = {len(target)}")
    print(f"weights = {WeightScheme.parse(args.weights)}")
    print(f"d_trans = {errors.d_trans:.12g} m")
    print(f"d_rot   = {_angle_text(errors.d_rot)}")
    return EXIT_OK


def cmd_rescale(args) -> int:
    source = read_trajectory(args.input)
    config = load_config_file(args.spec) if args.spec else RunConfig()
    draw = sample_target_draw([source], config.rescale_spec(), args.seed)
    write_trajectory(args.output, draw.trajectory)

    print(f"tau_trans = {draw.tau_trans!r}")
    print(f"tau_rot   = {draw.tau_rot!r}")
    print(f"s_trans   = {draw.s_trans!r}")
    print(f"s_rot     = {draw.s_rot!r}")
    return EXIT_OK


def cmd_gen_bank(args) -> int:
    bank = generate_bank(args.count, args.frames, args.seed, BankKind.parse(args.kind), args.frame_rate)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise TrajectoryIOError("Cannot create bank directory", source=str(out), original_error=e)
    width = max(5, len(str(len(bank) - 1)))
    for k, trajectory in enumerate(bank):
        write_trajectory(out / f"traj_{k:0{width}d}.txt", trajectory)
    print(f"wrote {len(bank)} trajectories to {out}")
    return EXIT_OK


def cmd_pretrain(args) -> int:
    config = _load_run_config(args)
    bank = _read_bank(args.bank, config)
    corpus = build_drift_corpus(
        bank,
        config.rescale_spec(),
        (config.drift_scale_low, config.drift_scale_high),
        derive_seed(config.seed, "drift-corpus"),
    )
    with tqdm(total=config.pretrain_epochs, desc="pretrain", disable=args.quiet, file=sys.stderr) as bar:
        def progress(epoch: int, loss: float) -> None:
            bar.set_postfix(loss=f"{loss:.4g}", refresh=False)
            bar.update(1)

        result = flow_pretrain(corpus, config, progress=progress)
    save_checkpoint(args.output, result.policy)
    print(f"validation loss {result.initial_validation_loss:.6g} -> {result.final_validation_loss:.6g}")
    print(f"checkpoint written to {args.output}")
    return EXIT_OK


def _build_monitor(kind: str) -> BaseMonitor:
    """NoOpMonitor, or a PrometheusMonitor (push gateway from PROMETHEUS_PUSH_GATEWAY)."""
    if MonitorKind.parse(kind) is MonitorKind.NOOP:
        return NoOpMonitor()
    if not PROMETHEUS_AVAILABLE:
        raise InvalidInputError(
            field_name="monitor",
            value=kind,
            expected="prometheus-client installed (pip install trajectory-grpo-kit[monitoring])",
        )
    return PrometheusMonitor()


def cmd_train(args) -> int:
    config = _load_run_config(args)
    policy = load_checkpoint(args.checkpoint)
    bank = _read_bank(args.bank, config)
    monitor = _build_monitor(args.monitor)

    output = Path(args.output)
    checkpoint_dir = Path(args.checkpoint_dir) if args.checkpoint_dir else output.parent
    if config.checkpoint_every > 0:
        try:
            checkpoint_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise TrajectoryIOError("Cannot create checkpoint directory", source=str(checkpoint_dir), original_error=e)

    def on_checkpoint(done: int, current) -> None:
        save_checkpoint(checkpoint_dir / f"{output.stem}.iter{done:05d}{output.suffix}", current)

    sink = MetricsSink(args.metrics) if args.metrics else MetricsSink(sys.stdout)
    try:
        with tqdm(total=config.iterations, desc="train", disable=args.quiet, file=sys.stderr) as bar:
            def progress(iteration: int, record) -> None:
                bar.set_postfix(r_trans=f"{record['reward_mean']['trans']:.4g}", refresh=False)
                bar.update(1)

            result = grpo_train(
                policy,
                bank,
                config.rescale_spec(),
                config,
                sink=sink,
                progress=progress,
                checkpoint_callback=on_checkpoint,
                monitor=monitor,
            )
    finally:
        sink.close()
    save_checkpoint(output, result.policy)
    if result.validation:
        first, last = min(result.validation), max(result.validation)
        _logger.info(
            f"Validation d_trans {result.validation[first].d_trans:.6f} -> {result.validation[last].d_trans:.6f} m"
        )
    return EXIT_OK


def cmd_rollout(args) -> int:
    config = _load_run_config(args)
    policy = load_checkpoint(args.checkpoint)
    condition = read_trajectory(args.condition)
    if len(condition) != policy.architecture.n_frames:
        raise InvalidInputError(
            field_name="condition",
            value=args.condition,
            expected=f"{policy.architecture.n_frames} frames",
            received=f"{len(condition)} frames",
        )
    if args.speed_factor != 1.0:
        condition = rescale_trajectory(condition, args.speed_factor, args.speed_factor)

    rollouts = sample_group(
        policy,
        encode(condition),
        WindowSchedule.from_config(config),
        config.group_size,
        config.num_steps,
        derive_seed(config.seed, "rollout-command"),
        eta=config.sde_eta,
        frame_rate=condition.frame_rate,
    )
    weights = temporal_weights(len(condition), WeightScheme.parse(config.weight_scheme))
    errors = [geometry_errors(condition, r.trajectory, weights) for r in rollouts]

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise TrajectoryIOError("Cannot create output directory", source=str(out), original_error=e)
    for j, rollout in enumerate(rollouts):
        write_trajectory(out / f"rollout_{j:03d}.txt", rollout.trajectory)

    for j, e in enumerate(errors):
        print(f"rollout {j:3d}: d_trans = {e.d_trans:.9g} m, d_rot = {_angle_text(e.d_rot)}")
    print(f"mean        : d_trans = {np.mean([e.d_trans for e in errors]):.9g} m, "
          f"d_rot = {_angle_text(float(np.mean([e.d_rot for e in errors])))}")
    return EXIT_OK


# ============================================================================
# PARSER
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trajectory-grpo",
        description="Geometry rewards, metric-aware rescaling and GRPO training for camera trajectories.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("eval", help="weighted translation/rotation error of an estimate against a target")
    p.add_argument("--target", required=True, help="target trajectory file")
    p.add_argument("--estimated", required=True, help="estimated trajectory file")
    p.add_argument("--weights", choices=WeightScheme.values(), default=WeightScheme.LINEAR.value)
    p.add_argument("--csv", help="write the per-frame error table here")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("rescale", help="rescale a trajectory to sampled physical speeds")
    p.add_argument("--input", required=True, help="source trajectory file")
    p.add_argument("--spec", help="config file holding rescale_* keys")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", required=True, help="rescaled trajectory file")
    p.set_defaults(handler=cmd_rescale)

    p = sub.add_parser("gen-bank", help="write a synthetic trajectory bank")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--frames", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--kind", choices=BankKind.values(), default=BankKind.RANDOM.value)
    p.add_argument("--frame-rate", type=float, default=30.0)
    p.set_defaults(handler=cmd_gen_bank)

    p = sub.add_parser("pretrain", help="flow-matching pretraining on a bank's drift corpus")
    p.add_argument("--bank", required=True, help="trajectory bank directory")
    p.add_argument("--config", help="run config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--output", required=True, help="checkpoint to write")
    p.add_argument("--quiet", action="store_true", help="no progress bar")
    p.set_defaults(handler=cmd_pretrain)

    p = sub.add_parser("train", help="GRPO fine-tuning from a checkpoint")
    p.add_argument("--checkpoint", required=True, help="starting checkpoint")
    p.add_argument("--bank", required=True, help="trajectory bank directory")
    p.add_argument("--config", help="run config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--validate-every", type=int, help="override validation_every")
    p.add_argument("--metrics", help="metrics JSON-lines file (stdout when omitted)")
    p.add_argument("--checkpoint-dir", help="directory for periodic checkpoints")
    p.add_argument("--monitor", choices=MonitorKind.values(), default=MonitorKind.NOOP.value,
                   help="monitoring backend fed once per iteration")
    p.add_argument("--output", required=True, help="final checkpoint to write")
    p.add_argument("--quiet", action="store_true", help="no progress bar")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("rollout", help="sample one group from a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--condition", required=True, help="condition trajectory file")
    p.add_argument("--config", help="run config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--speed-factor", type=float, default=1.0, help="scale the condition's speeds first")
    p.add_argument("--out", required=True, help="output directory for rollout trajectories")
    p.set_defaults(handler=cmd_rollout)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        LoggerAdapter.set_level(logging.DEBUG)
    elif getattr(args, "quiet", False):
        LoggerAdapter.set_level(logging.WARNING)

    try:
        return args.handler(args)
    except FileNotFoundError as e:
        path = e.filename or (e.args[0] if e.args else "")
        _logger.debug(f"Missing input: {path}")
        print(f"error: file not found: {path}", file=sys.stderr)
        return EXIT_MISSING_FILE
    except TrajKitError as e:
        _logger.debug(f"{args.command} failed: {e!r}")
        print(f"error: {e.args[0]}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
