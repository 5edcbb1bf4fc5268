import enum
import hashlib
import math
from dataclasses import dataclass, fields, replace
from typing import Any, Callable, Dict, Mapping, Tuple

from ..core.exceptions import ConfigError
from .choices import RewardSet, RLOptimizer, StdMode, TimestepSchedule, WeightScheme

_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}


def _parse_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ValueError("expected true/false/yes/no/1/0")


def _parse_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("expected an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError("expected an integer")
        return int(value)
    return int(str(value).strip())


def _parse_float(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError("expected a real number")
    result = float(str(value).strip()) if isinstance(value, str) else float(value)
    if not math.isfinite(result):
        raise ValueError("expected a finite real number")
    return result


@dataclass(frozen=True)
class RunConfig:
    """Every tunable of a run, validated on construction.

    Defaults are the full-scale protocol (G = 12 rollouts, T = 25 steps,
    140 RL iterations). Values may be given as strings; they are coerced to
    the field type and range-checked, and any violation raises ConfigError
    naming the key.

    Examples:
        >>> RunConfig().group_size
        12
        >>> RunConfig(group_size="4").group_size
        4
        >>> RunConfig(group_size=0)
        Traceback (most recent call last):
        ...
        ConfigError: Config key 'group_size': must be >= 2
    """

    # --------------------------------------------------------------
    # RUN
    # --------------------------------------------------------------
    seed: int = 0
    n_frames: int = 16
    frame_rate: float = 30.0
    num_steps: int = 25
    #   Euler steps per sample, Δt = 1/num_steps.
    group_size: int = 12
    conditions_per_iteration: int = 1
    iterations: int = 140

    # --------------------------------------------------------------
    # POLICY-GRADIENT STEP
    # --------------------------------------------------------------
    rl_learning_rate: float = 2e-3
    rl_optimizer: RLOptimizer = RLOptimizer.SGD
    inner_updates: int = 1
    #   Updates per sampled group; ratio clipping only bites when > 1.
    eps_clip: float = 0.2
    eps_std: float = 1e-4
    std_mode: StdMode = StdMode.PER_GROUP
    timestep_schedule: TimestepSchedule = TimestepSchedule.UNIFORM

    # --------------------------------------------------------------
    # STOCHASTIC WINDOW
    # --------------------------------------------------------------
    window_size: int = 5
    window_shift_period: int = 5
    window_wrap: bool = True
    sde_eta: float = 0.7

    # --------------------------------------------------------------
    # REWARD
    # --------------------------------------------------------------
    weight_scheme: WeightScheme = WeightScheme.LINEAR
    reward_set: RewardSet = RewardSet.FULL
    lambda_rot: float = 1.0
    lambda_trans: float = 1.0
    lambda_vis: float = 0.25
    lambda_mot: float = 0.25
    lambda_hps: float = 0.25
    estimator_sigma_trans: float = 0.005
    estimator_sigma_rot: float = 0.002

    # --------------------------------------------------------------
    # TARGET RESCALING (metres / radians per frame)
    # --------------------------------------------------------------
    rescale_mu_t: float = 0.05
    rescale_sigma_t: float = 0.03
    rescale_a_t: float = 0.01
    rescale_b_t: float = 0.15
    rescale_mu_r: float = 0.017
    rescale_sigma_r: float = 0.009
    rescale_a_r: float = 0.002
    rescale_b_r: float = 0.05
    rescale_eps: float = 1e-8

    # --------------------------------------------------------------
    # NETWORK AND PRETRAINING
    # --------------------------------------------------------------
    hidden_width: int = 64
    time_frequencies: int = 4
    condition_width: int = 32
    freeze_condition_embedding: bool = False
    pretrain_epochs: int = 2000
    pretrain_batch_size: int = 32
    pretrain_learning_rate: float = 2e-3
    drift_scale_low: float = 0.5
    drift_scale_high: float = 1.5
    max_grad_norm: float = 1.0
    pretrain_max_grad_norm: float = 10.0
    #   Gradient-norm clips for the policy-gradient and pretraining steps; 0 disables.

    # --------------------------------------------------------------
    # VALIDATION, CHECKPOINTS, EXECUTION
    # --------------------------------------------------------------
    validation_conditions: int = 32
    validation_every: int = 0
    checkpoint_every: int = 0
    num_workers: int = 1
    metrics_timing: bool = True
    #   False writes wall_seconds = 0.0 so metrics streams compare byte-for-byte.

    # --------------------------------------------------------------
    # METHODS
    # --------------------------------------------------------------
    def __post_init__(self):
        for spec in fields(self):
            parser, check, reason = _RULES[spec.name]
            raw = getattr(self, spec.name)
            try:
                value = parser(raw)
            except (TypeError, ValueError) as e:
                raise ConfigError(key=spec.name, value=raw, reason=f"cannot parse value ({e})") from e
            if not check(value):
                raise ConfigError(key=spec.name, value=raw, reason=reason)
            object.__setattr__(self, spec.name, value)
        self._check_cross_field()

    def _check_cross_field(self) -> None:
        if self.window_size > self.num_steps:
            raise ConfigError(key="window_size", value=self.window_size, reason=f"must be <= num_steps ({self.num_steps})")
        if self.drift_scale_low > self.drift_scale_high:
            raise ConfigError(key="drift_scale_low", value=self.drift_scale_low, reason="must be <= drift_scale_high")
        for suffix in ("t", "r"):
            a = getattr(self, f"rescale_a_{suffix}")
            b = getattr(self, f"rescale_b_{suffix}")
            if a >= b:
                raise ConfigError(key=f"rescale_a_{suffix}", value=a, reason=f"must be < rescale_b_{suffix} ({b})")
        if not any(self.channel_lambdas().values()):
            raise ConfigError(key="lambda_rot", reason="at least one reward weight must be nonzero")

    def channel_lambdas(self) -> Dict[str, float]:
        """Raw λ per reward channel, before the reward-set mask."""
        return {
            "rot": self.lambda_rot,
            "trans": self.lambda_trans,
            "vis": self.lambda_vis,
            "mot": self.lambda_mot,
            "hps": self.lambda_hps,
        }

    def rescale_spec(self):
        """RescaleSpec built from the ``rescale_*`` keys."""
        from ..sampling.rescale import RescaleSpec

        return RescaleSpec(
            mu_t=self.rescale_mu_t,
            sigma_t=self.rescale_sigma_t,
            a_t=self.rescale_a_t,
            b_t=self.rescale_b_t,
            mu_r=self.rescale_mu_r,
            sigma_r=self.rescale_sigma_r,
            a_r=self.rescale_a_r,
            b_r=self.rescale_b_r,
            eps=self.rescale_eps,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Plain key → value mapping; enums become their config spelling."""
        return {spec.name: _plain(getattr(self, spec.name)) for spec in fields(self)}

    def to_text(self) -> str:
        """Render in the ``key = value`` format accepted by ``load_config``."""
        return "".join(f"{key} = {_format(value)}\n" for key, value in self.to_dict().items())

    def merge(self, overrides: Mapping[str, Any]) -> "RunConfig":
        """New config with ``overrides`` applied (``None`` values are skipped).

        Raises:
            ConfigError: unknown key or invalid value
        """
        known = {spec.name for spec in fields(self)}
        changes = {}
        for key, value in overrides.items():
            if key not in known:
                raise ConfigError(key=key, reason="unknown key")
            if value is not None:
                changes[key] = value
        return replace(self, **changes)

    def config_hash(self) -> str:
        """SHA-256 hex digest of the sorted ``key=value`` rendering."""
        text = "".join(f"{key}={_format(value)}\n" for key, value in sorted(self.to_dict().items()))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    # --------------------------------------------------------------
    # PRESETS
    # --------------------------------------------------------------
    @classmethod
    def for_full_scale(cls) -> "RunConfig":
        """Full-scale protocol: 140 iterations, G = 12, T = 25, W = 5."""
        return cls()

    @classmethod
    def for_drift_repair(cls) -> "RunConfig":
        """End-to-end scale-drift repair run: 200 iterations of 8 conditions, timing off."""
        return cls(iterations=200, conditions_per_iteration=8, validation_every=50, metrics_timing=False)

    @classmethod
    def for_smoke_test(cls) -> "RunConfig":
        """Tiny sizes for fast tests."""
        return cls(
            n_frames=6,
            num_steps=6,
            group_size=4,
            iterations=3,
            window_size=2,
            window_shift_period=1,
            hidden_width=16,
            time_frequencies=2,
            condition_width=8,
            pretrain_epochs=20,
            pretrain_batch_size=8,
            validation_conditions=4,
            metrics_timing=False,
        )


# --------------------------------------------------------------
# FIELD RULES: (parser, range check, failure reason)
# --------------------------------------------------------------
def _int_at_least(low: int) -> Tuple[Callable, Callable[[Any], bool], str]:
    return _parse_int, lambda v: v >= low, f"must be >= {low}"


_POSITIVE = (_parse_float, lambda v: v > 0, "must be > 0")
_NON_NEGATIVE = (_parse_float, lambda v: v >= 0, "must be >= 0")
_FINITE = (_parse_float, lambda v: True, "must be finite")
_BOOL = (_parse_bool, lambda v: True, "must be a boolean")


def _choice(enum_cls) -> Tuple[Callable, Callable[[Any], bool], str]:
    return enum_cls.parse, lambda v: True, f"must be one of {', '.join(enum_cls.values())}"


_RULES: Dict[str, Tuple[Callable, Callable[[Any], bool], str]] = {
    "seed": _int_at_least(0),
    "n_frames": _int_at_least(2),
    "frame_rate": _POSITIVE,
    "num_steps": _int_at_least(1),
    "group_size": _int_at_least(2),
    "conditions_per_iteration": _int_at_least(1),
    "iterations": _int_at_least(0),
    "rl_learning_rate": _POSITIVE,
    "rl_optimizer": _choice(RLOptimizer),
    "inner_updates": _int_at_least(1),
    "eps_clip": (_parse_float, lambda v: 0 < v < 1, "must be in (0, 1)"),
    "eps_std": _POSITIVE,
    "std_mode": _choice(StdMode),
    "timestep_schedule": _choice(TimestepSchedule),
    "window_size": _int_at_least(1),
    "window_shift_period": _int_at_least(1),
    "window_wrap": _BOOL,
    "sde_eta": _NON_NEGATIVE,
    "weight_scheme": _choice(WeightScheme),
    "reward_set": _choice(RewardSet),
    "lambda_rot": _FINITE,
    "lambda_trans": _FINITE,
    "lambda_vis": _FINITE,
    "lambda_mot": _FINITE,
    "lambda_hps": _FINITE,
    "estimator_sigma_trans": _NON_NEGATIVE,
    "estimator_sigma_rot": _NON_NEGATIVE,
    "rescale_mu_t": _FINITE,
    "rescale_sigma_t": _POSITIVE,
    "rescale_a_t": _POSITIVE,
    "rescale_b_t": _POSITIVE,
    "rescale_mu_r": _FINITE,
    "rescale_sigma_r": _POSITIVE,
    "rescale_a_r": _POSITIVE,
    "rescale_b_r": _POSITIVE,
    "rescale_eps": _POSITIVE,
    "hidden_width": _int_at_least(1),
    "time_frequencies": _int_at_least(1),
    "condition_width": _int_at_least(1),
    "freeze_condition_embedding": _BOOL,
    "pretrain_epochs": _int_at_least(1),
    "pretrain_batch_size": _int_at_least(1),
    "pretrain_learning_rate": _POSITIVE,
    "pretrain_max_grad_norm": _NON_NEGATIVE,
    "drift_scale_low": _POSITIVE,
    "drift_scale_high": _POSITIVE,
    "max_grad_norm": _NON_NEGATIVE,
    "validation_conditions": _int_at_least(1),
    "validation_every": _int_at_least(0),
    "checkpoint_every": _int_at_least(0),
    "num_workers": _int_at_least(1),
    "metrics_timing": _BOOL,
}


def _plain(value: Any) -> Any:
    return value.value if isinstance(value, enum.Enum) else value


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_keys() -> Tuple[str, ...]:
    """All accepted configuration keys, in declaration order."""
    return tuple(spec.name for spec in fields(RunConfig))
