"""
Group-relative advantages.

Each reward channel is normalized within its rollout group,
Â = (r − μ)/max(σ, eps_std) with σ the population standard deviation, and
the channels are fused with weights λ: A_total = Σ_k λ_k Â_k. The group mean
is the baseline, so no critic is needed.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np
from typing_extensions import TypeAlias

from ..config.choices import StdMode
from ..config.presets import CHANNELS, effective_channel_weights
from ..core.exceptions import InvalidInputError

RewardVector: TypeAlias = Mapping[str, float]
#   channel name → score for one rollout


@dataclass(frozen=True)
class ChannelWeights:
    """λ per reward channel; finite, at least one nonzero."""

    weights: Mapping[str, float]

    def __post_init__(self):
        weights = {str(k): float(v) for k, v in dict(self.weights).items()}
        if not weights:
            raise InvalidInputError(field_name="weights", expected="at least one channel")
        for channel, value in weights.items():
            if not math.isfinite(value):
                raise InvalidInputError(field_name=f"weights[{channel}]", value=value, expected="finite weight")
        if not any(weights.values()):
            raise InvalidInputError(field_name="weights", expected="at least one nonzero weight")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_config(cls, config) -> "ChannelWeights":
        """λ from ``config`` with its reward-set mask applied."""
        return cls(effective_channel_weights(config))

    @property
    def channels(self) -> List[str]:
        return list(self.weights)

    def __getitem__(self, channel: str) -> float:
        return self.weights[channel]


@dataclass(frozen=True, eq=False)
class AdvantageSet:
    """Fused advantage per rollout plus the per-channel normalized values."""

    fused: np.ndarray
    per_channel: Dict[str, np.ndarray]

    @property
    def group_size(self) -> int:
        return int(self.fused.size)


def _as_group(rewards: Sequence[float], field_name: str = "rewards") -> np.ndarray:
    values = np.asarray(rewards, dtype=float).reshape(-1)
    if values.size < 2:
        raise InvalidInputError(field_name=field_name, value=values.size, expected="group size >= 2")
    if not np.all(np.isfinite(values)):
        raise InvalidInputError(field_name=field_name, expected="finite rewards")
    return values


def group_std(rewards: Sequence[float]) -> float:
    """Population standard deviation (divide by G)."""
    return float(np.std(_as_group(rewards)))


def normalize_channel(rewards: Sequence[float], eps_std: float = 1e-4, std: Optional[float] = None) -> np.ndarray:
    """(r − mean) / max(σ, eps_std) over one group.

    Args:
        rewards: G ≥ 2 finite rewards
        eps_std: Denominator floor (> 0)
        std: Overrides the group's own σ (batch-max mode)

    Examples:
        >>> normalize_channel([0.0, 1.0, 2.0]).round(6).tolist()
        [-1.224745, 0.0, 1.224745]
    """
    values = _as_group(rewards)
    if not (math.isfinite(eps_std) and eps_std > 0):
        raise InvalidInputError(field_name="eps_std", value=eps_std, expected="eps_std > 0")
    if np.all(values == values[0]):
        # the floating-point mean of equal values can miss them by an ulp
        return np.zeros_like(values)
    sigma = float(np.std(values)) if std is None else float(std)
    return (values - values.mean()) / max(sigma, eps_std)


def normalize_groups(
    groups: Sequence[Sequence[float]],
    eps_std: float = 1e-4,
    mode: StdMode = StdMode.PER_GROUP,
) -> List[np.ndarray]:
    """Normalize one channel across several groups.

    ``per-group`` uses each group's own σ; ``batch-max`` divides every group
    by the largest σ found in the batch.
    """
    mode = StdMode.parse(mode)
    arrays = [_as_group(g) for g in groups]
    if mode == StdMode.BATCH_MAX:
        shared = max(float(np.std(g)) for g in arrays)
        return [normalize_channel(g, eps_std, std=shared) for g in arrays]
    return [normalize_channel(g, eps_std) for g in arrays]


def fuse_advantages(per_channel: Mapping[str, Sequence[float]], weights: ChannelWeights) -> np.ndarray:
    """Σ_k λ_k Â_k elementwise, summed in ``weights`` channel order.

    Raises:
        InvalidInputError: channel sets differ or group sizes disagree
    """
    if set(per_channel) != set(weights.weights):
        raise InvalidInputError(
            field_name="per_channel",
            value=sorted(per_channel),
            expected=f"channels {sorted(weights.weights)}",
        )
    arrays = {k: np.asarray(v, dtype=float).reshape(-1) for k, v in per_channel.items()}
    sizes = {a.size for a in arrays.values()}
    if len(sizes) != 1:
        raise InvalidInputError(field_name="per_channel", value=sorted(sizes), expected="equal group sizes")
    fused = np.zeros(sizes.pop())
    for channel in weights.channels:
        fused = fused + weights[channel] * arrays[channel]
    return fused


def _channel_table(group: Sequence[RewardVector], channels: Sequence[str]) -> Dict[str, np.ndarray]:
    table = {}
    for channel in channels:
        try:
            table[channel] = np.array([rewards[channel] for rewards in group], dtype=float)
        except KeyError:
            raise InvalidInputError(field_name="rewards", value=channel, expected="every rollout to score every channel")
    return table


def compute_advantages(
    groups: Sequence[Sequence[RewardVector]],
    weights: ChannelWeights,
    eps_std: float = 1e-4,
    mode: StdMode = StdMode.PER_GROUP,
) -> List[AdvantageSet]:
    """Per-group AdvantageSets for a batch of rollout groups."""
    channels = [c for c in CHANNELS if c in weights.weights] + [c for c in weights.channels if c not in CHANNELS]
    tables = [_channel_table(group, channels) for group in groups]
    normalized: Dict[str, List[np.ndarray]] = {
        channel: normalize_groups([t[channel] for t in tables], eps_std, mode) for channel in channels
    }
    results = []
    for index in range(len(groups)):
        per_channel = {channel: normalized[channel][index] for channel in channels}
        results.append(AdvantageSet(fused=fuse_advantages(per_channel, weights), per_channel=per_channel))
    return results
