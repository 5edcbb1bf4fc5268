from typing import Dict, FrozenSet, Tuple

from .choices import RewardSet


# ==============================================================
# REWARD CHANNELS
# --------------------------------------------------------------
# Fixed channel order. Fused advantages, metrics records and
# reduction loops all iterate in this order.
# ==============================================================

GEOMETRY_CHANNELS: Tuple[str, ...] = ("rot", "trans")
AESTHETIC_CHANNELS: Tuple[str, ...] = ("vis", "mot", "hps")
CHANNELS: Tuple[str, ...] = GEOMETRY_CHANNELS + AESTHETIC_CHANNELS


# ==============================================================
# REWARD_SET_MASKS
# --------------------------------------------------------------
# Channels kept by each reward-set ablation. Masked channels are
# still computed and logged; their λ is forced to zero.
#
# Usage:
#   active = REWARD_SET_MASKS[RewardSet.GEOMETRY_ONLY]
# ==============================================================

REWARD_SET_MASKS: Dict[RewardSet, FrozenSet[str]] = {
    RewardSet.FULL: frozenset(CHANNELS),
    RewardSet.GEOMETRY_ONLY: frozenset(GEOMETRY_CHANNELS),
    RewardSet.AESTHETIC_ONLY: frozenset(AESTHETIC_CHANNELS),
}


def effective_channel_weights(config) -> Dict[str, float]:
    """λ per channel for ``config`` after applying its reward-set mask."""
    active = REWARD_SET_MASKS[config.reward_set]
    lambdas = config.channel_lambdas()
    return {channel: (lambdas[channel] if channel in active else 0.0) for channel in CHANNELS}
