import enum
from typing import List


class _Choice(str, enum.Enum):
    """str-valued enum whose members parse from their config spelling."""

    @classmethod
    def values(cls) -> List[str]:
        return [member.value for member in cls]

    @classmethod
    def parse(cls, text: str) -> "_Choice":
        """Return the member spelled ``text`` (case-insensitive, ``_`` accepted for ``-``)."""
        if isinstance(text, cls):
            return text
        normalized = str(text).strip().lower().replace("_", "-")
        for member in cls:
            if member.value == normalized:
                return member
        raise ValueError(f"expected one of {', '.join(cls.values())}, got {text!r}")

    def __str__(self) -> str:
        return self.value


class WeightScheme(_Choice):
    """Temporal weighting of per-frame geometry errors."""

    # --------------------------------------------------------------
    # Members
    # --------------------------------------------------------------
    LINEAR = "linear"           # w_i ∝ i
    QUADRATIC = "quadratic"     # w_i ∝ i²
    UNIFORM = "uniform"         # w_i = 1/n, ablation only

    def is_increasing(self) -> bool:
        return self != WeightScheme.UNIFORM


class RewardSet(_Choice):
    """Which reward channels contribute to the fused advantage."""

    FULL = "full"
    AESTHETIC_ONLY = "aesthetic-only"
    GEOMETRY_ONLY = "geometry-only"


class StdMode(_Choice):
    """Denominator used when normalizing a reward channel within a group."""

    PER_GROUP = "per-group"     # max(σ_group, eps_std)
    BATCH_MAX = "batch-max"     # max(max over groups of σ, eps_std)


class TimestepSchedule(_Choice):
    """Per-step loss weight across the active sampling window."""

    UNIFORM = "uniform"
    NOISE_PROPORTIONAL = "noise-proportional"


class RLOptimizer(_Choice):
    """Parameter update rule for the policy-gradient step."""

    SGD = "sgd"
    ADAM = "adam"


class BankKind(_Choice):
    """Content of a generated trajectory bank."""

    RANDOM = "random"
    CANONICAL = "canonical"
    MIXED = "mixed"


class MonitorKind(_Choice):
    """Monitoring backend for a training run."""

    NOOP = "noop"
    PROMETHEUS = "prometheus"
