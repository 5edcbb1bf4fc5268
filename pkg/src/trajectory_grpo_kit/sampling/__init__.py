"""
Target sampling for trajectory-grpo-kit
"""

from .truncnorm import (
    sample_truncated_gaussian,
    truncated_gaussian_cdf,
    truncated_gaussian_ppf,
)
from .rescale import (
    RescaleDraw,
    RescaleSpec,
    SpeedProfile,
    max_speeds,
    rescale_factors,
    rescale_trajectory,
    sample_target_draw,
    sample_target_trajectory,
)
from .bank import (
    CANONICAL_KINDS,
    DriftSample,
    build_drift_corpus,
    canonical_trajectory,
    generate_bank,
    random_smooth_trajectory,
)

__all__ = [
    'sample_truncated_gaussian',
    'truncated_gaussian_cdf',
    'truncated_gaussian_ppf',
    'RescaleDraw',
    'RescaleSpec',
    'SpeedProfile',
    'max_speeds',
    'rescale_factors',
    'rescale_trajectory',
    'sample_target_draw',
    'sample_target_trajectory',
    'CANONICAL_KINDS',
    'DriftSample',
    'build_drift_corpus',
    'canonical_trajectory',
    'generate_bank',
    'random_smooth_trajectory',
]
