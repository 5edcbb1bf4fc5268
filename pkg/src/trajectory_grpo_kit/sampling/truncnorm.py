"""
Truncated Gaussian 𝒩(mu, sigma²) restricted to [a, b], sampled by inverse CDF.

With α = (a − mu)/sigma and β = (b − mu)/sigma::

    x = mu + sigma · Φ⁻¹(Φ(α) + u · (Φ(β) − Φ(α))),   u ~ U[0, 1)

When the whole interval lies in the upper tail (α > 0) the computation is
mirrored into the lower tail, where Φ keeps its relative precision. One
uniform per draw, so the draw count per seed is fixed.
"""

import math
from typing import Optional, Tuple, Union

import numpy as np
from scipy.special import ndtr, ndtri
from typing_extensions import TypeAlias

from ..core.exceptions import DegenerateSupportError, InvalidInputError
from ..core.seeding import make_rng

MIN_MASS = 1e-300

ArrayLike: TypeAlias = Union[float, np.ndarray]


def _standardize(mu: float, sigma: float, a: float, b: float) -> Tuple[float, float]:
    for name, value in (("mu", mu), ("sigma", sigma), ("a", a), ("b", b)):
        if not math.isfinite(value):
            raise InvalidInputError(field_name=name, value=value, expected="finite value")
    if sigma <= 0:
        raise InvalidInputError(field_name="sigma", value=sigma, expected="sigma > 0")
    if a >= b:
        raise InvalidInputError(field_name="a", value=a, expected=f"a < b ({b})")
    return (a - mu) / sigma, (b - mu) / sigma


def truncated_gaussian_ppf(u: ArrayLike, mu: float, sigma: float, a: float, b: float) -> ArrayLike:
    """Quantile function of the truncated Gaussian; ``u`` in [0, 1].

    Raises:
        InvalidInputError: sigma <= 0, a >= b or non-finite parameters
        DegenerateSupportError: Φ(β) − Φ(α) < 1e-300
    """
    alpha, beta = _standardize(mu, sigma, a, b)
    u = np.asarray(u, dtype=float)
    reflect = alpha > 0
    if reflect:
        alpha, beta = -beta, -alpha
        u = 1.0 - u

    low = ndtr(alpha)
    mass = ndtr(beta) - low
    if not mass >= MIN_MASS:
        raise DegenerateSupportError(mu=mu, sigma=sigma, a=a, b=b, mass=float(mass))

    z = ndtri(low + u * mass)
    if reflect:
        z = -z
    x = np.clip(mu + sigma * z, a, b)
    return float(x) if x.ndim == 0 else x


def truncated_gaussian_cdf(x: ArrayLike, mu: float, sigma: float, a: float, b: float) -> ArrayLike:
    """Analytic CDF of the truncated Gaussian (0 below ``a``, 1 above ``b``)."""
    alpha, beta = _standardize(mu, sigma, a, b)
    x = np.asarray(x, dtype=float)
    if alpha > 0:
        # upper-tail interval: use survival functions of the mirrored variable
        upper = ndtr(-alpha)
        mass = upper - ndtr(-beta)
        if not mass >= MIN_MASS:
            raise DegenerateSupportError(mu=mu, sigma=sigma, a=a, b=b, mass=float(mass))
        cdf = (upper - ndtr(-(x - mu) / sigma)) / mass
    else:
        low = ndtr(alpha)
        mass = ndtr(beta) - low
        if not mass >= MIN_MASS:
            raise DegenerateSupportError(mu=mu, sigma=sigma, a=a, b=b, mass=float(mass))
        cdf = (ndtr((x - mu) / sigma) - low) / mass
    cdf = np.clip(cdf, 0.0, 1.0)
    cdf = np.where(x < a, 0.0, np.where(x > b, 1.0, cdf))
    return float(cdf) if cdf.ndim == 0 else cdf


def sample_truncated_gaussian(
    mu: float,
    sigma: float,
    a: float,
    b: float,
    seed: int,
    size: Optional[int] = None,
) -> ArrayLike:
    """Draw from the truncated Gaussian; deterministic given ``seed``.

    Returns a float when ``size`` is None, otherwise an array of ``size`` draws.

    Examples:
        >>> x = sample_truncated_gaussian(0.05, 0.03, 0.01, 0.15, seed=7)
        >>> 0.01 <= x <= 0.15
        True
    """
    rng = make_rng(seed, "truncated-gaussian")
    u = rng.random() if size is None else rng.random(size)
    return truncated_gaussian_ppf(u, mu, sigma, a, b)
