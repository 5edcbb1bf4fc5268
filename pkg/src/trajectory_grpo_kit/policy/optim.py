"""
Flat-vector optimizers and gradient-norm clipping.

``step`` takes a *descent* direction convention: ``params - update``. Callers
maximizing an objective pass the negated gradient.
"""

import math
from typing import Optional, Tuple

import numpy as np

from ..config.choices import RLOptimizer
from ..core.exceptions import InvalidInputError


def clip_grad_norm(grad: np.ndarray, max_norm: float) -> Tuple[np.ndarray, float]:
    """Scale ``grad`` down to ``max_norm`` (0 disables); returns (grad, original norm)."""
    norm = float(np.linalg.norm(grad))
    if max_norm > 0 and norm > max_norm:
        return grad * (max_norm / norm), norm
    return grad, norm


class SGD:
    """Plain gradient descent with a constant learning rate."""

    def __init__(self, learning_rate: float):
        if not (math.isfinite(learning_rate) and learning_rate > 0):
            raise InvalidInputError(field_name="learning_rate", value=learning_rate, expected="learning_rate > 0")
        self.learning_rate = learning_rate

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        return params - self.learning_rate * grad


class Adam:
    """Adam with zero-initialised moments and bias correction.

    An identically zero gradient is not a step: parameters, moments and the
    step count are left as they are, so a zero-advantage update never moves
    θ even after earlier nonzero steps.
    """

    def __init__(self, learning_rate: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        if not (math.isfinite(learning_rate) and learning_rate > 0):
            raise InvalidInputError(field_name="learning_rate", value=learning_rate, expected="learning_rate > 0")
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self._m: Optional[np.ndarray] = None
        self._v: Optional[np.ndarray] = None
        self._t = 0

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        if not np.any(grad):
            return params
        if self._m is None:
            self._m = np.zeros_like(params)
            self._v = np.zeros_like(params)
        self._t += 1
        self._m = self.beta1 * self._m + (1.0 - self.beta1) * grad
        self._v = self.beta2 * self._v + (1.0 - self.beta2) * grad * grad
        m_hat = self._m / (1.0 - self.beta1 ** self._t)
        v_hat = self._v / (1.0 - self.beta2 ** self._t)
        return params - self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)


def make_optimizer(kind: RLOptimizer, learning_rate: float):
    kind = RLOptimizer.parse(kind)
    if kind == RLOptimizer.ADAM:
        return Adam(learning_rate)
    return SGD(learning_rate)
