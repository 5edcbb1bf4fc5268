"""
Velocity network v̂_θ(z, t, c) with closed-form backpropagation.

    c_emb = tanh(W_c c + b_c)
    x     = [z, sin(ω_k t), cos(ω_k t), c_emb]      ω_k = π·2^k, k < F
    h1    = tanh(W_1 x + b_1)
    h2    = tanh(W_2 h1 + b_2)
    x̂₁    = c + W_3 h2 + b_3
    v̂     = (x̂₁ − z) / (1 − t)

The network predicts the denoised endpoint x̂₁ as a correction to the
condition latent and reports the straight-path velocity toward it, so the
hidden layers only carry the correction. v̂ is defined for t in [0, 1).

All parameters live in one flat float64 vector; ``layer_slices`` maps layer
names onto it. Rows of a batch are independent.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from ..core.exceptions import InvalidInputError
from ..core.seeding import make_rng
from .latent import latent_dim

LAYER_NAMES: Tuple[str, ...] = ("W_c", "b_c", "W_1", "b_1", "W_2", "b_2", "W_3", "b_3")
CONDITION_LAYERS: Tuple[str, ...] = ("W_c", "b_c")

_OUTPUT_INIT_SCALE = 0.1


@dataclass(frozen=True)
class PolicyArchitecture:
    """Layer dimensions of the velocity network."""

    n_frames: int = 16
    hidden_width: int = 64
    time_frequencies: int = 4
    condition_width: int = 32

    def __post_init__(self):
        for name in ("hidden_width", "time_frequencies", "condition_width"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise InvalidInputError(field_name=name, value=value, expected="positive integer")
        if not isinstance(self.n_frames, (int, np.integer)) or self.n_frames < 2:
            raise InvalidInputError(field_name="n_frames", value=self.n_frames, expected="n_frames >= 2")

    @classmethod
    def from_config(cls, config) -> "PolicyArchitecture":
        return cls(
            n_frames=config.n_frames,
            hidden_width=config.hidden_width,
            time_frequencies=config.time_frequencies,
            condition_width=config.condition_width,
        )

    @property
    def latent_dim(self) -> int:
        return latent_dim(self.n_frames)

    @property
    def input_dim(self) -> int:
        return self.latent_dim + 2 * self.time_frequencies + self.condition_width

    def layer_shapes(self) -> Dict[str, Tuple[int, ...]]:
        d, h, c = self.latent_dim, self.hidden_width, self.condition_width
        return {
            "W_c": (c, d),
            "b_c": (c,),
            "W_1": (h, self.input_dim),
            "b_1": (h,),
            "W_2": (h, h),
            "b_2": (h,),
            "W_3": (d, h),
            "b_3": (d,),
        }

    def layer_slices(self) -> Dict[str, slice]:
        slices = {}
        offset = 0
        for name, shape in self.layer_shapes().items():
            size = int(np.prod(shape))
            slices[name] = slice(offset, offset + size)
            offset += size
        return slices

    @property
    def parameter_count(self) -> int:
        return sum(int(np.prod(shape)) for shape in self.layer_shapes().values())

    def to_dict(self) -> Dict[str, int]:
        return {
            "n_frames": int(self.n_frames),
            "hidden_width": int(self.hidden_width),
            "time_frequencies": int(self.time_frequencies),
            "condition_width": int(self.condition_width),
        }


@dataclass(frozen=True, eq=False)
class FlowPolicy:
    """Architecture, read-only parameter vector and the hash of the config that produced it."""

    architecture: PolicyArchitecture
    params: np.ndarray
    config_hash: str = ""

    def __post_init__(self):
        params = np.array(self.params, dtype=np.float64).reshape(-1)
        if params.size != self.architecture.parameter_count:
            raise InvalidInputError(
                field_name="params",
                value=params.size,
                expected=f"{self.architecture.parameter_count} parameters",
            )
        if not np.all(np.isfinite(params)):
            raise InvalidInputError(field_name="params", expected="finite parameters")
        params.setflags(write=False)
        object.__setattr__(self, "params", params)

    def with_params(self, params: np.ndarray, config_hash: Optional[str] = None) -> "FlowPolicy":
        return FlowPolicy(self.architecture, params, self.config_hash if config_hash is None else config_hash)

    def layers(self) -> Dict[str, np.ndarray]:
        shapes = self.architecture.layer_shapes()
        return {name: self.params[s].reshape(shapes[name]) for name, s in self.architecture.layer_slices().items()}

    def velocity(self, z: np.ndarray, t, c: np.ndarray) -> np.ndarray:
        """v̂ for a batch (or a single row) of latents."""
        single = np.ndim(z) == 1
        out, _ = forward(self, np.atleast_2d(z), np.atleast_1d(np.asarray(t, dtype=float)), np.atleast_2d(c))
        return out[0] if single else out


def init_policy(architecture: PolicyArchitecture, seed: int, config_hash: str = "") -> FlowPolicy:
    """Scaled-Gaussian weights (1/√fan_in), zero biases, small output layer."""
    rng = make_rng(seed, "policy-init")
    params = np.zeros(architecture.parameter_count)
    shapes = architecture.layer_shapes()
    for name, s in architecture.layer_slices().items():
        shape = shapes[name]
        if len(shape) == 2:
            scale = 1.0 / math.sqrt(shape[1])
            if name == "W_3":
                scale *= _OUTPUT_INIT_SCALE
            params[s] = rng.normal(0.0, scale, size=shape).reshape(-1)
    return FlowPolicy(architecture, params, config_hash)


def time_embedding(t: np.ndarray, frequencies: int) -> np.ndarray:
    """(B,) times → (B, 2F) sinusoidal features."""
    omegas = math.pi * (2.0 ** np.arange(frequencies))
    angles = np.asarray(t, dtype=float)[:, None] * omegas[None, :]
    return np.concatenate([np.sin(angles), np.cos(angles)], axis=1)


class ForwardCache(NamedTuple):
    c: np.ndarray
    c_emb: np.ndarray
    x: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    inv_remaining: np.ndarray
    #   (B,) 1 / (1 − t)


def forward(policy: FlowPolicy, z: np.ndarray, t: np.ndarray, c: np.ndarray) -> Tuple[np.ndarray, ForwardCache]:
    """Batched forward pass: z (B, D), t (B,), c (B, D) → v̂ (B, D) and the activations.

    Raises:
        InvalidInputError: bad shapes, or a time outside [0, 1)
    """
    arch = policy.architecture
    z = np.asarray(z, dtype=float)
    c = np.asarray(c, dtype=float)
    t = np.asarray(t, dtype=float).reshape(-1)
    if z.ndim != 2 or z.shape[1] != arch.latent_dim:
        raise InvalidInputError(field_name="z", expected=f"(B, {arch.latent_dim}) latents", received=f"shape {z.shape}")
    if c.shape[-1] != arch.latent_dim:
        raise InvalidInputError(field_name="c", expected=f"{arch.latent_dim}-dim condition", received=f"shape {c.shape}")
    batch = z.shape[0]
    if c.shape[0] == 1 and batch > 1:
        c = np.broadcast_to(c, (batch, c.shape[1]))
    if t.size == 1 and batch > 1:
        t = np.full(batch, float(t[0]))
    if not np.all((t >= 0.0) & (t < 1.0)):
        raise InvalidInputError(field_name="t", expected="times in [0, 1)", received=f"range [{t.min()}, {t.max()}]")

    p = policy.layers()
    c_emb = np.tanh(c @ p["W_c"].T + p["b_c"])
    x = np.concatenate([z, time_embedding(t, arch.time_frequencies), c_emb], axis=1)
    h1 = np.tanh(x @ p["W_1"].T + p["b_1"])
    h2 = np.tanh(h1 @ p["W_2"].T + p["b_2"])
    endpoint = c + h2 @ p["W_3"].T + p["b_3"]
    inv_remaining = 1.0 / (1.0 - t)
    out = (endpoint - z) * inv_remaining[:, None]
    return out, ForwardCache(c, c_emb, x, h1, h2, inv_remaining)


def backward(policy: FlowPolicy, cache: ForwardCache, grad_out: np.ndarray) -> np.ndarray:
    """Flat gradient Σ_rows (∂v̂/∂θ)ᵀ grad_out for a forward ``cache``."""
    arch = policy.architecture
    p = policy.layers()
    grad_out = np.asarray(grad_out, dtype=float) * cache.inv_remaining[:, None]
    grads: Dict[str, np.ndarray] = {}

    grads["W_3"] = grad_out.T @ cache.h2
    grads["b_3"] = grad_out.sum(axis=0)
    g_a2 = (grad_out @ p["W_3"]) * (1.0 - cache.h2 ** 2)
    grads["W_2"] = g_a2.T @ cache.h1
    grads["b_2"] = g_a2.sum(axis=0)
    g_a1 = (g_a2 @ p["W_2"]) * (1.0 - cache.h1 ** 2)
    grads["W_1"] = g_a1.T @ cache.x
    grads["b_1"] = g_a1.sum(axis=0)
    g_x = g_a1 @ p["W_1"]
    g_ac = g_x[:, arch.latent_dim + 2 * arch.time_frequencies:] * (1.0 - cache.c_emb ** 2)
    grads["W_c"] = g_ac.T @ cache.c
    grads["b_c"] = g_ac.sum(axis=0)

    flat = np.empty(arch.parameter_count)
    for name, s in arch.layer_slices().items():
        flat[s] = grads[name].reshape(-1)
    return flat


def layer_mask(architecture: PolicyArchitecture, frozen: List[str]) -> np.ndarray:
    """1.0 for trainable entries, 0.0 for entries of the ``frozen`` layers."""
    mask = np.ones(architecture.parameter_count)
    slices = architecture.layer_slices()
    for name in frozen:
        mask[slices[name]] = 0.0
    return mask
