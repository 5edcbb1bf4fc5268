"""
Deterministic random streams.

Every random draw in the package comes from a ``numpy.random.Generator``
built from ``SeedSequence((seed, *keys))``. String keys are hashed to stable
integers so call sites can name their purpose ("z0", "estimator", ...).
No global RNG state is read or written.
"""

import hashlib
from typing import Union

import numpy as np
from typing_extensions import TypeAlias

SeedKey: TypeAlias = Union[int, str]


def _key_to_int(key: SeedKey) -> int:
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError(f"seed keys must be non-negative, got {key}")
        return int(key)
    digest = hashlib.sha256(str(key).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def seed_sequence(seed: int, *keys: SeedKey) -> np.random.SeedSequence:
    """SeedSequence for ``seed`` specialised by ``keys``."""
    return np.random.SeedSequence([_key_to_int(seed), *(_key_to_int(k) for k in keys)])


def derive_seed(seed: int, *keys: SeedKey) -> int:
    """Derive a child integer seed from ``(seed, *keys)``.

    Examples:
        >>> derive_seed(7, "rollout", 3) == derive_seed(7, "rollout", 3)
        True
    """
    state = seed_sequence(seed, *keys).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def make_rng(seed: int, *keys: SeedKey) -> np.random.Generator:
    """PCG64 generator seeded from ``(seed, *keys)``."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *keys)))
