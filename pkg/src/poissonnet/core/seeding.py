"""Deterministic seed derivation.

Every random stream in the package is derived from a root 64-bit seed and
a tuple of integer keys through ``numpy.random.SeedSequence``. The same
(seed, keys) pair always yields the same generator, independent of call
order, worker count, or how trials are batched.
"""

from __future__ import annotations

import numpy as np

SEED_MASK = (1 << 64) - 1


def seed_sequence(seed: int | np.random.SeedSequence, *keys: int) -> np.random.SeedSequence:
    """Derive a child seed sequence from a root seed and counter keys.

    Args:
        seed: Root seed (reduced modulo 2**64) or an existing sequence
        keys: Counter keys, e.g. (trial,) or (stream_id, t)

    Returns:
        A SeedSequence whose spawn key extends the root's by ``keys``
    """
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(
            entropy=seed.entropy,
            spawn_key=(*seed.spawn_key, *keys),
        )
    return np.random.SeedSequence(entropy=int(seed) & SEED_MASK, spawn_key=keys)


def make_rng(seed: int | np.random.SeedSequence, *keys: int) -> np.random.Generator:
    """Create a PCG64 generator for (seed, keys)."""
    return np.random.default_rng(seed_sequence(seed, *keys))


def derive_seed(seed: int | np.random.SeedSequence, *keys: int) -> int:
    """Collapse (seed, keys) into a fresh 64-bit integer seed."""
    state = seed_sequence(seed, *keys).generate_state(1, dtype=np.uint64)
    return int(state[0])
