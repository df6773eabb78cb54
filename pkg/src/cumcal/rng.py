"""
Seed handling.

Every random stream in the package comes from ``numpy.random.PCG64``. Child
streams are derived from a root seed by counter: stream ``i`` of root ``seed``
is ``SeedSequence(seed, spawn_key=(i,))``, so any stream can be rebuilt on
its own without replaying the others.
"""

from __future__ import annotations

import numpy as np

UINT64_MAX = 2**64 - 1


def check_seed(seed) -> int:
    seed = int(seed)
    if seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed}")
    return seed


def child_sequence(seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(check_seed(seed), spawn_key=(int(index),))


def child_generator(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(child_sequence(seed, index)))


def child_seed(seed: int, index: int) -> int:
    """A 64-bit integer seed for stream ``index`` of ``seed``."""
    state = child_sequence(seed, index).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def bernoulli(probs, seed: int) -> np.ndarray:
    """
    Independent Bernoulli draws, one per entry of ``probs``.

    Draw k compares a raw 64-bit PCG64 output u_k against ``probs[k]`` as
    u_k / 2**64 < probs[k], evaluated exactly in integer arithmetic, so the
    result is identical on every platform.
    """
    probs = np.asarray(probs, dtype=float)
    if np.any(~((probs >= 0) & (probs <= 1))):
        raise ValueError("probabilities must lie in [0, 1]")
    raw = np.random.PCG64(check_seed(seed)).random_raw(probs.size)
    raw = np.asarray(raw, dtype=np.uint64).reshape(probs.shape)
    # p * 2**64 is exact; u < t iff u < ceil(t) for integer u.
    below_one = probs < 1
    thresholds = np.ceil(np.where(below_one, probs, 0.0) * 2.0**64)
    out = np.where(below_one, raw < thresholds.astype(np.uint64), True)
    return out.astype(np.int64)
