"""Seed plumbing shared by every sampling routine.

All randomness goes through :func:`make_rng`, which wraps a counter-based
Philox bit generator.  Per-trial streams are derived by hashing
``(master_seed, *keys)`` through :class:`numpy.random.SeedSequence`, so
parallel trials never share a stream and results do not depend on
scheduling order.
"""
from __future__ import annotations

from typing import Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def make_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(seed))


def derive_seed(master: int, *keys: int) -> int:
    """Return a 63-bit seed for the stream identified by ``keys``."""
    ss = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))
