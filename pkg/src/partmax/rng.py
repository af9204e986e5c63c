"""Seeded, counter-based random streams.

All randomness goes through numpy's Philox generator keyed by a
``SeedSequence`` built from integer keys, e.g. ``(master_seed, run, step)``.
The same keys give the same stream on every platform numpy supports.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def make_rng(seed, *keys: int) -> np.random.Generator:
    """Generator for the stream identified by ``seed`` and optional sub-keys.

    An existing ``Generator`` is returned untouched when no keys are given.
    """
    if isinstance(seed, np.random.Generator):
        if keys:
            seed = int(seed.integers(0, 2**63))
        else:
            return seed
    if seed is None:
        seed = 0
    ss = np.random.SeedSequence([int(seed) & _MASK64, *(int(k) & _MASK64 for k in keys)])
    return np.random.Generator(np.random.Philox(ss))


def child_seed(master: int, *keys: int) -> int:
    """Stable 64-bit seed derived from ``master`` and integer keys."""
    ss = np.random.SeedSequence([int(master) & _MASK64, *(int(k) & _MASK64 for k in keys)])
    return int(ss.generate_state(1, np.uint64)[0])
