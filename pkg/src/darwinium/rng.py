"""Deterministic random streams for reproducible, parallel-safe experiments.

Every stochastic component draws from a substream addressed by
(master_seed, *path). Substreams are built on the counter-based Philox
generator, so realization r of an experiment sees the same numbers no
matter how many workers run or in which order results arrive.
"""
from __future__ import annotations

import numpy as np


def substream(master_seed: int, *path: int) -> np.random.Generator:
    """Return the generator for the substream addressed by (master_seed, *path)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.Philox(ss))


def child_seed(master_seed: int, *path: int) -> int:
    """Derive a 64-bit integer seed for the substream (master_seed, *path).

    Used when a component wants to carry a plain integer seed (e.g. in a
    serialized config) instead of a generator object.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(path))
    hi, lo = ss.generate_state(2, dtype=np.uint32)[:2]
    return (int(hi) << 32) | int(lo)
