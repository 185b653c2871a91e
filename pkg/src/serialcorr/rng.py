"""Reproducible random-number substreams.

All stochastic code in this package draws from numpy ``Generator`` objects
backed by PCG64.  Independent substreams are derived from a root seed and an
integer key path via ``numpy.random.SeedSequence(seed, spawn_key=key)``, so a
computation seeded this way is deterministic regardless of execution order,
chunking, or worker count: the stream depends only on (seed, key), never on
which thread or process happens to run it.
"""
from __future__ import annotations

import numpy as np


def substream(seed: int, *key: int) -> np.random.Generator:
    """Return the PCG64 generator for substream ``key`` of ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def derive_seed(seed: int, *key: int) -> int:
    """Derive a child integer seed (e.g. to configure a nested procedure)."""
    ss = np.random.SeedSequence(seed, spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])
