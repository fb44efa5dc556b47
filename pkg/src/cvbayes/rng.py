"""Deterministic random-stream handling.

Every stochastic routine takes a ``seed`` (or an already-built Generator).
Independent streams are derived from a master seed with
``np.random.SeedSequence(master_seed, spawn_key=key)``; the spawn key is a
tuple of small integers identifying the consumer, e.g. ``(replication,
population)``.  The same (seed, key) pair always yields the same stream, and
distinct keys yield statistically independent streams, so replications and
populations can run in any order or in parallel without changing results.
"""

from __future__ import annotations

import numpy as np


def rng_stream(seed, *key: int) -> np.random.Generator:
    """Generator for stream ``key`` derived from ``seed``.

    ``seed`` may be an int, None (fresh entropy), a Generator (returned
    as-is when no key is given) or a SeedSequence.
    """
    if isinstance(seed, np.random.Generator):
        if key:
            raise TypeError("cannot derive a keyed stream from a Generator; pass an int seed")
        return seed
    if isinstance(seed, np.random.SeedSequence):
        ss = seed
        if key:
            ss = np.random.SeedSequence(ss.entropy, spawn_key=tuple(key))
    else:
        ss = np.random.SeedSequence(seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.PCG64(ss))
