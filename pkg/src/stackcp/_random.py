"""Seed plumbing.

All randomness uses numpy's PCG64 bit generator, which produces the same
stream on every platform for a given seed. Independent streams are derived
from one experiment seed by name so that, e.g., adding a learner never shifts
the fold assignment.
"""

import zlib

import numpy as np


def child_seed(seed: int, name: str, *extra: int) -> int:
    """Derive a 64-bit seed for the stream called ``name``."""
    key = (zlib.crc32(name.encode("utf-8")), *(int(e) for e in extra))
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=key)
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int, name: str | None = None, *extra: int) -> np.random.Generator:
    if name is None:
        return np.random.Generator(np.random.PCG64(int(seed)))
    return np.random.Generator(np.random.PCG64(child_seed(seed, name, *extra)))
