"""Seed-stream derivation.

A child stream is identified by ``(master seed, stream, replication, column)``
and hashed through :class:`numpy.random.SeedSequence`, so the same key always
yields the same generator regardless of the order in which replications run.
"""

import numpy as np

# stream tags keep array columns, term counts and d draws disjoint
ARRAY = 0
LENGTHS = 1
RANDOM_D = 2
NEG_ARRAY = 3
NEG_LENGTHS = 4
NEG_RANDOM_D = 5
FACTOR = 6
NEG_FACTOR = 7


def child_seed(master, stream=0, replication=0, column=0):
    """Return a SeedSequence keyed on (master, stream, replication, column)."""
    master = int(master) & 0xFFFFFFFFFFFFFFFF
    return np.random.SeedSequence(
        entropy=master, spawn_key=(int(stream), int(replication), int(column))
    )


def rng_for(master, stream=0, replication=0, column=0):
    return np.random.default_rng(child_seed(master, stream, replication, column))


def as_generator(seed):
    """Accept an int, SeedSequence or Generator and return a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
