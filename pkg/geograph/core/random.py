"""Seeded random streams.

Every random draw in the package goes through :func:`make_rng`, which keys a
Philox generator (64-bit, counter-based) with ``SeedSequence([seed, *stream])``.
Independent streams for the same seed (weight init vs. dropout, split vs.
generator) are separated by the trailing stream ids.
"""

import numpy as np

# Stream ids
SPLIT = 0
GENERATOR = 1
WEIGHTS = 2
DROPOUT = 3
TSNE = 4
SPARSIFY = 5


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Return a Philox generator for ``seed`` and the given stream ids."""
    if seed < 0:
        raise ValueError("seed must be non-negative")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))
