from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, slots=True, eq=False)
class DistanceMatrix:
    """Symmetric N×N Euclidean distance matrix with zero diagonal."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, slots=True, eq=False)
class NeighborIndex:
    """Per-node neighbor ordering and k-th neighbor distances.

    ``order[i]`` lists the other N-1 nodes by ascending distance, ties broken
    by node index. ``kth_distance[i, k]`` is d(i, i_k) for k = 1..N-1; column 0
    holds the zero self-distance so that k indexes the column directly.
    """

    order: np.ndarray
    kth_distance: np.ndarray

    @property
    def n(self) -> int:
        return self.order.shape[0]

    def kth(self, k: int) -> np.ndarray:
        """Vector of d(i, i_k) over all nodes."""
        return self.kth_distance[:, k]
