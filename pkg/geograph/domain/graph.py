from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components


class GraphMethod(str, Enum):
    MST = "mst"
    KNN = "knn"
    MKNN = "mknn"
    CKNN = "cknn"
    RMST = "rmst"
    SPARSIFIED = "sparsified"
    COMPLETE = "complete"
    EXTERNAL = "external"

    @property
    def uses_integer_parameter(self) -> bool:
        return self in (GraphMethod.KNN, GraphMethod.MKNN, GraphMethod.CKNN)


# Methods whose parameter sweeps go through density_grid
SWEEPABLE = (GraphMethod.KNN, GraphMethod.MKNN, GraphMethod.CKNN, GraphMethod.RMST)


def _canonical_edges(edges) -> np.ndarray:
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if len(e) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    e = np.sort(e, axis=1)
    e = np.unique(e, axis=0)
    return e


@dataclass(frozen=True, slots=True, eq=False)
class Graph:
    """Undirected, unweighted simple graph on ``n`` nodes.

    Edges are stored once as (u, v) with u < v, sorted lexicographically.
    ``params`` records the construction parameter (k, gamma, delta, sigma).
    """

    n: int
    edges: np.ndarray
    method: GraphMethod = GraphMethod.EXTERNAL
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        e = _canonical_edges(self.edges)
        if len(e) and (e[:, 0] == e[:, 1]).any():
            raise ValueError("self-loops are not allowed")
        if len(e) and (e.min() < 0 or e.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "method", GraphMethod(self.method))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def parameter(self) -> float | int | None:
        for key in ("k", "gamma", "sigma"):
            if key in self.params:
                return self.params[key]
        return None

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def adjacency(self) -> sp.csr_array:
        """Symmetric 0-1 adjacency as a sparse matrix."""
        u, v = self.edges[:, 0], self.edges[:, 1]
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        data = np.ones(len(rows), dtype=np.float64)
        return sp.csr_array((data, (rows, cols)), shape=(self.n, self.n))

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def n_components(self) -> int:
        n_comp, _ = connected_components(self.adjacency(), directed=False)
        return int(n_comp)

    def is_connected(self) -> bool:
        return self.n_components() == 1


@dataclass(frozen=True, slots=True, eq=False)
class DensityGrid:
    """Strictly increasing density parameters (k or gamma) for one method."""

    method: GraphMethod
    values: tuple

    def __post_init__(self):
        vals = tuple(self.values)
        if len(vals) > 50:
            raise ValueError("a density grid holds at most 50 values")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("density grid must be strictly increasing")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


@dataclass(frozen=True, slots=True, eq=False)
class WeightedTree:
    """Kruskal spanning tree with its original edge weights, in acceptance order."""

    n: int
    edges: np.ndarray
    weights: np.ndarray

    def as_graph(self) -> Graph:
        return Graph(n=self.n, edges=self.edges, method=GraphMethod.MST)
