from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from geograph.domain.graph import Graph


@dataclass(frozen=True, slots=True, eq=False)
class Laplacian:
    """L = D − A of an unweighted graph (dense)."""

    values: np.ndarray
    graph: Graph


@dataclass(frozen=True, slots=True, eq=False)
class ResistanceTable:
    """Effective resistance R_e for every edge, aligned with ``graph.edges``."""

    r: np.ndarray
    graph: Graph

    def total(self) -> float:
        return float(self.r.sum())


@dataclass(frozen=True, slots=True)
class SparsifyConfig:
    sigma: float
    oversample_c: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.sigma <= 1.0:
            raise ValueError("sigma must be in (0, 1]")
        if self.oversample_c <= 0:
            raise ValueError("oversample_c must be positive")


@dataclass(frozen=True, slots=True, eq=False)
class SparsifyResult:
    """Unweighted support plus the weighted audit sparsifier.

    ``weights`` is aligned with ``graph.edges``; ``q`` is the number of
    samples drawn with replacement.
    """

    graph: Graph
    weights: np.ndarray
    q: int
    sigma: float
    connected: bool

    @property
    def support_size(self) -> int:
        return self.graph.edge_count

    @property
    def mean_degree(self) -> float:
        return 2.0 * self.graph.edge_count / self.graph.n
