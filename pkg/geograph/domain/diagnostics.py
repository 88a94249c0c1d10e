from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, slots=True, eq=False)
class PcaBasis:
    """Orthonormal basis (N×r) of the leading centered principal directions.

    ``r`` is the smallest count whose cumulative explained variance reaches
    ``p_star``; ``explained_ratio`` is the ratio actually reached.
    """

    components: np.ndarray
    explained_ratio: float
    p_star: float

    @property
    def rank(self) -> int:
        return self.components.shape[1]


@dataclass(frozen=True, slots=True, eq=False)
class PcaSpectrum:
    """Left singular vectors of a centered matrix and cumulative variance ratios."""

    u: np.ndarray
    cumulative: np.ndarray


@dataclass(frozen=True, slots=True, eq=False)
class Embedding2D:
    """Two-dimensional t-SNE coordinates."""

    coords: np.ndarray
    seed: int
    perplexity: float

    @property
    def n(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True, slots=True, eq=False)
class ClassMasks:
    """M^inter = 11ᵀ − YYᵀ and M^intra = YYᵀ − I."""

    inter: np.ndarray
    intra: np.ndarray
