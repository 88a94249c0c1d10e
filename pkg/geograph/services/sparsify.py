import logging
import math

import numpy as np
import scipy.linalg

from geograph.core.random import SPARSIFY, make_rng
from geograph.domain.graph import Graph, GraphMethod
from geograph.domain.sparsify import Laplacian, ResistanceTable, SparsifyConfig, SparsifyResult
from geograph.errors import ConnectivityError, ParamError

logger = logging.getLogger(__name__)


def laplacian(g: Graph) -> Laplacian:
    """Dense L = D − A with unit edge weights."""
    a = g.adjacency().toarray()
    return Laplacian(values=np.diag(a.sum(axis=1)) - a, graph=g)


def weighted_laplacian(n: int, edges: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Dense Laplacian of a weighted edge list."""
    out = np.zeros((n, n))
    u, v = edges[:, 0], edges[:, 1]
    np.add.at(out, (u, v), -weights)
    np.add.at(out, (v, u), -weights)
    np.add.at(out, (u, u), weights)
    np.add.at(out, (v, v), weights)
    return out


def laplacian_pseudoinverse(g: Graph) -> np.ndarray:
    """
    L⁺ of a connected graph.

    For connected graphs L + J/N is positive definite and (L + J/N)⁻¹ − J/N = L⁺.

    Raises:
        ConnectivityError: If the graph has more than one component
    """
    if g.n < 2 or not g.is_connected():
        raise ConnectivityError(
            f"Graph on {g.n} nodes has {g.n_components()} components; a connected graph is required"
        )
    n = g.n
    shift = np.full((n, n), 1.0 / n)
    inv = scipy.linalg.solve(laplacian(g).values + shift, np.eye(n), assume_a="pos")
    return inv - shift


def resistance_distance(lp: np.ndarray, u: int, v: int) -> float:
    """(e_u − e_v)ᵀ L⁺ (e_u − e_v) for any node pair."""
    return float(lp[u, u] + lp[v, v] - 2.0 * lp[u, v])


def effective_resistances(g: Graph) -> ResistanceTable:
    """Effective resistance of every edge, aligned with ``g.edges``."""
    lp = laplacian_pseudoinverse(g)
    u, v = g.edges[:, 0], g.edges[:, 1]
    r = lp[u, u] + lp[v, v] - 2.0 * lp[u, v]
    return ResistanceTable(r=r, graph=g)


def sample_count(n: int, sigma: float, oversample_c: float) -> int:
    """q = ⌈c · N · ln N / σ²⌉."""
    return int(math.ceil(oversample_c * n * math.log(n) / sigma**2))


def sssa_sparsify(
    g: Graph,
    cfg: SparsifyConfig,
    resistances: ResistanceTable | None = None,
) -> SparsifyResult:
    """
    Sample q edges with replacement, proportionally to effective resistance.

    - Sampled weights are count_e / (q · p_e) (the audit sparsifier)
    - The returned graph is the unweighted support; it may be disconnected

    Raises:
        ParamError: If σ is below 1/N, the low end of the σ grid
        ConnectivityError: If ``g`` is disconnected
    """
    if g.n < 2 or cfg.sigma < (1.0 / g.n) * (1.0 - 1e-12):
        raise ParamError(f"sigma must be in [1/N, 1] for N={g.n}, got {cfg.sigma:g}")
    if resistances is None:
        resistances = effective_resistances(g)
    r = np.clip(resistances.r, 0.0, None)
    p = r / r.sum()
    q = sample_count(g.n, cfg.sigma, cfg.oversample_c)

    rng = make_rng(cfg.seed, SPARSIFY)
    counts = rng.multinomial(q, p)
    kept = counts > 0
    weights = counts[kept] / (q * p[kept])
    support = Graph(
        n=g.n,
        edges=g.edges[kept],
        method=GraphMethod.SPARSIFIED,
        params={"sigma": float(cfg.sigma), "q": q, "source": g.method.value},
    )
    connected = support.is_connected()
    if not connected:
        logger.warning(
            "Sparsified support at sigma=%.4g is disconnected (%d components, %d/%d edges kept)",
            cfg.sigma,
            support.n_components(),
            support.edge_count,
            g.edge_count,
        )
    return SparsifyResult(
        graph=support, weights=weights, q=q, sigma=float(cfg.sigma), connected=connected
    )


def audit_laplacian(result: SparsifyResult) -> np.ndarray:
    """L̃ of the weighted sparsifier behind ``result``."""
    return weighted_laplacian(result.graph.n, result.graph.edges, result.weights)


def sigma_grid(n: int, grid_size: int = 50) -> list[float]:
    """``grid_size`` log-spaced values from 1/n to 1, ascending."""
    if grid_size < 2:
        raise ParamError(f"grid_size={grid_size} must be at least 2")
    if n < 2:
        raise ParamError(f"n={n} must be at least 2")
    values = np.geomspace(1.0 / n, 1.0, grid_size)
    values[0], values[-1] = 1.0 / n, 1.0
    return [float(v) for v in values]
