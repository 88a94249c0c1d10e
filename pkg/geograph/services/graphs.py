import logging
import math
from dataclasses import dataclass, field

import numpy as np

from geograph.domain.geometry import DistanceMatrix, NeighborIndex
from geograph.domain.graph import DensityGrid, Graph, GraphMethod, WeightedTree
from geograph.errors import ParamError

logger = logging.getLogger(__name__)

MAX_GRID_SIZE = 50
RMST_GAMMA_RANGE = (1e-4, 10.0)


class UnionFind:
    """Disjoint sets over 0..n-1 with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        return True


def kruskal(d: DistanceMatrix) -> WeightedTree:
    """Kruskal over the complete graph; equal weights are taken in lexicographic (u, v) order."""
    n = d.n
    if n < 2:
        raise ParamError(f"Need at least 2 nodes for a spanning tree, got {n}")
    iu, ju = np.triu_indices(n, k=1)
    w = d.values[iu, ju]
    # triu_indices is lexicographic, so a stable sort on weight keeps the (u, v) tie-break
    order = np.argsort(w, kind="stable")

    uf = UnionFind(n)
    picked = []
    for idx in order.tolist():
        if uf.union(int(iu[idx]), int(ju[idx])):
            picked.append(idx)
            if len(picked) == n - 1:
                break
    picked = np.asarray(picked, dtype=np.int64)
    edges = np.column_stack([iu[picked], ju[picked]])
    return WeightedTree(n=n, edges=edges, weights=w[picked])


def minimum_spanning_tree(d: DistanceMatrix) -> Graph:
    return kruskal(d).as_graph()


def mst_path_max(tree: WeightedTree) -> np.ndarray:
    """Largest edge weight on the unique tree path between every pair of nodes.

    Replays the tree edges in ascending weight: when an edge of weight w first
    joins components A and B, every path between A and B runs through it and
    only through lighter edges otherwise, so the path maximum is w.
    """
    n = tree.n
    out = np.zeros((n, n), dtype=np.float64)
    uf = UnionFind(n)
    members = {i: [i] for i in range(n)}
    for idx in np.argsort(tree.weights, kind="stable").tolist():
        u, v = (int(x) for x in tree.edges[idx])
        w = float(tree.weights[idx])
        ru, rv = uf.find(u), uf.find(v)
        a, b = members[ru], members[rv]
        out[np.ix_(a, b)] = w
        out[np.ix_(b, a)] = w
        uf.union(ru, rv)
        root = uf.find(ru)
        merged = a + b
        members.pop(ru)
        members.pop(rv)
        members[root] = merged
    return out


def _check_k(k: int, n: int) -> int:
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= n - 1:
        raise ParamError(f"k={k} outside [1, {n - 1}]")
    return int(k)


def knn_rule(d: DistanceMatrix, nbr: NeighborIndex, k: int) -> np.ndarray:
    """Pre-union kNN adjacency: d(i,j) <= d(i,i_k) or d(i,j) <= d(j,j_k)."""
    k = _check_k(k, d.n)
    kth = nbr.kth(k)
    mask = (d.values <= kth[:, None]) | (d.values <= kth[None, :])
    np.fill_diagonal(mask, False)
    return mask


def mknn_rule(d: DistanceMatrix, nbr: NeighborIndex, k: int) -> np.ndarray:
    """Pre-union MkNN adjacency: both endpoints within each other's k-neighborhood."""
    k = _check_k(k, d.n)
    kth = nbr.kth(k)
    mask = (d.values <= kth[:, None]) & (d.values <= kth[None, :])
    np.fill_diagonal(mask, False)
    return mask


def cknn_rule(d: DistanceMatrix, nbr: NeighborIndex, k: int, delta: float = 1.0) -> np.ndarray:
    """Pre-union CkNN adjacency: d(i,j) < delta * sqrt(d(i,i_k) d(j,j_k))."""
    k = _check_k(k, d.n)
    if not delta > 0:
        raise ParamError(f"delta={delta} must be positive")
    kth = nbr.kth(k)
    mask = d.values < delta * np.sqrt(kth[:, None] * kth[None, :])
    np.fill_diagonal(mask, False)
    return mask


def rmst_rule(
    d: DistanceMatrix,
    nbr: NeighborIndex,
    gamma: float,
    path_max: np.ndarray,
    k_local: int = 1,
) -> np.ndarray:
    """Pre-union RMST adjacency: d(i,j) < path_max(i,j) + gamma (d(i,i_k) + d(j,j_k))."""
    if not gamma >= 0:
        raise ParamError(f"gamma={gamma} must be non-negative")
    k_local = _check_k(k_local, d.n)
    kth = nbr.kth(k_local)
    mask = d.values < path_max + gamma * (kth[:, None] + kth[None, :])
    np.fill_diagonal(mask, False)
    return mask


def _union_with_mst(mask: np.ndarray, mst: Graph, method: GraphMethod, params: dict) -> Graph:
    mask = mask.copy()
    if mst.edge_count:
        mask[mst.edges[:, 0], mst.edges[:, 1]] = True
    u, v = np.nonzero(np.triu(mask, k=1))
    return Graph(n=mask.shape[0], edges=np.column_stack([u, v]), method=method, params=params)


def build_knn(d: DistanceMatrix, nbr: NeighborIndex, k: int, mst: Graph) -> Graph:
    return _union_with_mst(knn_rule(d, nbr, k), mst, GraphMethod.KNN, {"k": int(k)})


def build_mknn(d: DistanceMatrix, nbr: NeighborIndex, k: int, mst: Graph) -> Graph:
    return _union_with_mst(mknn_rule(d, nbr, k), mst, GraphMethod.MKNN, {"k": int(k)})


def build_cknn(
    d: DistanceMatrix, nbr: NeighborIndex, k: int, mst: Graph, delta: float = 1.0
) -> Graph:
    return _union_with_mst(
        cknn_rule(d, nbr, k, delta), mst, GraphMethod.CKNN, {"k": int(k), "delta": float(delta)}
    )


def build_rmst(
    d: DistanceMatrix,
    nbr: NeighborIndex,
    gamma: float,
    mst: Graph,
    k_local: int = 1,
    path_max: np.ndarray | None = None,
    tree: WeightedTree | None = None,
) -> Graph:
    if path_max is None:
        path_max = mst_path_max(tree if tree is not None else kruskal(d))
    return _union_with_mst(
        rmst_rule(d, nbr, gamma, path_max, k_local),
        mst,
        GraphMethod.RMST,
        {"gamma": float(gamma), "k_local": int(k_local)},
    )


def complete_graph(n: int) -> Graph:
    u, v = np.triu_indices(n, k=1)
    return Graph(n=n, edges=np.column_stack([u, v]), method=GraphMethod.COMPLETE)


def edge_density(g: Graph) -> float:
    """|E| / (N(N-1)/2)."""
    if g.n < 2:
        raise ParamError("edge density needs at least 2 nodes")
    return g.edge_count / (g.n * (g.n - 1) / 2)


def mean_degree(g: Graph) -> float:
    return 2.0 * g.edge_count / g.n if g.n else 0.0


def density_grid(method: GraphMethod | str, n: int, grid_size: int = MAX_GRID_SIZE) -> DensityGrid:
    """Sparse-to-dense parameter grid.

    kNN/MkNN/CkNN: geometrically spaced integer k in [1, ceil(N/2)], deduplicated.
    RMST: log-spaced gamma in [1e-4, 10].
    """
    method = GraphMethod(method)
    if not 2 <= grid_size <= MAX_GRID_SIZE:
        raise ParamError(f"grid_size={grid_size} outside [2, {MAX_GRID_SIZE}]")
    if method.uses_integer_parameter:
        hi = max(1, math.ceil(n / 2))
        ks = np.unique(np.rint(np.geomspace(1, hi, grid_size)).astype(np.int64))
        return DensityGrid(method=method, values=tuple(int(k) for k in ks))
    if method == GraphMethod.RMST:
        lo, hi = RMST_GAMMA_RANGE
        return DensityGrid(
            method=method, values=tuple(float(g) for g in np.geomspace(lo, hi, grid_size))
        )
    raise ParamError(f"No density grid for method {method.value}")


@dataclass
class GraphFactory:
    """Builds any construction over one distance matrix, sharing the MST backbone.

    The neighbor index, Kruskal tree and MST path maxima are computed once and
    reused across grid points.
    """

    distances: DistanceMatrix
    neighbors: NeighborIndex
    tree: WeightedTree
    delta: float = 1.0
    k_local: int = 1
    _path_max: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def from_distances(cls, d: DistanceMatrix, delta: float = 1.0, k_local: int = 1) -> "GraphFactory":
        from geograph.services.geometry import neighbor_index

        return cls(distances=d, neighbors=neighbor_index(d), tree=kruskal(d), delta=delta, k_local=k_local)

    @property
    def mst(self) -> Graph:
        return self.tree.as_graph()

    @property
    def path_max(self) -> np.ndarray:
        if self._path_max is None:
            self._path_max = mst_path_max(self.tree)
        return self._path_max

    def build(self, method: GraphMethod | str, param=None) -> Graph:
        method = GraphMethod(method)
        d, nbr, mst = self.distances, self.neighbors, self.mst
        if method == GraphMethod.MST:
            return mst
        if method == GraphMethod.COMPLETE:
            return complete_graph(d.n)
        if method == GraphMethod.KNN:
            return build_knn(d, nbr, param, mst)
        if method == GraphMethod.MKNN:
            return build_mknn(d, nbr, param, mst)
        if method == GraphMethod.CKNN:
            return build_cknn(d, nbr, param, mst, delta=self.delta)
        if method == GraphMethod.RMST:
            return build_rmst(d, nbr, param, mst, k_local=self.k_local, path_max=self.path_max)
        raise ParamError(f"Method {method.value} is not a construction")
