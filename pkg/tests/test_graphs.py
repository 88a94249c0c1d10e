import itertools

import networkx as nx
import numpy as np
import pytest

from geograph.domain.geometry import DistanceMatrix
from geograph.domain.graph import Graph, GraphMethod, WeightedTree
from geograph.errors import ParamError
from geograph.services import graphs
from geograph.services.geometry import distance_matrix, neighbor_index


def _line(*coords) -> DistanceMatrix:
    return distance_matrix(np.array(coords, dtype=float).reshape(-1, 1))


def _tree_weight(d: DistanceMatrix, edges) -> float:
    return float(sum(d.values[u, v] for u, v in edges))


def _pre_union(mask: np.ndarray) -> set[tuple[int, int]]:
    u, v = np.nonzero(np.triu(mask, k=1))
    return {(int(a), int(b)) for a, b in zip(u, v)}


# ============================================================================
# MINIMUM SPANNING TREE TESTS
# ============================================================================


def test_mst_drops_the_long_edge():
    """Test points 0, 1, 3 give edges (0,1) and (1,2)."""
    mst = graphs.minimum_spanning_tree(_line(0, 1, 3))
    assert mst.edge_set() == {(0, 1), (1, 2)}
    assert mst.method == GraphMethod.MST


def test_mst_two_nodes():
    """Test N=2 gives the single edge."""
    assert graphs.minimum_spanning_tree(_line(0, 5)).edge_set() == {(0, 1)}


def test_mst_single_node():
    """Test N=1 raises ParamError."""
    with pytest.raises(ParamError):
        graphs.kruskal(DistanceMatrix(values=np.zeros((1, 1))))


def test_mst_matches_networkx_weight(points, distances):
    """Test the total weight equals networkx's MST weight."""
    tree = graphs.kruskal(distances)
    g = nx.Graph()
    for i, j in itertools.combinations(range(len(points)), 2):
        g.add_edge(i, j, weight=distances.values[i, j])
    expected = nx.minimum_spanning_tree(g).size(weight="weight")
    assert tree.weights.sum() == pytest.approx(expected, rel=1e-12)
    assert len(tree.edges) == len(points) - 1


def test_mst_is_optimal_by_enumeration():
    """Test Kruskal against brute-force enumeration of all spanning trees on 30 random 6-node sets."""
    gen = np.random.default_rng(6)
    pairs = list(itertools.combinations(range(6), 2))
    for _ in range(30):
        d = distance_matrix(gen.random((6, 2)))
        best = np.inf
        n_trees = 0
        for subset in itertools.combinations(pairs, 5):
            uf = graphs.UnionFind(6)
            if all(uf.union(u, v) for u, v in subset):
                n_trees += 1
                best = min(best, _tree_weight(d, subset))
        assert n_trees == 6**4
        assert _tree_weight(d, graphs.kruskal(d).edges) == pytest.approx(best, rel=1e-12)


def test_mst_path_max_series_path():
    """Test a path 0-1 (w=1), 1-2 (w=5) has path max 5 between its ends."""
    tree = WeightedTree(n=3, edges=np.array([[0, 1], [1, 2]]), weights=np.array([1.0, 5.0]))
    pm = graphs.mst_path_max(tree)
    assert pm[0, 2] == 5.0
    assert pm[2, 0] == 5.0
    assert pm[0, 1] == 1.0


def test_mst_path_max_matches_path_walk(rng):
    """Test every pair against the heaviest edge on the networkx tree path."""
    d = distance_matrix(rng.random((10, 3)))
    tree = graphs.kruskal(d)
    pm = graphs.mst_path_max(tree)
    t = nx.Graph()
    for (u, v), w in zip(tree.edges, tree.weights):
        t.add_edge(int(u), int(v), weight=float(w))
    for i, j in itertools.combinations(range(10), 2):
        path = nx.shortest_path(t, i, j)
        expected = max(t[a][b]["weight"] for a, b in zip(path, path[1:]))
        assert pm[i, j] == expected
        assert pm[j, i] == expected


# ============================================================================
# CONSTRUCTION TESTS
# ============================================================================


def test_knn_one_dimensional_example():
    """Test points 0, 1, 10 with k=1 give edges (0,1) and (1,2)."""
    f = graphs.GraphFactory.from_distances(_line(0, 1, 10))
    assert f.build(GraphMethod.KNN, 1).edge_set() == {(0, 1), (1, 2)}


def test_mknn_one_dimensional_example():
    """Test points 0, 1, 10 with k=1: mutual edge (0,1), MST adds (1,2)."""
    d = _line(0, 1, 10)
    nbr = neighbor_index(d)
    assert _pre_union(graphs.mknn_rule(d, nbr, 1)) == {(0, 1)}
    f = graphs.GraphFactory.from_distances(d)
    assert f.build(GraphMethod.MKNN, 1).edge_set() == {(0, 1), (1, 2)}


def test_mknn_degree_at_most_k():
    """Test every pre-union MkNN degree is at most k when distances are distinct."""
    gen = np.random.default_rng(11)
    for _ in range(30):
        n = int(gen.integers(6, 30))
        d = distance_matrix(gen.random((n, 3)))
        nbr = neighbor_index(d)
        for k in (1, 2, n // 2, n - 1):
            degrees = graphs.mknn_rule(d, nbr, k).sum(axis=1)
            assert degrees.max() <= k


def test_mknn_degree_can_exceed_k_on_ties():
    """Test points 0, 1, -1 with k=1: the middle point keeps both tied neighbors."""
    d = _line(0, 1, -1)
    degrees = graphs.mknn_rule(d, neighbor_index(d), 1).sum(axis=1)
    assert degrees.tolist() == [2, 1, 1]


def test_knn_full_k_is_complete(distances):
    """Test k = N-1 yields the complete graph."""
    n = distances.n
    f = graphs.GraphFactory.from_distances(distances)
    g = f.build(GraphMethod.KNN, n - 1)
    assert g.edge_count == n * (n - 1) // 2
    assert graphs.edge_density(g) == 1.0


def test_knn_rule_matches_loop(distances):
    """Test the OR rule against a double loop."""
    nbr = neighbor_index(distances)
    k = 4
    kth = nbr.kth(k)
    d = distances.values
    expected = {
        (i, j)
        for i in range(distances.n)
        for j in range(i + 1, distances.n)
        if d[i, j] <= kth[i] or d[i, j] <= kth[j]
    }
    assert _pre_union(graphs.knn_rule(distances, nbr, k)) == expected


def test_mknn_rule_matches_loop(distances):
    """Test the AND rule against a double loop on 30 points with k=4."""
    nbr = neighbor_index(distances)
    kth = nbr.kth(4)
    d = distances.values
    expected = {
        (i, j)
        for i in range(distances.n)
        for j in range(i + 1, distances.n)
        if d[i, j] <= kth[i] and d[i, j] <= kth[j]
    }
    assert _pre_union(graphs.mknn_rule(distances, nbr, 4)) == expected


def test_rmst_rule_matches_loop(rng):
    """Test the RMST rule against direct evaluation with the tree path maxima."""
    d = distance_matrix(rng.random((20, 3)))
    nbr = neighbor_index(d)
    pm = graphs.mst_path_max(graphs.kruskal(d))
    kth = nbr.kth(1)
    gamma = 0.05
    expected = {
        (i, j)
        for i in range(20)
        for j in range(i + 1, 20)
        if d.values[i, j] < pm[i, j] + gamma * (kth[i] + kth[j])
    }
    assert _pre_union(graphs.rmst_rule(d, nbr, gamma, pm)) == expected


def test_cknn_two_points_adds_nothing():
    """Test the strict inequality leaves only the MST edge for N=2."""
    d = _line(0, 2)
    nbr = neighbor_index(d)
    assert not graphs.cknn_rule(d, nbr, 1).any()
    assert graphs.GraphFactory.from_distances(d).build(GraphMethod.CKNN, 1).edge_set() == {(0, 1)}


def test_nesting_mknn_cknn_knn():
    """Test MkNN ⊆ CkNN(δ=1) ⊆ kNN on 50 random instances.

    Mutual k-th-neighbor pairs sit exactly on the CkNN boundary and are the
    only MkNN edges allowed outside CkNN.
    """
    gen = np.random.default_rng(50)
    for _ in range(50):
        n = int(gen.integers(8, 25))
        d = distance_matrix(gen.random((n, 3)))
        nbr = neighbor_index(d)
        k = int(gen.integers(1, n - 1))
        mknn = _pre_union(graphs.mknn_rule(d, nbr, k))
        cknn = _pre_union(graphs.cknn_rule(d, nbr, k, 1.0))
        knn = _pre_union(graphs.knn_rule(d, nbr, k))
        kth = nbr.kth(k)
        boundary = {
            (i, j)
            for i, j in mknn - cknn
            if d.values[i, j] == kth[i] and d.values[i, j] == kth[j]
        }
        assert mknn - cknn == boundary
        assert cknn <= knn


def test_rmst_gamma_zero_is_mst():
    """Test RMST(γ=0) equals the MST on instances with distinct distances."""
    gen = np.random.default_rng(5)
    for _ in range(20):
        d = distance_matrix(gen.random((15, 2)))
        f = graphs.GraphFactory.from_distances(d)
        assert f.build(GraphMethod.RMST, 0.0).edge_set() == f.mst.edge_set()


@pytest.mark.parametrize(
    "method,param",
    [
        (GraphMethod.KNN, 1),
        (GraphMethod.MKNN, 3),
        (GraphMethod.CKNN, 2),
        (GraphMethod.RMST, 0.01),
    ],
)
def test_builders_contain_mst_and_are_connected(factory, method, param):
    """Test every construction contains the MST and is connected."""
    g = factory.build(method, param)
    assert factory.mst.edge_set() <= g.edge_set()
    assert g.is_connected()
    assert g.method == method


@pytest.mark.parametrize("method", [GraphMethod.KNN, GraphMethod.MKNN, GraphMethod.CKNN])
def test_density_grows_with_k(factory, method):
    """Test built edge sets are nested in k."""
    previous = set()
    for k in (1, 2, 4, 8, 16):
        edges = factory.build(method, k).edge_set()
        assert previous <= edges
        previous = edges


@pytest.mark.parametrize("rule", [graphs.knn_rule, graphs.mknn_rule])
def test_rules_nested_in_k(distances, rule):
    """Test the pre-union kNN and MkNN edge sets are nested in k."""
    nbr = neighbor_index(distances)
    previous = set()
    for k in range(1, distances.n):
        edges = _pre_union(rule(distances, nbr, k))
        assert previous <= edges
        previous = edges


def test_rmst_nested_in_gamma(factory):
    """Test RMST edge sets grow with gamma, before and after the MST union."""
    pm = graphs.mst_path_max(factory.tree)
    previous_rule, previous_graph = set(), set()
    for gamma in (0.0, 0.01, 0.05, 0.2, 1.0, 5.0):
        rule = _pre_union(graphs.rmst_rule(factory.distances, factory.neighbors, gamma, pm))
        graph = factory.build(GraphMethod.RMST, gamma).edge_set()
        assert previous_rule <= rule
        assert previous_graph <= graph
        previous_rule, previous_graph = rule, graph


def test_cknn_records_parameters(factory):
    """Test the graph carries k and delta."""
    g = factory.build(GraphMethod.CKNN, 3)
    assert g.params == {"k": 3, "delta": 1.0}
    assert g.parameter == 3


def test_k_out_of_range(factory):
    """Test k outside [1, N-1] raises ParamError."""
    with pytest.raises(ParamError):
        factory.build(GraphMethod.KNN, 0)
    with pytest.raises(ParamError):
        factory.build(GraphMethod.KNN, factory.distances.n)


def test_negative_gamma(factory):
    """Test γ < 0 raises ParamError."""
    with pytest.raises(ParamError):
        factory.build(GraphMethod.RMST, -0.1)


def test_non_positive_delta(distances):
    """Test δ ≤ 0 raises ParamError."""
    nbr = neighbor_index(distances)
    with pytest.raises(ParamError):
        graphs.cknn_rule(distances, nbr, 2, delta=0.0)


def test_factory_rejects_non_construction(factory):
    """Test sparsified is not something the factory builds."""
    with pytest.raises(ParamError):
        factory.build(GraphMethod.SPARSIFIED, 0.5)


def test_standalone_builders_match_factory(distances, factory):
    """Test the module-level builders give the factory's edge sets."""
    nbr = neighbor_index(distances)
    mst = graphs.minimum_spanning_tree(distances)
    assert graphs.build_knn(distances, nbr, 3, mst).edge_set() == factory.build(GraphMethod.KNN, 3).edge_set()
    assert graphs.build_mknn(distances, nbr, 3, mst).edge_set() == factory.build(GraphMethod.MKNN, 3).edge_set()
    assert graphs.build_cknn(distances, nbr, 3, mst).edge_set() == factory.build(GraphMethod.CKNN, 3).edge_set()
    # without path maxima the builder recomputes them from a fresh Kruskal tree
    assert graphs.build_rmst(distances, nbr, 0.1, mst).edge_set() == factory.build(GraphMethod.RMST, 0.1).edge_set()


# ============================================================================
# DENSITY TESTS
# ============================================================================


def test_edge_density_complete_graph():
    """Test K4 has density 1."""
    assert graphs.edge_density(graphs.complete_graph(4)) == 1.0


def test_edge_density_mst(factory):
    """Test a spanning tree on N nodes has density 2/N."""
    n = factory.distances.n
    assert graphs.edge_density(factory.mst) == pytest.approx(2.0 / n)
    assert graphs.mean_degree(factory.mst) == pytest.approx(2.0 * (n - 1) / n)


def test_edge_density_single_node():
    """Test N < 2 raises ParamError."""
    with pytest.raises(ParamError):
        graphs.edge_density(Graph(n=1, edges=np.zeros((0, 2))))


def test_density_grid_endpoints():
    """Test grid_size=2 for kNN on 10 nodes gives {1, 5}."""
    assert graphs.density_grid(GraphMethod.KNN, 10, 2).values == (1, 5)


def test_density_grid_covers_large_k():
    """Test the CkNN grid for N=2072 reaches k ≥ 233."""
    grid = graphs.density_grid(GraphMethod.CKNN, 2072, 50)
    assert max(grid) >= 233
    assert len(grid) <= 50


@pytest.mark.parametrize("method", ["knn", "mknn", "cknn", "rmst"])
def test_density_grid_strictly_increasing(method):
    """Test every grid is strictly increasing after deduplication."""
    for n in (5, 40, 500):
        values = graphs.density_grid(method, n, 50).values
        assert all(b > a for a, b in zip(values, values[1:]))


def test_density_grid_rmst_range():
    """Test the γ grid spans [1e-4, 10]."""
    values = graphs.density_grid(GraphMethod.RMST, 100, 10).values
    assert values[0] == pytest.approx(1e-4)
    assert values[-1] == pytest.approx(10.0)


def test_density_grid_invalid_size():
    """Test grid sizes outside [2, 50] raise ParamError."""
    with pytest.raises(ParamError):
        graphs.density_grid(GraphMethod.KNN, 10, 1)
    with pytest.raises(ParamError):
        graphs.density_grid(GraphMethod.KNN, 10, 51)


def test_density_grid_for_mst_is_rejected():
    """Test methods without a parameter have no grid."""
    with pytest.raises(ParamError):
        graphs.density_grid(GraphMethod.MST, 10, 5)
