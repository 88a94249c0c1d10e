import networkx as nx
import numpy as np
import pytest

from geograph.domain.graph import Graph, GraphMethod
from geograph.domain.sparsify import SparsifyConfig
from geograph.errors import ConnectivityError, ParamError
from geograph.services import graphs, sparsify
from geograph.services.geometry import distance_matrix


def _path(n: int) -> Graph:
    return Graph(n=n, edges=[(i, i + 1) for i in range(n - 1)])


def _triangle() -> Graph:
    return Graph(n=3, edges=[(0, 1), (1, 2), (0, 2)])


def _knn_graph(seed: int, n: int = 50, k: int = 5) -> Graph:
    x = np.random.default_rng(seed).random((n, 4))
    return graphs.GraphFactory.from_distances(distance_matrix(x)).build(GraphMethod.KNN, k)


# ============================================================================
# LAPLACIAN TESTS
# ============================================================================


def test_laplacian_single_edge():
    """Test L of one edge."""
    lap = sparsify.laplacian(Graph(n=2, edges=[(0, 1)]))
    assert np.array_equal(lap.values, [[1.0, -1.0], [-1.0, 1.0]])


def test_laplacian_triangle():
    """Test L of the triangle is 3I - J."""
    lap = sparsify.laplacian(_triangle())
    assert np.array_equal(lap.values, 3 * np.eye(3) - np.ones((3, 3)))


def test_laplacian_rows_sum_to_zero_and_psd():
    """Test zero row sums and nonnegative spectrum on a kNN graph."""
    lap = sparsify.laplacian(_knn_graph(0)).values
    assert np.allclose(lap.sum(axis=1), 0.0)
    assert np.linalg.eigvalsh(lap).min() > -1e-10


def test_weighted_laplacian_unit_weights_matches_laplacian():
    """Test unit weights reproduce the unweighted Laplacian."""
    g = _knn_graph(1)
    weighted = sparsify.weighted_laplacian(g.n, g.edges, np.ones(g.edge_count))
    assert np.array_equal(weighted, sparsify.laplacian(g).values)


# ============================================================================
# EFFECTIVE RESISTANCE TESTS
# ============================================================================


def test_resistances_on_path():
    """Test every path edge has R = 1 and the endpoints are 2 apart."""
    g = _path(3)
    assert np.allclose(sparsify.effective_resistances(g).r, [1.0, 1.0])
    lp = sparsify.laplacian_pseudoinverse(g)
    assert sparsify.resistance_distance(lp, 0, 2) == pytest.approx(2.0)


def test_bridge_resistance_is_one():
    """Test a bridge has R = 1 while the edges of its cycle share the current."""
    g = Graph(n=5, edges=[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
    table = sparsify.effective_resistances(g)
    r = dict(zip(map(tuple, g.edges.tolist()), table.r))
    assert r[(2, 3)] == pytest.approx(1.0)
    assert r[(3, 4)] == pytest.approx(1.0)
    assert r[(0, 1)] == pytest.approx(2.0 / 3.0)


def test_resistances_on_triangle():
    """Test every triangle edge has R = 2/3."""
    assert np.allclose(sparsify.effective_resistances(_triangle()).r, 2.0 / 3.0)


def test_fosters_theorem():
    """Test the edge resistances of a connected graph sum to N - 1."""
    for seed in range(50):
        g = _knn_graph(seed, n=30, k=3)
        assert sparsify.effective_resistances(g).total() == pytest.approx(g.n - 1, abs=1e-8)


def test_resistances_match_networkx():
    """Test against networkx resistance_distance."""
    g = _knn_graph(3, n=20, k=3)
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edge_set())
    table = sparsify.effective_resistances(g)
    for (u, v), r in list(zip(g.edges.tolist(), table.r))[:10]:
        assert r == pytest.approx(nx.resistance_distance(nxg, u, v), abs=1e-8)


def test_resistances_disconnected_graph():
    """Test a disconnected graph raises ConnectivityError."""
    g = Graph(n=4, edges=[(0, 1), (2, 3)])
    with pytest.raises(ConnectivityError):
        sparsify.effective_resistances(g)
    with pytest.raises(ConnectivityError):
        sparsify.sssa_sparsify(g, SparsifyConfig(sigma=0.5))


# ============================================================================
# SAMPLING TESTS
# ============================================================================


def test_sample_count():
    """Test q = ceil(c N ln N / sigma^2)."""
    assert sparsify.sample_count(50, 0.5, 0.25) == 196
    assert sparsify.sample_count(2, 1.0, 1.0) == 2


def test_sparsify_config_validation():
    """Test sigma outside (0, 1] and nonpositive c are rejected."""
    with pytest.raises(ValueError):
        SparsifyConfig(sigma=0.0)
    with pytest.raises(ValueError):
        SparsifyConfig(sigma=1.5)
    with pytest.raises(ValueError):
        SparsifyConfig(sigma=0.5, oversample_c=0.0)


def test_complete_graph_tiny_sigma_keeps_every_edge():
    """Test K4 at sigma=1/N with heavy oversampling keeps all six edges with weights near 1."""
    result = sparsify.sssa_sparsify(graphs.complete_graph(4), SparsifyConfig(sigma=0.25, oversample_c=10.0))
    assert result.q == 888
    assert result.support_size == 6
    assert result.connected
    assert np.allclose(result.weights, 1.0, atol=0.35)
    assert result.graph.method == GraphMethod.SPARSIFIED


def test_sigma_below_one_over_n_rejected():
    """Test sigma under 1/N raises ParamError instead of drawing a huge sample."""
    k6 = graphs.complete_graph(6)
    with pytest.raises(ParamError):
        sparsify.sssa_sparsify(k6, SparsifyConfig(sigma=1e-10))
    with pytest.raises(ParamError):
        sparsify.sssa_sparsify(k6, SparsifyConfig(sigma=0.1))


def test_sigma_grid_values_are_accepted():
    """Test every grid sigma, including 1/N itself, is a valid input."""
    g = _knn_graph(9, n=20, k=3)
    table = sparsify.effective_resistances(g)
    for sigma in sparsify.sigma_grid(g.n, 5):
        result = sparsify.sssa_sparsify(g, SparsifyConfig(sigma=float(sigma)), table)
        assert result.sigma == pytest.approx(sigma)


def test_tree_sparsifies_to_itself_at_smallest_sigma():
    """Test every tree edge is a bridge, so sigma=1/N keeps the whole tree."""
    g = _path(10)
    assert np.allclose(sparsify.effective_resistances(g).r, 1.0)
    result = sparsify.sssa_sparsify(g, SparsifyConfig(sigma=0.1))
    assert result.graph.edge_set() == g.edge_set()
    assert result.connected


def test_mean_support_shrinks_as_sigma_grows():
    """Test the mean support size over seeds does not grow with sigma."""
    g = _knn_graph(8)
    table = sparsify.effective_resistances(g)
    means = [
        np.mean(
            [
                sparsify.sssa_sparsify(g, SparsifyConfig(sigma=sigma, seed=seed), table).support_size
                for seed in range(20)
            ]
        )
        for sigma in (0.1, 0.4, 1.0)
    ]
    assert means[0] >= means[1] >= means[2]
    assert means[0] > means[2]


def test_support_is_subgraph_with_aligned_weights():
    """Test the support only uses input edges and weights align with them."""
    g = _knn_graph(4)
    result = sparsify.sssa_sparsify(g, SparsifyConfig(sigma=0.8, seed=2))
    assert result.graph.edge_set() <= g.edge_set()
    assert len(result.weights) == result.support_size
    assert (result.weights > 0).all()
    assert result.mean_degree == pytest.approx(2 * result.support_size / g.n)


def test_quadratic_form_audit():
    """Test xᵀL̃x / xᵀLx stays within 1 ± sigma for most random x."""
    g = _knn_graph(5, n=50, k=5)
    lap = sparsify.laplacian(g).values
    result = sparsify.sssa_sparsify(g, SparsifyConfig(sigma=0.5, oversample_c=0.25, seed=0))
    assert result.q == 196
    lap_tilde = sparsify.audit_laplacian(result)
    gen = np.random.default_rng(0)
    inside = 0
    for _ in range(200):
        x = gen.normal(size=g.n)
        ratio = (x @ lap_tilde @ x) / (x @ lap @ x)
        inside += 0.5 <= ratio <= 1.5
    assert inside >= 190


def test_sparsify_determinism():
    """Test identical output per seed and different output across seeds."""
    g = _knn_graph(6)
    a = sparsify.sssa_sparsify(g, SparsifyConfig(sigma=0.6, seed=1))
    b = sparsify.sssa_sparsify(g, SparsifyConfig(sigma=0.6, seed=1))
    c = sparsify.sssa_sparsify(g, SparsifyConfig(sigma=0.6, seed=2))
    assert np.array_equal(a.graph.edges, b.graph.edges)
    assert np.array_equal(a.weights, b.weights)
    same = np.array_equal(a.graph.edges, c.graph.edges) and np.array_equal(a.weights, c.weights)
    assert not same


def test_precomputed_resistances_give_same_result():
    """Test passing the resistance table does not change the draw."""
    g = _knn_graph(7)
    table = sparsify.effective_resistances(g)
    a = sparsify.sssa_sparsify(g, SparsifyConfig(sigma=0.4, seed=3))
    b = sparsify.sssa_sparsify(g, SparsifyConfig(sigma=0.4, seed=3), table)
    assert np.array_equal(a.graph.edges, b.graph.edges)


# ============================================================================
# SIGMA GRID TESTS
# ============================================================================


def test_sigma_grid_endpoints_and_order():
    """Test 1/N to 1, strictly increasing."""
    grid = sparsify.sigma_grid(50, 10)
    assert len(grid) == 10
    assert grid[0] == 1.0 / 50
    assert grid[-1] == 1.0
    assert all(b > a for a, b in zip(grid, grid[1:]))


def test_sigma_grid_invalid():
    """Test grid_size < 2 or n < 2 raises ParamError."""
    with pytest.raises(ParamError):
        sparsify.sigma_grid(50, 1)
    with pytest.raises(ParamError):
        sparsify.sigma_grid(1, 10)
