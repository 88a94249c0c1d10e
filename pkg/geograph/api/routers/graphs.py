import numpy as np
from fastapi import APIRouter, Depends, Query

from geograph.api.deps import check_node_count, get_settings, node_limit
from geograph.core.config import Settings
from geograph.domain.graph import Graph as GraphModel
from geograph.domain.graph import GraphMethod
from geograph.domain.sparsify import SparsifyConfig
from geograph.errors import ParamError
from geograph.schemas.graph import DensityGridResponse, Graph, GraphBuild, SparsifyRequest, SparsifyResponse
from geograph.services import graphs as graph_service
from geograph.services.data import l1_normalize
from geograph.services.geometry import distance_matrix
from geograph.services.sparsify import sssa_sparsify

router = APIRouter(prefix="/graphs", tags=["graphs"])


def _to_schema(g: GraphModel) -> Graph:
    return Graph(
        method=g.method,
        parameter=g.parameter,
        n=g.n,
        edges=[(int(u), int(v)) for u, v in g.edges],
        edge_count=g.edge_count,
        density=graph_service.edge_density(g),
        mean_degree=graph_service.mean_degree(g),
        connected=g.is_connected(),
    )


@router.post("", response_model=Graph)
def build_graph(body: GraphBuild, limit: int = Depends(node_limit)):
    """
    Build a geometric graph (MST backbone included) from inline raw features.
    """
    check_node_count(len(body.features), limit)
    method = GraphMethod(body.method)
    param = body.param
    if method.uses_integer_parameter:
        if param is None or float(param) != int(param):
            raise ParamError(f"{method.value} needs an integer k")
        param = int(param)
    elif method == GraphMethod.RMST and param is None:
        raise ParamError("rmst needs gamma")

    features = l1_normalize(np.asarray(body.features, dtype=np.float64))
    factory = graph_service.GraphFactory.from_distances(
        distance_matrix(features), delta=body.delta, k_local=body.k_local
    )
    return _to_schema(factory.build(method, param))


@router.get("/density-grid", response_model=DensityGridResponse)
def get_density_grid(
    method: GraphMethod,
    n: int = Query(..., ge=2),
    grid_size: int = Query(50, ge=2, le=50),
):
    """
    Sparse-to-dense parameter grid for a construction on n nodes.
    """
    grid = graph_service.density_grid(method, n, grid_size)
    return DensityGridResponse(method=method, n=n, values=[float(v) for v in grid])


@router.post("/sparsify", response_model=SparsifyResponse)
def sparsify_graph(
    body: SparsifyRequest,
    limit: int = Depends(node_limit),
    current: Settings = Depends(get_settings),
):
    """
    Effective-resistance sparsification of an inline edge list.
    - Disconnected input: 409
    - The returned support may be disconnected
    """
    check_node_count(body.n, limit)
    try:
        graph = GraphModel(n=body.n, edges=np.asarray(body.edges, dtype=np.int64))
    except ValueError as e:
        raise ParamError(str(e)) from e
    cfg = SparsifyConfig(
        sigma=body.sigma,
        oversample_c=body.oversample_c if body.oversample_c is not None else current.oversample_c,
        seed=body.seed,
    )
    result = sssa_sparsify(graph, cfg)
    return SparsifyResponse(
        graph=_to_schema(result.graph),
        weights=[float(w) for w in result.weights],
        q=result.q,
        sigma=result.sigma,
        support_size=result.support_size,
        connected=result.connected,
    )
