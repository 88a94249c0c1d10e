import numpy as np
from scipy.spatial.distance import pdist, squareform

from geograph.domain.dataset import FeatureMatrix
from geograph.domain.geometry import DistanceMatrix, NeighborIndex
from geograph.errors import ParamError


def distance_matrix(features: FeatureMatrix) -> DistanceMatrix:
    """Pairwise Euclidean distances; each pair is computed once, so D is exactly symmetric."""
    x = features.values if isinstance(features, FeatureMatrix) else np.asarray(features, dtype=np.float64)
    if x.shape[0] < 2:
        raise ParamError(f"Need at least 2 samples for a distance matrix, got {x.shape[0]}")
    return DistanceMatrix(values=squareform(pdist(x, metric="euclidean")))


def neighbor_index(d: DistanceMatrix) -> NeighborIndex:
    """Sort every row by distance with node-index tie-break, excluding the node itself."""
    values = d.values
    n = values.shape[0]
    keyed = values.copy()
    # self sorts first even when other nodes sit at distance 0
    np.fill_diagonal(keyed, -1.0)
    # stable sort keeps ascending node index among equal distances
    full = np.argsort(keyed, axis=1, kind="stable")
    order = np.ascontiguousarray(full[:, 1:])
    kth = np.zeros((n, n), dtype=np.float64)
    kth[:, 1:] = np.take_along_axis(values, order, axis=1)
    order.setflags(write=False)
    kth.setflags(write=False)
    return NeighborIndex(order=order, kth_distance=kth)
