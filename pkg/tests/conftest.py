import os
import tempfile

# Set environment variables BEFORE any imports that might use settings
os.environ["GEOGRAPH_LOG_LEVEL"] = "WARNING"
os.environ["GEOGRAPH_WORKERS"] = "1"
os.environ["GEOGRAPH_OUTPUT_DIR"] = tempfile.mkdtemp()
os.environ["GEOGRAPH_API_MAX_NODES"] = "200"

import numpy as np
import pytest
from fastapi.testclient import TestClient

from geograph.domain.model import TrainConfig
from geograph.main import app
from geograph.services import data, graphs
from geograph.services.geometry import distance_matrix


@pytest.fixture(scope="function")
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture(scope="function")
def points(rng) -> np.ndarray:
    """30 random points in 4 dimensions (distinct distances almost surely)."""
    return rng.normal(size=(30, 4))


@pytest.fixture(scope="function")
def distances(points):
    return distance_matrix(points)


@pytest.fixture(scope="function")
def factory(distances) -> graphs.GraphFactory:
    return graphs.GraphFactory.from_distances(distances)


def make_two_blobs(n_per_class: int = 40, n_features: int = 10, seed: int = 0):
    """Two well-separated nonnegative blobs: class c loads on its own half of the features."""
    gen = np.random.default_rng(seed)
    half = n_features // 2
    raw = gen.random((2 * n_per_class, n_features)) * 0.05
    raw[:n_per_class, :half] += 1.0
    raw[n_per_class:, half:] += 1.0
    labels = np.repeat([0, 1], n_per_class)
    return raw, labels


@pytest.fixture(scope="function")
def two_blob_dataset():
    raw, labels = make_two_blobs()
    return data.build_dataset(raw, labels, name="blobs", seed=0)


@pytest.fixture(scope="function")
def constructive_dataset():
    """Small, strongly clustered constructive dataset (N=60, F=30, C=3)."""
    return data.generate_constructive(
        n_clusters=3,
        features_per_cluster=10,
        p_in=0.6,
        p_out=0.05,
        samples_per_cluster=20,
        seed=0,
    )


@pytest.fixture(scope="function")
def fast_config() -> TrainConfig:
    return TrainConfig(epochs=80, early_stop_window=20, hidden=8, seed=0)


@pytest.fixture(scope="function")
def client():
    yield TestClient(app)
