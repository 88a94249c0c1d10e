from fastapi import APIRouter, Depends, status

from geograph.api.deps import check_node_count, node_limit
from geograph.schemas.dataset import ConstructiveCreate, DatasetSummary
from geograph.services.data import generate_constructive

router = APIRouter(prefix="/datasets", tags=["datasets"])


@router.post("/constructive", response_model=DatasetSummary, status_code=status.HTTP_201_CREATED)
def create_constructive_dataset(params: ConstructiveCreate, limit: int = Depends(node_limit)):
    """
    Generate a constructive block dataset and return its summary.
    - Class-balanced train split drawn from the generator seed
    - The features themselves are not returned; use the CLI to write them
    """
    check_node_count(params.n_clusters * params.samples_per_cluster, limit)
    dataset = generate_constructive(
        n_clusters=params.n_clusters,
        features_per_cluster=params.features_per_cluster,
        p_in=params.p_in,
        p_out=params.p_out,
        samples_per_cluster=params.samples_per_cluster,
        seed=params.seed,
    )
    return DatasetSummary(
        name=dataset.name,
        n_samples=dataset.n_samples,
        n_features=dataset.features.n_features,
        n_classes=dataset.labels.n_classes,
        train=len(dataset.split.train),
        validation=len(dataset.split.validation),
        test=len(dataset.split.test),
        zero_rows=list(dataset.features.zero_rows),
        class_counts=dataset.labels.class_counts().tolist(),
    )
