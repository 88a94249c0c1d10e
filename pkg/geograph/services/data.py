import logging
import math
from pathlib import Path

import numpy as np

import geograph.repositories.dataset as dataset_repo
from geograph.core.random import GENERATOR, SPLIT, make_rng
from geograph.domain.dataset import Dataset, FeatureMatrix, MembershipMatrix, Split
from geograph.errors import FormatError, ParamError

logger = logging.getLogger(__name__)

TRAIN_FRAC = 0.05
VAL_FRAC = 0.10

# Rows whose L1 norm is already 1 within this tolerance are left untouched,
# which makes normalization idempotent (and save/load bit-exact).
_NORMALIZED_TOL = 1e-12


def l1_normalize(raw) -> FeatureMatrix:
    """Divide every nonzero row by its L1 norm; all-zero rows stay zero and are reported."""
    x = np.asarray(raw, dtype=np.float64)
    if x.ndim != 2:
        raise FormatError(f"Feature matrix must be 2-D, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise FormatError("Feature matrix contains NaN or Inf")

    norms = np.abs(x).sum(axis=1)
    zero = norms == 0
    scale = np.where(zero | (np.abs(norms - 1.0) <= _NORMALIZED_TOL), 1.0, norms)
    values = x / scale[:, None]

    zero_rows = tuple(int(i) for i in np.flatnonzero(zero))
    if zero_rows:
        logger.warning(
            "%d all-zero feature rows kept as zero vectors (first: %s)",
            len(zero_rows),
            zero_rows[:5],
        )
    return FeatureMatrix(values=values, zero_rows=zero_rows)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _per_class_quota(counts: np.ndarray, n_train: int) -> np.ndarray:
    """Spread n_train evenly across classes, remainders to the lowest class ids.

    A class never receives more than its size; any shortfall moves on to the
    next classes with spare capacity, again in ascending id order.
    """
    n_classes = len(counts)
    base, rem = divmod(n_train, n_classes)
    quota = np.full(n_classes, base, dtype=np.int64)
    quota[:rem] += 1
    quota = np.minimum(quota, counts)
    shortfall = n_train - int(quota.sum())
    while shortfall > 0:
        spare = np.flatnonzero(quota < counts)
        if len(spare) == 0:
            break
        # lowest current quota first keeps per-class counts within one of each other
        for c in sorted(spare, key=lambda c: (quota[c], c)):
            if shortfall == 0:
                break
            quota[c] += 1
            shortfall -= 1
    return quota


def stratified_split(
    labels: MembershipMatrix,
    train_frac: float = TRAIN_FRAC,
    val_frac: float = VAL_FRAC,
    seed: int = 0,
) -> Split:
    """Class-balanced train set, random validation set, rest test; deterministic per seed."""
    if train_frac <= 0 or val_frac < 0 or train_frac + val_frac >= 1:
        raise ParamError(
            f"Invalid split fractions train={train_frac}, validation={val_frac}"
        )
    counts = labels.class_counts()
    empty = np.flatnonzero(counts == 0)
    if len(empty):
        raise ParamError(f"Classes without samples: {empty.tolist()}")

    n = labels.n_samples
    n_train = _round_half_up(train_frac * n)
    n_val = _round_half_up(val_frac * n)
    quota = _per_class_quota(counts, n_train)

    rng = make_rng(seed, SPLIT)
    y = labels.labels
    train_parts = []
    for c in range(labels.n_classes):
        members = np.flatnonzero(y == c)
        train_parts.append(rng.permutation(members)[: quota[c]])
    train = np.concatenate(train_parts) if train_parts else np.zeros(0, dtype=np.int64)

    rest = np.setdiff1d(np.arange(n), train)
    rest = rng.permutation(rest)
    validation = rest[:n_val]
    test = rest[n_val:]
    return Split(train=train, validation=validation, test=test)


def build_dataset(
    raw_features,
    labels,
    name: str,
    split: Split | None = None,
    seed: int = 0,
    n_classes: int | None = None,
) -> Dataset:
    """Validate and assemble a Dataset from in-memory arrays."""
    raw = np.asarray(raw_features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if raw.ndim != 2:
        raise FormatError(f"Feature matrix must be 2-D, got shape {raw.shape}")
    if labels.shape[0] != raw.shape[0]:
        raise FormatError(
            f"Dimension mismatch: {raw.shape[0]} feature rows but {labels.shape[0]} labels"
        )
    if labels.size == 0:
        raise FormatError("Empty label vector")
    c = int(labels.max()) + 1 if n_classes is None else n_classes
    bad = np.flatnonzero((labels < 0) | (labels >= c))
    if len(bad):
        raise FormatError(
            f"Label {int(labels[bad[0]])} at row {int(bad[0])} outside [0, {c})"
        )

    features = l1_normalize(raw)
    membership = MembershipMatrix.from_labels(labels, n_classes=c)
    if split is None:
        split = stratified_split(membership, TRAIN_FRAC, VAL_FRAC, seed)
    elif not split.is_partition_of(raw.shape[0]):
        raise FormatError("Split indices must partition 0..N-1")
    return Dataset(features=features, labels=membership, split=split, name=name)


def load_dataset(
    features_path: str | Path,
    labels_path: str | Path,
    split_path: str | Path | None = None,
    seed: int = 0,
    header: bool = False,
    n_classes: int | None = None,
    name: str | None = None,
) -> Dataset:
    raw = dataset_repo.read_features_csv(features_path, header=header)
    labels = dataset_repo.read_labels_csv(labels_path)
    split = dataset_repo.read_split_json(split_path) if split_path else None
    dataset = build_dataset(
        raw,
        labels,
        name=name or Path(features_path).stem,
        split=split,
        seed=seed,
        n_classes=n_classes,
    )
    logger.info(
        "Loaded %s: N=%d F=%d C=%d train/val/test=%d/%d/%d",
        dataset.name,
        dataset.features.n_samples,
        dataset.features.n_features,
        dataset.labels.n_classes,
        len(dataset.split.train),
        len(dataset.split.validation),
        len(dataset.split.test),
    )
    return dataset


def save_dataset(dataset: Dataset, out_dir: str | Path) -> dict[str, Path]:
    out_dir = Path(out_dir)
    paths = {
        "features": out_dir / "features.csv",
        "labels": out_dir / "labels.csv",
        "split": out_dir / "split.json",
    }
    dataset_repo.write_features_csv(paths["features"], dataset.features.values)
    dataset_repo.write_labels_csv(paths["labels"], dataset.labels.labels)
    dataset_repo.write_split_json(paths["split"], dataset.split)
    return paths


def constructive_features(
    n_clusters: int,
    features_per_cluster: int,
    p_in: float,
    p_out: float,
    samples_per_cluster: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Binary block feature matrix and cluster labels before normalization.

    A sample of cluster c owns each feature of block c with probability p_in
    and each feature of any other block with probability p_out.
    """
    for name, p in (("p_in", p_in), ("p_out", p_out)):
        if not 0.0 <= p <= 1.0:
            raise ParamError(f"{name}={p} outside [0, 1]")
    if p_out > p_in:
        raise ParamError(f"p_out={p_out} must not exceed p_in={p_in}")
    if min(n_clusters, features_per_cluster, samples_per_cluster) < 1:
        raise ParamError("cluster, feature and sample counts must be positive")

    labels = np.repeat(np.arange(n_clusters), samples_per_cluster)
    blocks = np.repeat(np.arange(n_clusters), features_per_cluster)
    probs = np.where(labels[:, None] == blocks[None, :], p_in, p_out)
    rng = make_rng(seed, GENERATOR)
    raw = (rng.random(probs.shape) < probs).astype(np.float64)
    return raw, labels


def generate_constructive(
    n_clusters: int = 10,
    features_per_cluster: int = 50,
    p_in: float = 0.07,
    p_out: float = 0.007,
    samples_per_cluster: int = 100,
    seed: int = 0,
) -> Dataset:
    raw, labels = constructive_features(
        n_clusters, features_per_cluster, p_in, p_out, samples_per_cluster, seed
    )
    return build_dataset(raw, labels, name="constructive", seed=seed, n_classes=n_clusters)
