import logging

import numpy as np

from geograph.domain.dataset import MembershipMatrix, Split
from geograph.domain.geometry import DistanceMatrix
from geograph.domain.model import KnncResult
from geograph.errors import ParamError

logger = logging.getLogger(__name__)

DEFAULT_KNNC_KS = (1, 2, 4, 8, 16, 32, 64)


def knnc_classify(
    d: DistanceMatrix,
    labels: MembershipMatrix,
    split: Split,
    k: int,
) -> np.ndarray:
    """
    Plurality vote among the k nearest training samples.

    Predictions are aligned with ``split.non_train()``. Equal distances are
    resolved by ascending training index, equal vote counts by the smallest
    class index.

    Raises:
        ParamError: If k is not in [1, |train|]
    """
    train = split.train
    if not 1 <= k <= len(train):
        raise ParamError(f"k={k} outside [1, {len(train)}] (training set size)")
    targets = split.non_train()
    sub = d.values[np.ix_(targets, train)]
    nearest = np.argsort(sub, axis=1, kind="stable")[:, :k]
    votes = labels.labels[train][nearest]

    counts = np.zeros((len(targets), labels.n_classes), dtype=np.int64)
    rows = np.repeat(np.arange(len(targets)), k)
    np.add.at(counts, (rows, votes.ravel()), 1)
    return counts.argmax(axis=1)


def _subset_accuracy(predictions: np.ndarray, targets: np.ndarray, truth: np.ndarray, subset) -> float:
    subset = np.asarray(subset, dtype=np.int64)
    if len(subset) == 0:
        raise ParamError("accuracy over an empty subset")
    positions = np.searchsorted(targets, subset)
    return float(np.mean(predictions[positions] == truth[subset]))


def tune_knnc(
    d: DistanceMatrix,
    labels: MembershipMatrix,
    split: Split,
    ks=DEFAULT_KNNC_KS,
) -> KnncResult:
    """Pick k on the validation set (ties to the smaller k) and report test accuracy."""
    candidates = sorted({int(k) for k in ks if 1 <= k <= len(split.train)})
    if not candidates:
        raise ParamError(f"No admissible k in {list(ks)} for {len(split.train)} training samples")
    targets = split.non_train()
    truth = labels.labels

    best: KnncResult | None = None
    for k in candidates:
        predictions = knnc_classify(d, labels, split, k)
        val_acc = _subset_accuracy(predictions, targets, truth, split.validation)
        if best is None or val_acc > best.val_acc:
            test_acc = _subset_accuracy(predictions, targets, truth, split.test)
            best = KnncResult(k=k, val_acc=val_acc, test_acc=test_acc)
    logger.info("kNNC tuned k=%d val=%.4f test=%.4f", best.k, best.val_acc, best.test_acc)
    return best
