from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _frozen(a: np.ndarray, dtype) -> np.ndarray:
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, slots=True, eq=False)
class FeatureMatrix:
    """L1 row-normalized N×F feature matrix.

    ``zero_rows`` lists the rows that were all-zero before normalization; they
    stay all-zero.
    """

    values: np.ndarray
    zero_rows: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, np.float64))

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, slots=True, eq=False)
class MembershipMatrix:
    """N×C 0-1 class indicator; each row has exactly one 1."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, np.int8))

    @classmethod
    def from_labels(cls, labels, n_classes: int | None = None) -> MembershipMatrix:
        labels = np.asarray(labels, dtype=np.int64)
        c = int(labels.max()) + 1 if n_classes is None else n_classes
        y = np.zeros((labels.shape[0], c), dtype=np.int8)
        y[np.arange(labels.shape[0]), labels] = 1
        return cls(y)

    @property
    def n_classes(self) -> int:
        return self.values.shape[1]

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def labels(self) -> np.ndarray:
        return self.values.argmax(axis=1)

    def class_counts(self) -> np.ndarray:
        return self.values.sum(axis=0).astype(np.int64)


@dataclass(frozen=True, slots=True, eq=False)
class Split:
    """Disjoint train/validation/test index sets covering 0..N-1 (sorted)."""

    train: np.ndarray
    validation: np.ndarray
    test: np.ndarray

    def __post_init__(self):
        for name in ("train", "validation", "test"):
            object.__setattr__(self, name, _frozen(np.sort(getattr(self, name)), np.int64))

    @property
    def n_samples(self) -> int:
        return len(self.train) + len(self.validation) + len(self.test)

    def is_partition_of(self, n: int) -> bool:
        everything = np.concatenate([self.train, self.validation, self.test])
        return len(everything) == n and np.array_equal(np.sort(everything), np.arange(n))

    def non_train(self) -> np.ndarray:
        return np.sort(np.concatenate([self.validation, self.test]))


@dataclass(frozen=True, slots=True, eq=False)
class Dataset:
    features: FeatureMatrix
    labels: MembershipMatrix
    split: Split
    name: str = field(default="dataset")

    @property
    def n_samples(self) -> int:
        return self.features.n_samples
