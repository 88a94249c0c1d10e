from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True, slots=True, eq=False)
class NormalizedAdjacency:
    """Propagation operator D̃^{-1/2}(A + I)D̃^{-1/2}.

    ``graph`` is None for the no-graph marker, in which case ``values`` is the
    identity and the GCN reduces to an MLP.
    """

    values: sp.csr_array
    graph: object | None = None

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def is_identity(self) -> bool:
        return self.graph is None

    def dense(self) -> np.ndarray:
        return self.values.toarray()


@dataclass(frozen=True, slots=True)
class TrainConfig:
    epochs: int = 2000
    learning_rate: float = 0.01
    dropout: float = 0.5
    l2: float = 5e-4
    early_stop_window: int = 200
    hidden: int = 16
    reduction: Literal["sum", "mean"] = "sum"
    seed: int = 0

    def __post_init__(self):
        if self.epochs <= 0 or self.early_stop_window <= 0 or self.hidden <= 0:
            raise ValueError("epochs, early_stop_window and hidden must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")
        if self.l2 < 0:
            raise ValueError("l2 must be non-negative")
        if self.reduction not in ("sum", "mean"):
            raise ValueError("reduction must be 'sum' or 'mean'")


@dataclass(slots=True, eq=False)
class AdamState:
    """First/second moment accumulators for (W⁰, W¹) and the step counter."""

    m: list[np.ndarray]
    v: list[np.ndarray]
    step: int = 0


@dataclass(slots=True, eq=False)
class GcnModel:
    """Two-layer GCN weights W⁰ (F×H), W¹ (H×C) and optimizer state."""

    w0: np.ndarray
    w1: np.ndarray
    optimizer: AdamState | None = None

    @property
    def hidden(self) -> int:
        return self.w0.shape[1]

    @property
    def n_features(self) -> int:
        return self.w0.shape[0]

    @property
    def n_classes(self) -> int:
        return self.w1.shape[1]

    def copy_weights(self) -> tuple[np.ndarray, np.ndarray]:
        return self.w0.copy(), self.w1.copy()


@dataclass(frozen=True, slots=True, eq=False)
class OutputActivations:
    """Row-stochastic N×C matrix of class probabilities."""

    z: np.ndarray

    def predictions(self) -> np.ndarray:
        # argmax returns the first maximum, i.e. the lowest class index on ties
        return self.z.argmax(axis=1)


@dataclass(slots=True, eq=False)
class ForwardCache:
    """Intermediates of one forward pass, consumed by backward()."""

    x_in: np.ndarray
    hidden_pre: np.ndarray
    hidden_in: np.ndarray
    hidden_mask: np.ndarray | None
    keep: float
    z: np.ndarray


@dataclass(frozen=True, slots=True)
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: float
    train_acc: float
    val_acc: float


@dataclass(slots=True, eq=False)
class TrainResult:
    model: GcnModel
    activations: OutputActivations
    history: list[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    stopped_epoch: int = 0


@dataclass(frozen=True, slots=True)
class KnncResult:
    """k-nearest-neighbor classifier tuned on the validation set."""

    k: int
    val_acc: float
    test_acc: float
