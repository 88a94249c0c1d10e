import logging
import math

import numpy as np
import scipy.sparse as sp

from geograph.core.random import DROPOUT, WEIGHTS, make_rng
from geograph.domain.dataset import Dataset, FeatureMatrix, MembershipMatrix
from geograph.domain.graph import Graph
from geograph.domain.model import (
    AdamState,
    EpochRecord,
    ForwardCache,
    GcnModel,
    NormalizedAdjacency,
    OutputActivations,
    TrainConfig,
    TrainResult,
)
from geograph.errors import ParamError, ShapeError, TrainingError

logger = logging.getLogger(__name__)

LOG_EPS = 1e-12
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


def normalize_adjacency(g: Graph | None, n: int | None = None) -> NormalizedAdjacency:
    """D̃^{-1/2}(A + I)D̃^{-1/2} with D̃_ii = 1 + deg(i); ``None`` (no graph) gives the n×n identity."""
    if g is None:
        if n is None:
            raise ParamError("The no-graph operator needs the node count n")
        return identity_adjacency(n)
    n = g.n
    dinv = 1.0 / np.sqrt(1.0 + g.degrees())
    diag = np.arange(n)
    u, v = g.edges[:, 0], g.edges[:, 1]
    rows = np.concatenate([u, v, diag])
    cols = np.concatenate([v, u, diag])
    data = dinv[rows] * dinv[cols]
    return NormalizedAdjacency(values=sp.csr_array((data, (rows, cols)), shape=(n, n)), graph=g)


def identity_adjacency(n: int) -> NormalizedAdjacency:
    """The no-graph operator: with Â = I the GCN is a two-layer perceptron."""
    diag = np.arange(n)
    return NormalizedAdjacency(
        values=sp.csr_array((np.ones(n), (diag, diag)), shape=(n, n)), graph=None
    )


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def init_model(n_features: int, n_classes: int, hidden: int, seed: int) -> GcnModel:
    rng = make_rng(seed, WEIGHTS)
    w0 = glorot_uniform(rng, n_features, hidden)
    w1 = glorot_uniform(rng, hidden, n_classes)
    state = AdamState(
        m=[np.zeros_like(w0), np.zeros_like(w1)],
        v=[np.zeros_like(w0), np.zeros_like(w1)],
    )
    return GcnModel(w0=w0, w1=w1, optimizer=state)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _features(x) -> np.ndarray:
    return x.values if isinstance(x, FeatureMatrix) else np.asarray(x, dtype=np.float64)


def _dropout_mask(rng: np.random.Generator, shape, keep: float) -> np.ndarray:
    return rng.random(shape) < keep


def forward(
    model: GcnModel,
    x: FeatureMatrix | np.ndarray,
    a_hat: NormalizedAdjacency,
    training: bool = False,
    dropout: float = 0.0,
    rng: np.random.Generator | None = None,
) -> tuple[OutputActivations, ForwardCache]:
    """Z = softmax(Â · ReLU(Â · X · W⁰) · W¹).

    With ``training`` set, inverted dropout (scaled by 1/keep) is applied to
    the input features and to the hidden activations.
    """
    xv = _features(x)
    if xv.shape[0] != a_hat.n:
        raise ShapeError(f"X has {xv.shape[0]} rows but Â is {a_hat.n}×{a_hat.n}")
    if xv.shape[1] != model.n_features:
        raise ShapeError(f"X has {xv.shape[1]} columns but W0 expects {model.n_features}")

    keep = 1.0 - dropout if training else 1.0
    use_dropout = training and dropout > 0.0
    if use_dropout and rng is None:
        rng = make_rng(0, DROPOUT)

    x_in = xv
    if use_dropout:
        x_in = xv * _dropout_mask(rng, xv.shape, keep) / keep

    a = a_hat.values
    hidden_pre = a @ (x_in @ model.w0)
    hidden = np.maximum(hidden_pre, 0.0)

    hidden_mask = None
    hidden_in = hidden
    if use_dropout:
        hidden_mask = _dropout_mask(rng, hidden.shape, keep)
        hidden_in = hidden * hidden_mask / keep

    logits = a @ (hidden_in @ model.w1)
    z = softmax(logits)
    cache = ForwardCache(
        x_in=x_in,
        hidden_pre=hidden_pre,
        hidden_in=hidden_in,
        hidden_mask=hidden_mask,
        keep=keep,
        z=z,
    )
    return OutputActivations(z=z), cache


def loss(
    z: OutputActivations,
    y: MembershipMatrix,
    labeled,
    model: GcnModel,
    l2: float,
    reduction: str = "sum",
) -> float:
    """Cross-entropy over the labeled rows plus l2/2 · ‖W⁰‖²_F.

    Probabilities are clamped at 1e-12 before the logarithm.
    """
    idx = np.asarray(labeled, dtype=np.int64)
    zl = np.maximum(z.z[idx], LOG_EPS)
    ce = -float(np.sum(y.values[idx] * np.log(zl)))
    if reduction == "mean" and len(idx):
        ce /= len(idx)
    return ce + 0.5 * l2 * float(np.sum(model.w0**2))


def backward(
    cache: ForwardCache,
    a_hat: NormalizedAdjacency,
    model: GcnModel,
    y: MembershipMatrix,
    labeled,
    l2: float,
    reduction: str = "sum",
) -> tuple[np.ndarray, np.ndarray]:
    """Analytic gradients of :func:`loss` w.r.t. (W⁰, W¹) under the cached dropout masks."""
    idx = np.asarray(labeled, dtype=np.int64)
    dlogits = np.zeros_like(cache.z)
    dlogits[idx] = cache.z[idx] - y.values[idx]
    if reduction == "mean" and len(idx):
        dlogits /= len(idx)

    a = a_hat.values
    # Â is symmetric, so Âᵀ = Â
    g = a @ dlogits
    grad_w1 = cache.hidden_in.T @ g

    d_hidden = g @ model.w1.T
    if cache.hidden_mask is not None:
        d_hidden = d_hidden * cache.hidden_mask / cache.keep
    d_hidden = d_hidden * (cache.hidden_pre > 0)

    grad_w0 = cache.x_in.T @ (a @ d_hidden) + l2 * model.w0
    return grad_w0, grad_w1


def adam_step(
    model: GcnModel,
    grads: tuple[np.ndarray, np.ndarray],
    learning_rate: float,
) -> None:
    """One bias-corrected adaptive-moment update, in place."""
    state = model.optimizer
    if state is None:
        state = AdamState(
            m=[np.zeros_like(model.w0), np.zeros_like(model.w1)],
            v=[np.zeros_like(model.w0), np.zeros_like(model.w1)],
        )
        model.optimizer = state
    state.step += 1
    t = state.step
    weights = [model.w0, model.w1]
    for i, (w, grad) in enumerate(zip(weights, grads)):
        state.m[i] = ADAM_BETA1 * state.m[i] + (1 - ADAM_BETA1) * grad
        state.v[i] = ADAM_BETA2 * state.v[i] + (1 - ADAM_BETA2) * grad**2
        m_hat = state.m[i] / (1 - ADAM_BETA1**t)
        v_hat = state.v[i] / (1 - ADAM_BETA2**t)
        w -= learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS)


def accuracy(z: OutputActivations | np.ndarray, y: MembershipMatrix, subset) -> float:
    """Fraction of ``subset`` whose argmax class (lowest index on ties) is the true class.

    Raises:
        ParamError: If subset is empty
    """
    idx = np.asarray(subset, dtype=np.int64)
    if len(idx) == 0:
        raise ParamError("accuracy over an empty subset")
    probs = z.z if isinstance(z, OutputActivations) else np.asarray(z)
    predicted = probs[idx].argmax(axis=1)
    return float(np.mean(predicted == y.labels[idx]))


def train(dataset: Dataset, a_hat: NormalizedAdjacency, cfg: TrainConfig) -> TrainResult:
    """
    Full-batch training with early stopping on validation loss.

    - Weights start from a Glorot-uniform draw of the seed's weight stream
    - Dropout masks come from the seed's dropout stream
    - Training stops after ``early_stop_window`` epochs without a new best
      validation loss; the best epoch's weights are restored

    Raises:
        ShapeError: If Â does not match the dataset size
        TrainingError: If the loss becomes NaN or infinite
    """
    x = dataset.features.values
    y = dataset.labels
    split = dataset.split
    if a_hat.n != dataset.n_samples:
        raise ShapeError(f"Â is {a_hat.n}×{a_hat.n} but the dataset has {dataset.n_samples} samples")

    monitor = split.validation
    if len(monitor) == 0:
        logger.warning("Empty validation set; early stopping monitors the training loss")
        monitor = split.train

    model = init_model(x.shape[1], y.n_classes, cfg.hidden, cfg.seed)
    drop_rng = make_rng(cfg.seed, DROPOUT)

    history: list[EpochRecord] = []
    best_loss = math.inf
    best_weights = model.copy_weights()
    best_epoch = 0
    since_best = 0
    epoch = 0
    for epoch in range(cfg.epochs):
        act, cache = forward(model, x, a_hat, training=True, dropout=cfg.dropout, rng=drop_rng)
        train_loss = loss(act, y, split.train, model, cfg.l2, cfg.reduction)
        if not math.isfinite(train_loss):
            raise TrainingError(f"Training loss diverged at epoch {epoch}", epoch=epoch)

        grads = backward(cache, a_hat, model, y, split.train, cfg.l2, cfg.reduction)
        adam_step(model, grads, cfg.learning_rate)

        evaluated, _ = forward(model, x, a_hat, training=False)
        val_loss = loss(evaluated, y, monitor, model, cfg.l2, cfg.reduction)
        if not math.isfinite(val_loss):
            raise TrainingError(f"Validation loss diverged at epoch {epoch}", epoch=epoch)
        history.append(
            EpochRecord(
                epoch=epoch,
                train_loss=train_loss,
                val_loss=val_loss,
                train_acc=accuracy(evaluated, y, split.train),
                val_acc=accuracy(evaluated, y, monitor),
            )
        )

        if val_loss < best_loss:
            best_loss = val_loss
            best_weights = model.copy_weights()
            best_epoch = epoch
            since_best = 0
        else:
            since_best += 1
            if since_best >= cfg.early_stop_window:
                logger.debug(
                    "Early stop at epoch %d (best %d, val loss %.6f)", epoch, best_epoch, best_loss
                )
                break

    model.w0, model.w1 = best_weights
    activations, _ = forward(model, x, a_hat, training=False)
    return TrainResult(
        model=model,
        activations=activations,
        history=history,
        best_epoch=best_epoch,
        stopped_epoch=epoch,
    )
