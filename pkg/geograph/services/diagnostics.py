import logging
import math
from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform
from scipy.stats import pearsonr

from geograph.core.random import TSNE, make_rng
from geograph.domain.dataset import FeatureMatrix, MembershipMatrix
from geograph.domain.diagnostics import ClassMasks, Embedding2D, PcaBasis, PcaSpectrum
from geograph.domain.graph import Graph
from geograph.domain.model import NormalizedAdjacency, OutputActivations
from geograph.errors import CorrelationUndefined, DegenerateError, ParamError

logger = logging.getLogger(__name__)

P_STAR_GRID = tuple(round(0.1 * i, 1) for i in range(1, 11))
_RATIO_TOL = 1e-12

TSNE_PERPLEXITY = 30.0
TSNE_ITERATIONS = 1000
TSNE_LEARNING_RATE = 200.0
TSNE_EXAGGERATION = 12.0
TSNE_EXAGGERATION_ITERS = 250
TSNE_MOMENTUM = (0.5, 0.8)
TSNE_MIN_GAIN = 0.01
PERPLEXITY_TOL = 1e-5


# ==========================================
# PCA AND ALIGNMENT
# ==========================================


def pca_spectrum(m) -> PcaSpectrum:
    """Centered SVD of ``m``; the cumulative ratios are reused for every p*."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 2:
        raise ParamError(f"PCA needs an N×p matrix with N ≥ 2, got shape {a.shape}")
    centered = a - a.mean(axis=0, keepdims=True)
    u, s, _ = np.linalg.svd(centered, full_matrices=False)
    variance = s**2
    total = variance.sum()
    if total == 0.0:
        raise DegenerateError("Matrix has zero variance after centering")
    return PcaSpectrum(u=u, cumulative=np.cumsum(variance) / total)


def basis_from_spectrum(spectrum: PcaSpectrum, p_star: float) -> PcaBasis:
    if not 0.0 < p_star <= 1.0:
        raise ParamError(f"p_star={p_star} outside (0, 1]")
    reached = spectrum.cumulative >= p_star - _RATIO_TOL
    r = int(np.argmax(reached)) + 1 if reached.any() else len(spectrum.cumulative)
    return PcaBasis(
        components=spectrum.u[:, :r],
        explained_ratio=float(spectrum.cumulative[r - 1]),
        p_star=p_star,
    )


def pca_basis(m, p_star: float) -> PcaBasis:
    """Orthonormal basis of the smallest set of leading principal directions reaching ``p_star``."""
    return basis_from_spectrum(pca_spectrum(m), p_star)


def subspace_alignment(q_a: np.ndarray, q_y: np.ndarray) -> float:
    """Cosine of the minimal principal angle between two orthonormal bases."""
    s = np.linalg.svd(q_a.T @ q_y, compute_uv=False)
    if s.size == 0:
        return 0.0
    return float(np.clip(s.max(), 0.0, 1.0))


def propagated_features(x, a_hat: NormalizedAdjacency) -> np.ndarray:
    xv = x.values if isinstance(x, FeatureMatrix) else np.asarray(x, dtype=np.float64)
    return np.asarray(a_hat.values @ xv)


def alignment(
    x: FeatureMatrix,
    a_hat: NormalizedAdjacency,
    y: MembershipMatrix,
    p_star: float,
) -> float:
    """S(X, Â, Y) in [0, 1]: alignment of PCA(ÂX, p*) with PCA(Y, p*)."""
    q_a = pca_basis(propagated_features(x, a_hat), p_star).components
    q_y = pca_basis(y.values, p_star).components
    return subspace_alignment(q_a, q_y)


def alignment_profile(
    x: FeatureMatrix,
    a_hat: NormalizedAdjacency,
    y: MembershipMatrix,
    ratios: Sequence[float] = P_STAR_GRID,
    y_spectrum: PcaSpectrum | None = None,
) -> dict[float, float]:
    """Alignment at every ratio, with one SVD per matrix."""
    spec_a = pca_spectrum(propagated_features(x, a_hat))
    spec_y = y_spectrum if y_spectrum is not None else pca_spectrum(y.values)
    return {
        float(p): subspace_alignment(
            basis_from_spectrum(spec_a, p).components,
            basis_from_spectrum(spec_y, p).components,
        )
        for p in ratios
    }


# ==========================================
# CORRELATION AND p* SELECTION
# ==========================================


def _is_constant(v: np.ndarray) -> bool:
    return bool(np.all(v == v[0])) if len(v) else True


def pearson(a, b) -> float:
    """
    Sample Pearson correlation, clipped to [-1, 1].

    Raises:
        ParamError: If lengths differ or are below 3
        CorrelationUndefined: If either vector is constant
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ParamError(f"Vectors differ in length: {len(a)} vs {len(b)}")
    if _is_constant(a) or _is_constant(b):
        raise CorrelationUndefined("Pearson correlation of a constant vector")
    if len(a) < 3:
        raise ParamError(f"Pearson correlation needs at least 3 values, got {len(a)}")
    r = pearsonr(a, b).statistic
    return float(np.clip(r, -1.0, 1.0))


def select_ratio(
    alignments_by_ratio: dict[float, Sequence[float]],
    accuracies: Sequence[float],
) -> tuple[float, float]:
    """Ratio whose alignments correlate best with ``accuracies``; ties to the smaller ratio.

    Ratios whose alignments are constant over the sweep are skipped.
    """
    acc = np.asarray(accuracies, dtype=np.float64)
    if _is_constant(acc):
        raise CorrelationUndefined("Accuracy is constant over the sweep")
    if len(acc) < 3:
        raise ParamError(f"p* selection needs at least 3 sweep points, got {len(acc)}")

    best_ratio, best_corr = None, -math.inf
    for ratio in sorted(alignments_by_ratio):
        try:
            corr = pearson(alignments_by_ratio[ratio], acc)
        except CorrelationUndefined:
            logger.warning("Alignment is constant over the sweep at p*=%.3g; ratio skipped", ratio)
            continue
        if corr > best_corr + _RATIO_TOL:
            best_ratio, best_corr = ratio, corr
    if best_ratio is None:
        raise CorrelationUndefined("Alignment is constant over the sweep at every p*")
    return float(best_ratio), float(best_corr)


def select_p_star(
    sweep: Sequence[tuple[Graph, float]],
    x: FeatureMatrix,
    y: MembershipMatrix,
    grid: Sequence[float] = P_STAR_GRID,
) -> tuple[float, float]:
    """Pick p* maximizing the Pearson correlation between alignment and validation accuracy."""
    from geograph.services.gcn import normalize_adjacency

    accuracies = [acc for _, acc in sweep]
    acc = np.asarray(accuracies, dtype=np.float64)
    if _is_constant(acc):
        raise CorrelationUndefined("Accuracy is constant over the sweep")
    if len(acc) < 3:
        raise ParamError(f"p* selection needs at least 3 sweep points, got {len(acc)}")

    y_spectrum = pca_spectrum(y.values)
    by_ratio: dict[float, list[float]] = {float(p): [] for p in grid}
    for graph, _ in sweep:
        profile = alignment_profile(x, normalize_adjacency(graph), y, grid, y_spectrum)
        for p, s in profile.items():
            by_ratio[p].append(s)
    return select_ratio(by_ratio, accuracies)


# ==========================================
# t-SNE
# ==========================================


def _row_entropy(d_row: np.ndarray, beta: float) -> tuple[float, np.ndarray]:
    shifted = d_row - d_row.min()
    p = np.exp(-shifted * beta)
    total = p.sum()
    h = math.log(total) + beta * float(np.dot(shifted, p)) / total
    return h, p / total


def conditional_probabilities(
    points, perplexity: float = TSNE_PERPLEXITY, tol: float = PERPLEXITY_TOL, max_tries: int = 200
) -> np.ndarray:
    """Row-conditional Gaussian affinities p(j|i) with bandwidths bisected to ``perplexity``.

    The entropy (nats) of every row matches ln(perplexity) within ``tol``.
    """
    x = np.asarray(points, dtype=np.float64)
    n = x.shape[0]
    if not 0 < perplexity < n / 3:
        raise ParamError(f"perplexity={perplexity} must be in (0, N/3) for N={n}")
    d = squareform(pdist(x, metric="sqeuclidean"))
    target = math.log(perplexity)
    p = np.zeros((n, n))
    for i in range(n):
        others = np.r_[0:i, i + 1 : n]
        d_row = d[i, others]
        beta, lo, hi = 1.0, 0.0, math.inf
        h, row = _row_entropy(d_row, beta)
        tries = 0
        while abs(h - target) > tol and tries < max_tries:
            if h > target:
                lo = beta
                beta = beta * 2.0 if hi == math.inf else (beta + hi) / 2.0
            else:
                hi = beta
                beta = (beta + lo) / 2.0
            h, row = _row_entropy(d_row, beta)
            tries += 1
        p[i, others] = row
    return p


def joint_probabilities(points, perplexity: float = TSNE_PERPLEXITY) -> np.ndarray:
    """Symmetrized affinities (P + Pᵀ) / 2N; symmetric, summing to 1."""
    p = conditional_probabilities(points, perplexity)
    p = p + p.T
    return p / p.sum()


def tsne_embed(
    z: OutputActivations | np.ndarray,
    perplexity: float = TSNE_PERPLEXITY,
    seed: int = 0,
    iterations: int = TSNE_ITERATIONS,
) -> Embedding2D:
    """Exact two-dimensional t-SNE of the output activations.

    Gradient descent with gains, momentum 0.5 then 0.8, and early
    exaggeration 12 over the first 250 iterations. Bit-reproducible per seed.
    """
    points = z.z if isinstance(z, OutputActivations) else np.asarray(z, dtype=np.float64)
    n = points.shape[0]
    if iterations < 1:
        raise ParamError("t-SNE needs at least one iteration")
    p = joint_probabilities(points, perplexity)
    p_floor = np.maximum(p, 1e-12)

    rng = make_rng(seed, TSNE)
    y = rng.normal(0.0, 1e-4, size=(n, 2))
    update = np.zeros_like(y)
    gains = np.ones_like(y)

    for it in range(iterations):
        exaggeration = TSNE_EXAGGERATION if it < TSNE_EXAGGERATION_ITERS else 1.0
        momentum = TSNE_MOMENTUM[0] if it < TSNE_EXAGGERATION_ITERS else TSNE_MOMENTUM[1]

        num = 1.0 / (1.0 + squareform(pdist(y, metric="sqeuclidean")))
        np.fill_diagonal(num, 0.0)
        q = np.maximum(num / num.sum(), 1e-12)

        w = (exaggeration * p_floor - q) * num
        grad = 4.0 * (w.sum(axis=1)[:, None] * y - w @ y)

        same_sign = (grad > 0) == (update > 0)
        gains = np.where(same_sign, gains * 0.8, gains + 0.2)
        np.maximum(gains, TSNE_MIN_GAIN, out=gains)
        update = momentum * update - TSNE_LEARNING_RATE * gains * grad
        y = y + update
        y = y - y.mean(axis=0)

    if not np.isfinite(y).all():
        raise DegenerateError("t-SNE produced non-finite coordinates")
    return Embedding2D(coords=y, seed=seed, perplexity=perplexity)


# ==========================================
# CLASS SEPARATION
# ==========================================


def class_masks(y: MembershipMatrix) -> ClassMasks:
    """M^inter = 11ᵀ − YYᵀ, M^intra = YYᵀ − I (int8)."""
    yv = y.values.astype(np.int16)
    same = (yv @ yv.T).astype(np.int8)
    inter = (1 - same).astype(np.int8)
    intra = same.copy()
    np.fill_diagonal(intra, 0)
    return ClassMasks(inter=inter, intra=intra)


def rcs(e: Embedding2D, y: MembershipMatrix) -> float:
    """
    Ratio of class separation: mean inter-class over mean intra-class distance.

    Raises:
        ParamError: Fewer than 2 classes, or a class with a single sample
        DegenerateError: All members of every class coincide
    """
    counts = y.class_counts()
    present = counts[counts > 0]
    if len(present) < 2:
        raise ParamError("RCS needs at least 2 classes")
    if (present < 2).any():
        raise ParamError("RCS needs at least 2 samples in every class")
    if e.n != y.n_samples:
        raise ParamError(f"Embedding has {e.n} points but labels cover {y.n_samples}")

    dist = squareform(pdist(e.coords))
    masks = class_masks(y)
    inter_mean = float((dist * masks.inter).sum() / masks.inter.sum())
    intra_mean = float((dist * masks.intra).sum() / masks.intra.sum())
    if intra_mean == 0.0:
        raise DegenerateError("Intra-class mean distance is zero")
    return inter_mean / intra_mean
