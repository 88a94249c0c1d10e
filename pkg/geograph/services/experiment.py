import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

import geograph.repositories.graph as graph_repo
import geograph.repositories.report as report_repo
from geograph.core.config import settings
from geograph.domain.dataset import Dataset
from geograph.domain.diagnostics import Embedding2D
from geograph.domain.graph import Graph, GraphMethod
from geograph.domain.model import NormalizedAdjacency, TrainConfig
from geograph.domain.selection import SelectionPolicy
from geograph.domain.sparsify import SparsifyConfig
from geograph.errors import (
    CorrelationUndefined,
    DegenerateError,
    GeographError,
    ParamError,
    TrainingError,
)
from geograph.schemas.config import DatasetSection, ExperimentConfig
from geograph.schemas.graph import GraphSidecar
from geograph.schemas.report import (
    ExperimentReport,
    MethodResult,
    SparsificationResult,
    SweepRecord,
    ratio_key,
)
from geograph.services import baselines, data, diagnostics, gcn, graphs, sparsify
from geograph.services.geometry import distance_matrix

logger = logging.getLogger(__name__)

DEFAULT_SEEDS = tuple(range(10))


@dataclass(frozen=True, slots=True)
class DiagnosticsOptions:
    enabled: bool = True
    p_star_grid: tuple[float, ...] = diagnostics.P_STAR_GRID
    perplexity: float = diagnostics.TSNE_PERPLEXITY
    tsne_iterations: int = diagnostics.TSNE_ITERATIONS


@dataclass(slots=True)
class RunOutcome:
    seed: int
    val_acc: float
    test_acc: float
    rcs: float | None = None
    coords: np.ndarray | None = None


@dataclass(slots=True)
class PointResult:
    """One evaluated graph: its aggregate record, the graph and one embedding."""

    record: SweepRecord
    graph: Graph | None
    embedding: Embedding2D | None = None


@dataclass(slots=True)
class ExperimentArtifacts:
    """Large outputs that go to files next to report.json rather than into it."""

    graphs: dict[str, tuple[Graph, dict]] = field(default_factory=dict)
    embeddings: dict[str, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)


# ==========================================
# SEEDED RUNS
# ==========================================

_WORKER_DATASET: Dataset | None = None


def _init_worker(dataset: Dataset, log_level: str) -> None:
    global _WORKER_DATASET
    _WORKER_DATASET = dataset
    logging.basicConfig(level=log_level)


def _train_and_score(
    dataset: Dataset,
    a_hat: NormalizedAdjacency,
    cfg: TrainConfig,
    diag: DiagnosticsOptions,
) -> RunOutcome:
    result = gcn.train(dataset, a_hat, cfg)
    outcome = RunOutcome(
        seed=cfg.seed,
        val_acc=gcn.accuracy(result.activations, dataset.labels, dataset.split.validation),
        test_acc=gcn.accuracy(result.activations, dataset.labels, dataset.split.test),
    )
    if diag.enabled:
        try:
            emb = diagnostics.tsne_embed(
                result.activations, diag.perplexity, seed=cfg.seed, iterations=diag.tsne_iterations
            )
            outcome.rcs = diagnostics.rcs(emb, dataset.labels)
            outcome.coords = emb.coords
        except (ParamError, DegenerateError) as e:
            logger.warning("Class separation skipped for seed %d: %s", cfg.seed, e)
    return outcome


def _run_task(task) -> RunOutcome | GeographError:
    a_hat, cfg, diag = task
    try:
        return _train_and_score(_WORKER_DATASET, a_hat, cfg, diag)
    except GeographError as e:
        return e


class SeedPool:
    """Trains one model per seed, in-process or on a process pool.

    Results always come back in seed order, whatever the worker count.
    """

    def __init__(self, dataset: Dataset, workers: int = 1):
        self.dataset = dataset
        self.workers = max(1, workers)
        self._executor: ProcessPoolExecutor | None = None

    def __enter__(self) -> "SeedPool":
        if self.workers > 1:
            self._executor = ProcessPoolExecutor(
                max_workers=self.workers,
                initializer=_init_worker,
                initargs=(self.dataset, settings.log_level),
            )
        return self

    def __exit__(self, *exc) -> None:
        if self._executor is not None:
            self._executor.shutdown()
            self._executor = None

    def run(
        self,
        a_hat: NormalizedAdjacency,
        cfg: TrainConfig,
        seeds: Sequence[int],
        diag: DiagnosticsOptions,
    ) -> list[RunOutcome | GeographError]:
        tasks = [(a_hat, replace(cfg, seed=int(s)), diag) for s in seeds]
        if self._executor is not None:
            return list(self._executor.map(_run_task, tasks))
        outcomes = []
        for a, c, d in tasks:
            try:
                outcomes.append(_train_and_score(self.dataset, a, c, d))
            except GeographError as e:
                outcomes.append(e)
        return outcomes


def _std(values: np.ndarray) -> float:
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def evaluate_graph(
    pool: SeedPool,
    graph: Graph | None,
    label: str,
    param,
    cfg: TrainConfig,
    seeds: Sequence[int],
    diag: DiagnosticsOptions = DiagnosticsOptions(enabled=False),
    extra: dict | None = None,
) -> PointResult | None:
    """Train every seed on ``graph`` (None: no graph) and aggregate.

    Failed runs are logged and left out of the means. Returns None when every
    run failed.
    """
    dataset = pool.dataset
    n = dataset.n_samples
    a_hat = gcn.normalize_adjacency(graph, n=n)
    outcomes = pool.run(a_hat, cfg, seeds, diag)

    ok = [o for o in outcomes if isinstance(o, RunOutcome)]
    for o in outcomes:
        if isinstance(o, TrainingError):
            logger.warning("%s param=%s: run failed at epoch %s: %s", label, param, o.epoch, o)
        elif isinstance(o, GeographError):
            logger.warning("%s param=%s: run failed: %s", label, param, o)
    if not ok:
        logger.warning("%s param=%s: all %d runs failed; point skipped", label, param, len(outcomes))
        return None

    alignments: dict[str, float] = {}
    if diag.enabled:
        try:
            profile = diagnostics.alignment_profile(
                dataset.features, a_hat, dataset.labels, diag.p_star_grid
            )
            alignments = {ratio_key(p): s for p, s in profile.items()}
        except DegenerateError as e:
            logger.warning("%s param=%s: alignment undefined: %s", label, param, e)

    val = np.array([o.val_acc for o in ok])
    test = np.array([o.test_acc for o in ok])
    rcs_values = np.array([o.rcs for o in ok if o.rcs is not None])
    record = SweepRecord(
        method=label,
        param=param,
        edge_density=graphs.edge_density(graph) if graph is not None else 0.0,
        mean_degree=graphs.mean_degree(graph) if graph is not None else 0.0,
        edge_count=graph.edge_count if graph is not None else 0,
        val_acc_mean=float(val.mean()),
        val_acc_std=_std(val),
        test_acc_mean=float(test.mean()),
        test_acc_std=_std(test),
        alignments=alignments,
        rcs_mean=float(rcs_values.mean()) if len(rcs_values) else None,
        rcs_std=_std(rcs_values) if len(rcs_values) else None,
        runs=len(ok),
        failed_runs=len(outcomes) - len(ok),
        **(extra or {}),
    )
    embedding = None
    first = next((o for o in ok if o.coords is not None), None)
    if first is not None:
        embedding = Embedding2D(coords=first.coords, seed=first.seed, perplexity=diag.perplexity)
    return PointResult(record=record, graph=graph, embedding=embedding)


# ==========================================
# SWEEPS AND SELECTION
# ==========================================


def select_optimum(records: Sequence[SweepRecord], policy: SelectionPolicy = SelectionPolicy()) -> SweepRecord:
    """
    Highest mean validation accuracy; ties go to the sparser graph.

    Raises:
        ParamError: If records is empty
    """
    if not records:
        raise ParamError("Cannot select an optimum from an empty sweep")
    return policy.best(records)


def densification_points(
    pool: SeedPool,
    factory: graphs.GraphFactory,
    method: GraphMethod,
    grid,
    cfg: TrainConfig,
    seeds: Sequence[int],
    diag: DiagnosticsOptions,
) -> list[PointResult]:
    method = GraphMethod(method)
    points = []
    for i, param in enumerate(grid, start=1):
        graph = factory.build(method, param)
        logger.info(
            "%s [%d/%d] param=%s density=%.5f edges=%d",
            method.value,
            i,
            len(grid),
            param,
            graphs.edge_density(graph),
            graph.edge_count,
        )
        point = evaluate_graph(pool, graph, method.value, param, cfg, seeds, diag)
        if point is not None:
            points.append(point)
    return points


def run_densification(
    dataset: Dataset,
    method: GraphMethod | str,
    grid,
    cfg: TrainConfig,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    diag: DiagnosticsOptions = DiagnosticsOptions(),
    workers: int = 1,
    factory: graphs.GraphFactory | None = None,
) -> list[SweepRecord]:
    """Build the graph at every grid point and aggregate seeded GCN runs on it."""
    if factory is None:
        factory = graphs.GraphFactory.from_distances(distance_matrix(dataset.features))
    with SeedPool(dataset, workers) as pool:
        points = densification_points(pool, factory, GraphMethod(method), grid, cfg, seeds, diag)
    return [p.record for p in points]


@dataclass(frozen=True, slots=True)
class Correlations:
    records: list[SweepRecord]
    p_star: float | None = None
    alignment_correlation: float | None = None
    rcs_correlation: float | None = None


def correlate_sweep(label: str, records: list[SweepRecord], ratios: Sequence[float]) -> Correlations:
    """p* and the alignment and RCS correlations of a sweep; records gain their alignment at p*."""
    if len(records) < 3 or not all(r.alignments for r in records):
        return Correlations(records)
    accuracies = [r.val_acc_mean for r in records]
    by_ratio = {p: [r.alignments[ratio_key(p)] for r in records] for p in ratios}
    try:
        p_star, corr = diagnostics.select_ratio(by_ratio, accuracies)
    except CorrelationUndefined as e:
        logger.warning("%s: p* not selected: %s", label, e)
        return Correlations(records)

    key = ratio_key(p_star)
    records = [r.model_copy(update={"alignment": r.alignments[key]}) for r in records]
    rcs_corr = None
    rcs_means = [r.rcs_mean for r in records]
    if all(v is not None for v in rcs_means):
        try:
            rcs_corr = diagnostics.pearson(rcs_means, accuracies)
        except CorrelationUndefined as e:
            logger.warning("%s: RCS correlation undefined: %s", label, e)
    logger.info("%s: p*=%.2f alignment corr=%.3f rcs corr=%s", label, p_star, corr, rcs_corr)
    return Correlations(records, p_star, corr, rcs_corr)


def summarize_method(
    method: str,
    records: list[SweepRecord],
    ratios: Sequence[float],
) -> MethodResult:
    """Optimum of a sweep, plus p*, per-record alignment and the two correlations when available."""
    c = correlate_sweep(method, records, ratios)
    return MethodResult(
        method=method,
        records=c.records,
        optimum=select_optimum(c.records) if c.records else None,
        p_star=c.p_star,
        alignment_correlation=c.alignment_correlation,
        rcs_correlation=c.rcs_correlation,
    )


def summarize_sparsification(
    rank: int,
    source: SweepRecord,
    records: list[SweepRecord],
    ratios: Sequence[float],
) -> SparsificationResult:
    """Selection of a σ sweep with the same diagnostics a densification sweep gets."""
    c = correlate_sweep(f"sparsified rank {rank}", records, ratios)
    selected, sparsified = choose_sparsified(c.records, source)
    return SparsificationResult(
        rank=rank,
        source=source,
        records=c.records,
        selected=selected,
        sparsified=sparsified,
        p_star=c.p_star,
        alignment_correlation=c.alignment_correlation,
        rcs_correlation=c.rcs_correlation,
    )


def _unsparsified(source: SweepRecord) -> SweepRecord:
    return source.model_copy(update={"method": GraphMethod.SPARSIFIED.value, "param": 0.0})


def sparsification_points(
    pool: SeedPool,
    graph: Graph,
    sigmas: Sequence[float],
    cfg: TrainConfig,
    seeds: Sequence[int],
    oversample_c: float,
    sparsify_seed: int,
    diag: DiagnosticsOptions,
) -> list[PointResult]:
    resistances = sparsify.effective_resistances(graph)
    points = []
    for i, sigma in enumerate(sigmas, start=1):
        result = sparsify.sssa_sparsify(
            graph, SparsifyConfig(sigma=sigma, oversample_c=oversample_c, seed=sparsify_seed), resistances
        )
        logger.info(
            "sparsify [%d/%d] sigma=%.5g q=%d support=%d/%d connected=%s",
            i,
            len(sigmas),
            sigma,
            result.q,
            result.support_size,
            graph.edge_count,
            result.connected,
        )
        point = evaluate_graph(
            pool,
            result.graph,
            GraphMethod.SPARSIFIED.value,
            float(sigma),
            cfg,
            seeds,
            diag,
            extra={"q": result.q, "connected": result.connected},
        )
        if point is not None:
            points.append(point)
    return points


def choose_sparsified(
    records: Sequence[SweepRecord],
    source: SweepRecord,
    policy: SelectionPolicy = SelectionPolicy(),
) -> tuple[SweepRecord, bool]:
    """Sparsest record within one standard error of the best, unless nothing beats ``source``.

    The fallback is ``source`` reported as σ = 0.
    """
    if not records:
        return _unsparsified(source), False
    best = policy.best(records)
    if not policy.beats(best, source):
        return _unsparsified(source), False
    return policy.sparsest_within_one_se(records), True


def run_sparsification(
    dataset: Dataset,
    optimum_graph: Graph,
    sigmas: Sequence[float],
    cfg: TrainConfig,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    source: SweepRecord | None = None,
    oversample_c: float | None = None,
    sparsify_seed: int = 0,
    diag: DiagnosticsOptions = DiagnosticsOptions(),
    workers: int = 1,
) -> tuple[list[SweepRecord], SweepRecord, bool]:
    """
    σ sweep from a connected optimum graph.

    Returns the sweep records, the selected record and whether a sparsified
    graph was selected.

    Raises:
        ConnectivityError: If optimum_graph is disconnected
    """
    c = settings.oversample_c if oversample_c is None else oversample_c
    with SeedPool(dataset, workers) as pool:
        if source is None:
            point = evaluate_graph(
                pool, optimum_graph, optimum_graph.method.value, optimum_graph.parameter, cfg, seeds
            )
            if point is None:
                raise TrainingError("Every run on the source graph failed")
            source = point.record
        points = sparsification_points(pool, optimum_graph, sigmas, cfg, seeds, c, sparsify_seed, diag)
    result = summarize_sparsification(1, source, [p.record for p in points], diag.p_star_grid)
    return result.records, result.selected, result.sparsified


def baseline_points(
    pool: SeedPool,
    cfg: TrainConfig,
    seeds: Sequence[int],
    mlp: bool = True,
    knnc: bool = True,
    knnc_ks: Sequence[int] = baselines.DEFAULT_KNNC_KS,
    complete_graph: bool = False,
    distances=None,
) -> list[SweepRecord]:
    dataset = pool.dataset
    records = []
    if mlp:
        point = evaluate_graph(pool, None, "mlp", None, cfg, seeds)
        if point is not None:
            records.append(point.record)
    if knnc:
        d = distances if distances is not None else distance_matrix(dataset.features)
        tuned = baselines.tune_knnc(d, dataset.labels, dataset.split, knnc_ks)
        records.append(
            SweepRecord(
                method="knnc",
                param=tuned.k,
                val_acc_mean=tuned.val_acc,
                test_acc_mean=tuned.test_acc,
                runs=1,
            )
        )
    if complete_graph:
        complete = graphs.complete_graph(dataset.n_samples)
        point = evaluate_graph(pool, complete, "complete", None, cfg, seeds)
        if point is not None:
            records.append(point.record)
    return records


def run_baselines(
    dataset: Dataset,
    cfg: TrainConfig,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    mlp: bool = True,
    knnc: bool = True,
    knnc_ks: Sequence[int] = baselines.DEFAULT_KNNC_KS,
    complete_graph: bool = False,
    workers: int = 1,
    distances=None,
) -> list[SweepRecord]:
    """MLP (no graph), tuned kNNC and optionally the complete graph (mean-field limit)."""
    with SeedPool(dataset, workers) as pool:
        return baseline_points(pool, cfg, seeds, mlp, knnc, knnc_ks, complete_graph, distances)


# ==========================================
# FULL EXPERIMENT
# ==========================================


def load_experiment_dataset(section: DatasetSection) -> Dataset:
    if section.constructive is not None:
        c = section.constructive
        raw, labels = data.constructive_features(
            c.n_clusters, c.features_per_cluster, c.p_in, c.p_out, c.samples_per_cluster, c.seed
        )
        return data.build_dataset(
            raw,
            labels,
            name=section.name or "constructive",
            seed=section.split_seed,
            n_classes=c.n_clusters,
        )
    return data.load_dataset(
        section.features,
        section.labels,
        section.split,
        seed=section.split_seed,
        header=section.header,
        n_classes=section.n_classes,
        name=section.name,
    )


def _graph_metadata(graph: Graph, record: SweepRecord, extra: dict | None = None) -> dict:
    sidecar = GraphSidecar(
        method=graph.method,
        parameter=record.param,
        n=graph.n,
        edge_count=graph.edge_count,
        density=graphs.edge_density(graph),
        mean_degree=graphs.mean_degree(graph),
        **(extra or {}),
    )
    return sidecar.model_dump(mode="json", exclude_none=True)


def run_experiment(
    config: ExperimentConfig,
    workers: int | None = None,
    run_baselines_stage: bool = True,
    run_densification_stage: bool = True,
    run_sparsification_stage: bool = True,
    source_graph: Graph | None = None,
    dataset: Dataset | None = None,
) -> tuple[ExperimentReport, ExperimentArtifacts]:
    """
    Densification sweeps, baselines, diagnostics and sparsification sweeps.

    - Every grid point trains one model per configured seed
    - ``source_graph`` replaces the densification optimum as the
      sparsification start (partial runs)
    """
    workers = settings.workers if workers is None else workers
    if dataset is None:
        dataset = load_experiment_dataset(config.dataset)
    seeds = config.seeds.values
    cfg = config.gcn.train_config(seeds[0])
    diag = DiagnosticsOptions(
        enabled=config.sweep.diagnostics,
        p_star_grid=tuple(config.sweep.p_star_grid),
        perplexity=config.sweep.perplexity,
        tsne_iterations=config.sweep.tsne_iterations,
    )
    artifacts = ExperimentArtifacts()
    d = distance_matrix(dataset.features)
    factory = graphs.GraphFactory.from_distances(
        d, delta=config.methods.delta, k_local=config.methods.k_local
    )

    baseline_records: list[SweepRecord] = []
    method_results: list[MethodResult] = []
    sparsification: list[SparsificationResult] = []

    with SeedPool(dataset, workers) as pool:
        if run_baselines_stage:
            baseline_records = baseline_points(
                pool,
                cfg,
                seeds,
                mlp=config.baselines.mlp,
                knnc=config.baselines.knnc,
                knnc_ks=config.baselines.knnc_ks,
                complete_graph=config.baselines.complete_graph,
                distances=d,
            )

        if run_densification_stage:
            for method in config.methods.names:
                grid = graphs.density_grid(method, dataset.n_samples, config.sweep.grid_size)
                points = densification_points(pool, factory, method, list(grid), cfg, seeds, diag)
                records = [p.record for p in points]
                result = summarize_method(method.value, records, diag.p_star_grid)
                method_results.append(result)
                if result.optimum is not None:
                    logger.info(
                        "%s optimum param=%s density=%.5f val=%.4f test=%.4f",
                        method.value,
                        result.optimum.param,
                        result.optimum.edge_density,
                        result.optimum.val_acc_mean,
                        result.optimum.test_acc_mean,
                    )
                    best_point = next(p for p in points if p.record.param == result.optimum.param)
                    name = f"{method.value}_optimum"
                    artifacts.graphs[name] = (
                        best_point.graph,
                        _graph_metadata(best_point.graph, result.optimum, _construction_extra(method, config)),
                    )
                    if best_point.embedding is not None:
                        artifacts.embeddings[name] = (best_point.embedding.coords, dataset.labels.labels)

        if run_sparsification_stage and config.sparsify.enabled:
            sigmas = sparsify.sigma_grid(dataset.n_samples, config.sparsify.grid_size)
            for rank, (source, graph) in enumerate(
                _sparsification_sources(config, pool, factory, method_results, source_graph, cfg, seeds),
                start=1,
            ):
                if not graph.is_connected():
                    logger.warning("Sparsification source rank %d is disconnected; skipped", rank)
                    continue
                points = sparsification_points(
                    pool,
                    graph,
                    sigmas,
                    cfg,
                    seeds,
                    config.sparsify.oversample_c,
                    config.sparsify.seed,
                    diag,
                )
                result = summarize_sparsification(
                    rank, source, [p.record for p in points], diag.p_star_grid
                )
                selected, sparsified = result.selected, result.sparsified
                logger.info(
                    "sparsification rank %d: sigma=%s mean degree %.2f -> %.2f (val %.4f)",
                    rank,
                    selected.param,
                    source.mean_degree,
                    selected.mean_degree,
                    selected.val_acc_mean,
                )
                sparsification.append(result)
                if sparsified:
                    chosen = next(p for p in points if p.record.param == selected.param)
                    artifacts.graphs[f"sparsified_{rank}"] = (
                        chosen.graph,
                        _graph_metadata(
                            chosen.graph,
                            selected,
                            {
                                "sigma": selected.param,
                                "q": selected.q,
                                "support_size": chosen.graph.edge_count,
                                "connected": selected.connected,
                            },
                        ),
                    )
                    if chosen.embedding is not None:
                        artifacts.embeddings[f"sparsified_{rank}"] = (
                            chosen.embedding.coords,
                            dataset.labels.labels,
                        )

    report = ExperimentReport(
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        dataset=dataset.name,
        n_samples=dataset.n_samples,
        n_features=dataset.features.n_features,
        n_classes=dataset.labels.n_classes,
        seeds=list(seeds),
        oversample_c=config.sparsify.oversample_c,
        baselines=baseline_records,
        methods=method_results,
        sparsification=sparsification,
        config=config.model_dump(mode="json"),
    )
    return report, artifacts


def _construction_extra(method: GraphMethod, config: ExperimentConfig) -> dict:
    if method == GraphMethod.CKNN:
        return {"delta": config.methods.delta}
    if method == GraphMethod.RMST:
        return {"k_local": config.methods.k_local}
    return {}


def _sparsification_sources(
    config: ExperimentConfig,
    pool: SeedPool,
    factory: graphs.GraphFactory,
    method_results: list[MethodResult],
    source_graph: Graph | None,
    cfg: TrainConfig,
    seeds: Sequence[int],
):
    """Yield (record, graph) for each starting graph: the given one, or the top-n of the sweep."""
    if source_graph is not None:
        point = evaluate_graph(
            pool, source_graph, source_graph.method.value, source_graph.parameter, cfg, seeds
        )
        if point is None:
            raise TrainingError("Every run on the sparsification source graph failed")
        yield point.record, source_graph
        return

    method = config.sparsify.method.value
    result = next((r for r in method_results if r.method == method), None)
    if result is None or not result.records:
        logger.warning("No %s sweep available to sparsify from", method)
        return
    policy = SelectionPolicy()
    remaining = list(result.records)
    for _ in range(min(config.sparsify.top_n, len(remaining))):
        best = policy.best(remaining)
        remaining.remove(best)
        yield best, factory.build(method, best.param)


# ==========================================
# REPORT FILES
# ==========================================


def emit_report(
    report: ExperimentReport,
    out_dir: str | Path,
    artifacts: ExperimentArtifacts | None = None,
) -> list[Path]:
    """
    Write report.json, its schema, summary.csv, sweep tables, diagnostics and artifacts.

    Re-running with the same report overwrites the same files with the same bytes.
    """
    out_dir = Path(out_dir)
    written = [
        report_repo.write_report_json(out_dir / "report.json", report),
        report_repo.write_report_schema(out_dir / "report.schema.json"),
    ]

    summary = [m.optimum for m in report.methods if m.optimum is not None] + list(report.baselines)
    written.append(report_repo.write_summary_csv(out_dir / "summary.csv", report.dataset, summary))

    ratios = [ratio_key(p) for p in report.config.get("sweep", {}).get("p_star_grid", [])]
    for m in report.methods:
        written.append(report_repo.write_sweep_csv(out_dir / f"sweep_{m.method}.csv", m.records, ratios))
        if _has_diagnostics(m.records):
            written.append(
                report_repo.write_json(
                    out_dir / f"diagnostics_{m.method}.json", _diagnostics_payload(m.method, m)
                )
            )
    for s in report.sparsification:
        written.append(report_repo.write_sweep_csv(out_dir / f"sparsify_{s.rank}.csv", s.records, ratios))
        if _has_diagnostics(s.records):
            written.append(
                report_repo.write_json(
                    out_dir / f"diagnostics_sparsify_{s.rank}.json",
                    _diagnostics_payload(GraphMethod.SPARSIFIED.value, s),
                )
            )
    if report.baselines:
        written.append(report_repo.write_sweep_csv(out_dir / "baselines.csv", report.baselines))

    if artifacts is not None:
        for name, (graph, meta) in sorted(artifacts.graphs.items()):
            tsv = out_dir / "graphs" / f"{name}.tsv"
            written.append(graph_repo.write_edge_list(tsv, graph))
            written.append(graph_repo.write_sidecar(graph_repo.sidecar_path(tsv), meta))
        for name, (coords, labels) in sorted(artifacts.embeddings.items()):
            written.append(
                report_repo.write_embedding_csv(out_dir / "embeddings" / f"{name}.csv", coords, labels)
            )
    logger.info("Wrote %d files to %s", len(written), out_dir)
    return written


def _has_diagnostics(records: Sequence[SweepRecord]) -> bool:
    return any(r.alignments or r.rcs_mean is not None for r in records)


def _diagnostics_payload(method: str, m: MethodResult | SparsificationResult) -> dict:
    return {
        "method": method,
        "p_star": m.p_star,
        "alignment_correlation": m.alignment_correlation,
        "rcs_correlation": m.rcs_correlation,
        "points": [
            {
                "param": r.param,
                "density": r.edge_density,
                "alignment": r.alignment,
                "rcs_mean": r.rcs_mean,
                "rcs_std": r.rcs_std,
                "val_acc_mean": r.val_acc_mean,
                "val_acc_std": r.val_acc_std,
            }
            for r in m.records
        ],
    }
