"""The ``geograph`` command line."""

import argparse
import json
import logging
from pathlib import Path

from pydantic import ValidationError

import geograph.repositories.dataset as dataset_repo
import geograph.repositories.graph as graph_repo
import geograph.repositories.matrix as matrix_repo
import geograph.repositories.report as report_repo
from geograph.core.config import settings
from geograph.domain.graph import GraphMethod
from geograph.domain.sparsify import SparsifyConfig
from geograph.errors import EXIT_DATA, EXIT_OK, ConfigError, GeographError, ParamError
from geograph.schemas.config import ExperimentConfig, GcnSection
from geograph.schemas.graph import GraphSidecar
from geograph.services import data, experiment, gcn, graphs, sparsify
from geograph.services.geometry import distance_matrix

logger = logging.getLogger("geograph")


# ==========================================
# DATA AND GRAPHS
# ==========================================


def cmd_gen_constructive(args: argparse.Namespace) -> None:
    dataset = data.generate_constructive(
        n_clusters=args.clusters,
        features_per_cluster=args.feat_per_cluster,
        p_in=args.p_in,
        p_out=args.p_out,
        samples_per_cluster=args.per_cluster,
        seed=args.seed,
    )
    paths = data.save_dataset(dataset, args.out)
    logger.info(
        "Constructive dataset N=%d F=%d C=%d written to %s",
        dataset.n_samples,
        dataset.features.n_features,
        dataset.labels.n_classes,
        args.out,
    )
    for name, path in paths.items():
        print(f"{name}\t{path}")


def _parse_param(method: GraphMethod, raw: str | None):
    if method in (GraphMethod.MST, GraphMethod.COMPLETE):
        return None
    if raw is None:
        raise ParamError(f"--param is required for {method.value}")
    try:
        return int(raw) if method.uses_integer_parameter else float(raw)
    except ValueError as e:
        raise ParamError(f"Invalid --param {raw!r} for {method.value}") from e


def cmd_build(args: argparse.Namespace) -> None:
    method = GraphMethod(args.method)
    param = _parse_param(method, args.param)
    raw = dataset_repo.read_features_csv(args.features, header=args.header)
    d = distance_matrix(data.l1_normalize(raw))
    if args.save_distances:
        matrix_repo.write_distances(args.save_distances, d.values)
        logger.info("Distances written to %s", args.save_distances)

    factory = graphs.GraphFactory.from_distances(d, delta=args.delta, k_local=args.k_local)
    graph = factory.build(method, param)
    sidecar = GraphSidecar(
        method=method,
        parameter=param,
        n=graph.n,
        edge_count=graph.edge_count,
        density=graphs.edge_density(graph),
        mean_degree=graphs.mean_degree(graph),
        delta=args.delta if method == GraphMethod.CKNN else None,
        k_local=args.k_local if method == GraphMethod.RMST else None,
    )
    stem = method.value if param is None else f"{method.value}_{param:g}"
    tsv = graph_repo.write_edge_list(Path(args.out) / f"{stem}.tsv", graph)
    graph_repo.write_sidecar(graph_repo.sidecar_path(tsv), sidecar.model_dump(mode="json", exclude_none=True))
    logger.info("%s: %d edges, density %.5f", stem, graph.edge_count, sidecar.density)
    print(tsv)


# ==========================================
# TRAINING
# ==========================================


def _train_config(args: argparse.Namespace):
    try:
        section = GcnSection(
            epochs=args.epochs,
            learning_rate=args.lr,
            dropout=args.dropout,
            l2=args.l2,
            early_stop_window=args.patience,
            hidden=args.hidden,
            reduction=args.reduction,
        )
    except ValidationError as e:
        raise ConfigError(f"Invalid training options: {e}") from e
    return section.train_config(args.seed)


def cmd_train(args: argparse.Namespace) -> None:
    dataset = data.load_dataset(
        args.features,
        args.labels,
        args.split,
        seed=args.split_seed,
        header=args.header,
    )
    graph = None if args.no_graph else graph_repo.read_edge_list(args.graph, n=dataset.n_samples)
    a_hat = gcn.normalize_adjacency(graph, n=dataset.n_samples)
    result = gcn.train(dataset, a_hat, _train_config(args))

    out = Path(args.out)
    matrix_repo.write_checkpoint(out / "model.bin", result.model.w0, result.model.w1)
    report_repo.write_history_csv(out / "history.csv", result.history)
    report_repo.write_predictions_csv(out / "predictions.csv", result.activations.z)
    metrics = {
        "graph": None if graph is None else str(args.graph),
        "seed": args.seed,
        "best_epoch": result.best_epoch,
        "stopped_epoch": result.stopped_epoch,
        "val_acc": gcn.accuracy(result.activations, dataset.labels, dataset.split.validation),
        "test_acc": gcn.accuracy(result.activations, dataset.labels, dataset.split.test),
    }
    report_repo.write_json(out / "metrics.json", metrics)
    logger.info("val=%.4f test=%.4f (best epoch %d)", metrics["val_acc"], metrics["test_acc"], result.best_epoch)
    print(json.dumps(metrics, sort_keys=True))


def cmd_sparsify(args: argparse.Namespace) -> None:
    graph = graph_repo.read_edge_list(args.graph)
    c = settings.oversample_c if args.oversample_c is None else args.oversample_c
    try:
        cfg = SparsifyConfig(sigma=args.sigma, oversample_c=c, seed=args.seed)
    except ValueError as e:
        raise ParamError(str(e)) from e
    result = sparsify.sssa_sparsify(graph, cfg)

    sidecar = GraphSidecar(
        method=GraphMethod.SPARSIFIED,
        parameter=result.sigma,
        n=result.graph.n,
        edge_count=result.graph.edge_count,
        density=graphs.edge_density(result.graph),
        mean_degree=result.mean_degree,
        sigma=result.sigma,
        q=result.q,
        support_size=result.support_size,
        connected=result.connected,
        source=str(args.graph),
    )
    tsv = graph_repo.write_edge_list(Path(args.out) / f"sparsified_{result.sigma:g}.tsv", result.graph)
    graph_repo.write_sidecar(graph_repo.sidecar_path(tsv), sidecar.model_dump(mode="json", exclude_none=True))
    logger.info(
        "sigma=%g q=%d support %d/%d edges, connected=%s",
        result.sigma,
        result.q,
        result.support_size,
        graph.edge_count,
        result.connected,
    )
    print(tsv)


# ==========================================
# EXPERIMENTS
# ==========================================


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """Read the TOML file and apply command-line overrides (re-validated)."""
    config = ExperimentConfig.from_toml(args.config)
    overrides = config.model_dump(mode="json")
    if getattr(args, "grid_size", None) is not None:
        overrides["sweep"]["grid_size"] = args.grid_size
        overrides["sparsify"]["grid_size"] = args.grid_size
    if getattr(args, "top_n", None) is not None:
        overrides["sparsify"]["top_n"] = args.top_n
    if getattr(args, "out", None) is not None:
        overrides["output"]["dir"] = str(args.out)
    return ExperimentConfig.from_mapping(overrides)


def _run_and_emit(args: argparse.Namespace, **stages) -> None:
    config = load_config(args)
    report, artifacts = experiment.run_experiment(config, workers=args.workers, **stages)
    out_dir = Path(config.output.dir or settings.output_dir)
    experiment.emit_report(report, out_dir, artifacts)
    print(out_dir / "report.json")


def cmd_experiment(args: argparse.Namespace) -> None:
    _run_and_emit(args)


def cmd_sweep(args: argparse.Namespace) -> None:
    _run_and_emit(args, run_sparsification_stage=False)


def cmd_sparsify_sweep(args: argparse.Namespace) -> None:
    source = graph_repo.read_edge_list(args.graph)
    _run_and_emit(
        args,
        run_baselines_stage=False,
        run_densification_stage=False,
        source_graph=source,
    )


def cmd_schema(args: argparse.Namespace) -> None:
    print(report_repo.write_report_schema(args.out))


def cmd_serve(args: argparse.Namespace) -> None:
    import uvicorn

    uvicorn.run("geograph.main:app", host=args.host, port=args.port, log_level=settings.log_level.lower())


# ==========================================
# PARSER
# ==========================================


def _add_dataset_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--split", default=None, help="JSON split file; generated from --split-seed when absent")
    p.add_argument("--split-seed", type=int, default=0)
    p.add_argument("--header", action="store_true", help="Features CSV has a header row")


def _add_experiment_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="Experiment TOML file")
    p.add_argument("--grid-size", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--top-n", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="geograph",
        description="Geometric graph construction, GCN training, diagnostics and sparsification",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    pg = sub.add_parser("gen-constructive", help="Generate the constructive block dataset")
    pg.add_argument("--clusters", type=int, default=10)
    pg.add_argument("--feat-per-cluster", type=int, default=50)
    pg.add_argument("--p-in", type=float, default=0.07)
    pg.add_argument("--p-out", type=float, default=0.007)
    pg.add_argument("--per-cluster", type=int, default=100)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--out", required=True)
    pg.set_defaults(func=cmd_gen_constructive)

    pb = sub.add_parser("build", help="Build one geometric graph and write it as TSV")
    pb.add_argument("--method", required=True, choices=["knn", "mknn", "cknn", "rmst", "mst", "complete"])
    pb.add_argument("--param", default=None, help="k for knn/mknn/cknn, gamma for rmst")
    pb.add_argument("--features", required=True)
    pb.add_argument("--header", action="store_true")
    pb.add_argument("--delta", type=float, default=1.0)
    pb.add_argument("--k-local", type=int, default=1)
    pb.add_argument("--save-distances", default=None)
    pb.add_argument("--out", required=True)
    pb.set_defaults(func=cmd_build)

    pt = sub.add_parser("train", help="Train one GCN (or MLP with --no-graph)")
    _add_dataset_arguments(pt)
    g = pt.add_mutually_exclusive_group(required=True)
    g.add_argument("--graph", default=None)
    g.add_argument("--no-graph", action="store_true")
    pt.add_argument("--seed", type=int, default=0)
    pt.add_argument("--epochs", type=int, default=2000)
    pt.add_argument("--lr", type=float, default=0.01)
    pt.add_argument("--dropout", type=float, default=0.5)
    pt.add_argument("--l2", type=float, default=5e-4)
    pt.add_argument("--patience", type=int, default=200)
    pt.add_argument("--hidden", type=int, default=16)
    pt.add_argument("--reduction", choices=["sum", "mean"], default="sum")
    pt.add_argument("--out", required=True)
    pt.set_defaults(func=cmd_train)

    ps = sub.add_parser("sparsify", help="Sparsify one graph by effective-resistance sampling")
    ps.add_argument("--graph", required=True)
    ps.add_argument("--sigma", type=float, required=True)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--oversample-c", type=float, default=None)
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_sparsify)

    pe = sub.add_parser("experiment", help="Full experiment: baselines, sweeps, diagnostics, sparsification")
    _add_experiment_arguments(pe)
    pe.set_defaults(func=cmd_experiment)

    pw = sub.add_parser("sweep", help="Baselines and densification sweeps only")
    _add_experiment_arguments(pw)
    pw.set_defaults(func=cmd_sweep)

    pz = sub.add_parser("sparsify-sweep", help="Sparsification sweep from a given graph")
    _add_experiment_arguments(pz)
    pz.add_argument("--graph", required=True)
    pz.set_defaults(func=cmd_sparsify_sweep)

    pc = sub.add_parser("schema", help="Write the report JSON schema")
    pc.add_argument("--out", default="report.schema.json")
    pc.set_defaults(func=cmd_schema)

    pv = sub.add_parser("serve", help="Run the HTTP API")
    pv.add_argument("--host", default=settings.host)
    pv.add_argument("--port", type=int, default=settings.port)
    pv.set_defaults(func=cmd_serve)

    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        args.func(args)
    except GeographError as e:
        logger.error("%s: %s", e.code, e)
        return e.exit_code
    except OSError as e:
        logger.error("I/O failure: %s", e)
        return EXIT_DATA
    return EXIT_OK
