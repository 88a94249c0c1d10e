"""Report, sweep and history files. Writers only format; nothing is computed here."""

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from geograph.errors import FormatError
from geograph.schemas.report import ExperimentReport, SweepRecord

SUMMARY_COLUMNS = (
    "dataset",
    "method",
    "param",
    "density",
    "mean_degree",
    "val_acc_mean",
    "val_acc_std",
    "test_acc_mean",
    "test_acc_std",
)

SWEEP_COLUMNS = (
    "method",
    "param",
    "edge_density",
    "mean_degree",
    "edge_count",
    "val_acc_mean",
    "val_acc_std",
    "test_acc_mean",
    "test_acc_std",
    "alignment",
    "rcs_mean",
    "rcs_std",
    "runs",
    "failed_runs",
    "connected",
    "q",
)


def _prepare(path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_json(path: str | Path, payload) -> Path:
    path = _prepare(path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_report_json(path: str | Path, report: ExperimentReport) -> Path:
    path = _prepare(path)
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def read_report_json(path: str | Path) -> ExperimentReport:
    path = Path(path)
    try:
        return ExperimentReport.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise FormatError(f"Cannot read report {path}: {e}") from e
    except ValueError as e:
        raise FormatError(f"{path}: invalid report: {e}") from e


def write_report_schema(path: str | Path) -> Path:
    return write_json(path, ExperimentReport.model_json_schema())


def write_summary_csv(path: str | Path, dataset: str, records: Iterable[SweepRecord]) -> Path:
    path = _prepare(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    dataset,
                    r.method,
                    _cell(r.param),
                    _cell(r.edge_density),
                    _cell(r.mean_degree),
                    _cell(r.val_acc_mean),
                    _cell(r.val_acc_std),
                    _cell(r.test_acc_mean),
                    _cell(r.test_acc_std),
                ]
            )
    return path


def write_sweep_csv(
    path: str | Path,
    records: Sequence[SweepRecord],
    ratios: Sequence[str] = (),
) -> Path:
    """Plot-ready sweep table; one ``alignment@<ratio>`` column per p* ratio."""
    path = _prepare(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(SWEEP_COLUMNS) + [f"alignment@{p}" for p in ratios])
        for r in records:
            row = [_cell(getattr(r, col)) for col in SWEEP_COLUMNS]
            row += [_cell(r.alignments.get(p)) for p in ratios]
            writer.writerow(row)
    return path


def read_sweep_csv(path: str | Path) -> list[dict[str, str]]:
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            return list(csv.DictReader(fh))
    except OSError as e:
        raise FormatError(f"Cannot read sweep table {path}: {e}") from e


def write_history_csv(path: str | Path, history) -> Path:
    """Per-epoch training history: epoch,train_loss,val_loss,val_acc."""
    path = _prepare(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["epoch", "train_loss", "val_loss", "val_acc"])
        for rec in history:
            writer.writerow([rec.epoch, repr(rec.train_loss), repr(rec.val_loss), repr(rec.val_acc)])
    return path


def write_embedding_csv(path: str | Path, coords: np.ndarray, labels: np.ndarray) -> Path:
    """One row per node: x,y,class."""
    path = _prepare(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "class"])
        for (x, y), c in zip(coords, labels):
            writer.writerow([repr(float(x)), repr(float(y)), int(c)])
    return path


def write_predictions_csv(path: str | Path, z: np.ndarray) -> Path:
    """Row-stochastic output activations, one column per class."""
    path = _prepare(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"class_{c}" for c in range(z.shape[1])])
        for row in z:
            writer.writerow([repr(float(v)) for v in row])
    return path
