"""Pure file access for features, labels and splits. No normalization here."""

import csv
import json
from pathlib import Path

import numpy as np

from geograph.domain.dataset import Split
from geograph.errors import FormatError


def read_features_csv(path: str | Path, header: bool = False) -> np.ndarray:
    """Read an N×F matrix of decimal floats, one sample per row."""
    path = Path(path)
    rows: list[list[float]] = []
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            if header:
                next(reader, None)
            for line_no, row in enumerate(reader, start=2 if header else 1):
                if not row or all(cell.strip() == "" for cell in row):
                    continue
                try:
                    rows.append([float(cell) for cell in row])
                except ValueError:
                    raise FormatError(f"{path}:{line_no}: non-numeric cell in {row!r}")
    except OSError as e:
        raise FormatError(f"Cannot read features file {path}: {e}") from e

    if not rows:
        raise FormatError(f"{path}: no feature rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise FormatError(f"{path}: rows have differing column counts {sorted(widths)}")
    return np.asarray(rows, dtype=np.float64)


def read_labels_csv(path: str | Path) -> np.ndarray:
    """Read one integer label per row."""
    path = Path(path)
    labels: list[int] = []
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            for line_no, row in enumerate(csv.reader(fh), start=1):
                if not row or row[0].strip() == "":
                    continue
                if len(row) != 1:
                    raise FormatError(f"{path}:{line_no}: expected one label per row")
                try:
                    labels.append(int(row[0]))
                except ValueError:
                    raise FormatError(f"{path}:{line_no}: non-integer label {row[0]!r}")
    except OSError as e:
        raise FormatError(f"Cannot read labels file {path}: {e}") from e
    return np.asarray(labels, dtype=np.int64)


def read_split_json(path: str | Path) -> Split:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise FormatError(f"Cannot read split file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON: {e}") from e

    try:
        return Split(
            train=np.asarray(payload["train"], dtype=np.int64),
            validation=np.asarray(payload["validation"], dtype=np.int64),
            test=np.asarray(payload["test"], dtype=np.int64),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"{path}: split must have integer lists train/validation/test") from e


def write_features_csv(path: str | Path, values: np.ndarray) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for row in values:
            # repr() of a Python float is the shortest round-tripping decimal
            writer.writerow([repr(float(v)) for v in row])


def write_labels_csv(path: str | Path, labels: np.ndarray) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for label in labels:
            writer.writerow([int(label)])


def write_split_json(path: str | Path, split: Split) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "train": [int(i) for i in split.train],
        "validation": [int(i) for i in split.validation],
        "test": [int(i) for i in split.test],
    }
    path.write_text(json.dumps(payload), encoding="utf-8")
