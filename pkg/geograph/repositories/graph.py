"""Edge-list TSV files (``u<TAB>v`` with u < v, 0-based) and their JSON sidecars."""

import json
from pathlib import Path

import numpy as np

from geograph.domain.graph import Graph, GraphMethod
from geograph.errors import FormatError


def sidecar_path(tsv_path: str | Path) -> Path:
    return Path(tsv_path).with_suffix(".json")


def write_edge_list(path: str | Path, graph: Graph) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for u, v in graph.edges:
            fh.write(f"{int(u)}\t{int(v)}\n")
    return path


def write_sidecar(path: str | Path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    return path


def read_sidecar(path: str | Path) -> dict | None:
    path = Path(path)
    if not path.exists():
        return None
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON sidecar: {e}") from e


def read_edge_list(path: str | Path, n: int | None = None) -> Graph:
    """Read a TSV edge list.

    The node count comes from ``n``, else from the sidecar's ``n``, else from
    the largest endpoint + 1.
    """
    path = Path(path)
    edges: list[tuple[int, int]] = []
    try:
        with path.open(encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise FormatError(f"{path}:{line_no}: expected 'u<TAB>v'")
                try:
                    u, v = int(parts[0]), int(parts[1])
                except ValueError:
                    raise FormatError(f"{path}:{line_no}: non-integer node id")
                if u == v:
                    raise FormatError(f"{path}:{line_no}: self-loop {u}")
                edges.append((u, v))
    except OSError as e:
        raise FormatError(f"Cannot read edge list {path}: {e}") from e

    sidecar = read_sidecar(sidecar_path(path)) or {}
    if n is None:
        n = sidecar.get("n")
    if n is None:
        n = (max(max(e) for e in edges) + 1) if edges else 0
    method = sidecar.get("method", GraphMethod.EXTERNAL.value)
    try:
        method = GraphMethod(method)
    except ValueError:
        method = GraphMethod.EXTERNAL
    params = {}
    if sidecar.get("parameter") is not None and method != GraphMethod.EXTERNAL:
        key = "gamma" if method == GraphMethod.RMST else "sigma" if method == GraphMethod.SPARSIFIED else "k"
        params[key] = sidecar["parameter"]
    try:
        return Graph(n=int(n), edges=np.asarray(edges, dtype=np.int64), method=method, params=params)
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from e
