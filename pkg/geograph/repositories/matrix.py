"""Little-endian binary matrix files: distance dumps and model checkpoints."""

import struct
from pathlib import Path

import numpy as np

from geograph.errors import FormatError

_F64 = np.dtype("<f8")


def write_distances(path: str | Path, values: np.ndarray) -> Path:
    """8-byte little-endian N header followed by row-major float64 values."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = values.shape[0]
    with path.open("wb") as fh:
        fh.write(struct.pack("<Q", n))
        fh.write(np.ascontiguousarray(values, dtype=_F64).tobytes(order="C"))
    return path


def read_distances(path: str | Path) -> np.ndarray:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 8:
        raise FormatError(f"{path}: truncated header")
    (n,) = struct.unpack("<Q", raw[:8])
    body = np.frombuffer(raw, dtype=_F64, offset=8)
    if body.size != n * n:
        raise FormatError(f"{path}: expected {n * n} values, found {body.size}")
    return body.reshape(n, n).copy()


def write_checkpoint(path: str | Path, w0: np.ndarray, w1: np.ndarray) -> Path:
    """Header of three little-endian uint64 (F, H, C) then W⁰ and W¹ row-major float64."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    f, h = w0.shape
    h1, c = w1.shape
    if h != h1:
        raise FormatError("W0 and W1 hidden sizes differ")
    with path.open("wb") as fh:
        fh.write(struct.pack("<QQQ", f, h, c))
        fh.write(np.ascontiguousarray(w0, dtype=_F64).tobytes(order="C"))
        fh.write(np.ascontiguousarray(w1, dtype=_F64).tobytes(order="C"))
    return path


def read_checkpoint(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 24:
        raise FormatError(f"{path}: truncated header")
    f, h, c = struct.unpack("<QQQ", raw[:24])
    body = np.frombuffer(raw, dtype=_F64, offset=24)
    if body.size != f * h + h * c:
        raise FormatError(f"{path}: checkpoint size does not match header ({f}, {h}, {c})")
    w0 = body[: f * h].reshape(f, h).copy()
    w1 = body[f * h :].reshape(h, c).copy()
    return w0, w1
