"""JSON encoding of banded matrices and matrix measures.

Complex entries are ``[re, im]`` pairs (a bare number is read as real).
Floats are written with ``repr``, the shortest string that reads back to
the same double, so write-then-read is lossless and output is deterministic.

Matrix::

    {"k": 2, "N": 5, "A": [block, ...], "B": [block, ...]}
    {"k": 2, "N": 5, "dense": matrix}

Measure::

    {"k": 2, "atoms": [{"x": 0.5, "W": matrix}, ...]}
"""

from __future__ import annotations

import json

import numpy as np

from .errors import ParseError, SchemaError
from .measure import MatrixMeasure
from .spectral import BandedHermitian

__all__ = [
    "encode_matrix",
    "decode_matrix",
    "matrix_to_json",
    "banded_to_json",
    "measure_to_json",
    "load_json",
    "dumps",
    "banded_from_json",
    "dense_from_json",
    "measure_from_json",
    "detect_kind",
]


def encode_matrix(M) -> list:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _entry(v, where):
    if isinstance(v, bool):
        raise SchemaError(f"{where}: boolean is not a number")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in v):
        return complex(v[0], v[1])
    raise SchemaError(f"{where}: expected a number or [re, im], got {v!r}")


def decode_matrix(data, where="matrix") -> np.ndarray:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise SchemaError(f"{where}: expected a list of rows")
    rows = [[_entry(v, f"{where}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(data)]
    if rows and len({len(r) for r in rows}) != 1:
        raise SchemaError(f"{where}: rows have different lengths")
    arr = np.array(rows, dtype=complex)
    if arr.ndim != 2:
        arr = arr.reshape(len(rows), 0)
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{where}: non-finite entries")
    return arr


def banded_to_json(J: BandedHermitian) -> dict:
    return {"k": J.k, "N": J.N, "A": [encode_matrix(a) for a in J.A], "B": [encode_matrix(b) for b in J.B]}


def matrix_to_json(M, k: int) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"k": k, "N": M.shape[0], "dense": encode_matrix(M)}


def measure_to_json(mu: MatrixMeasure) -> dict:
    return {"k": mu.k, "atoms": [{"x": float(x), "W": encode_matrix(W)} for x, W in zip(mu.points, mu.weights)]}


def dumps(obj) -> str:
    return json.dumps(obj, allow_nan=True, separators=(", ", ": "))


def load_json(path_or_text, is_text: bool = False):
    try:
        if is_text:
            return json.loads(path_or_text)
        with open(path_or_text, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read {path_or_text}: {exc}") from exc


def _require(data, key, kind):
    if not isinstance(data, dict) or key not in data:
        raise SchemaError(f"{kind} JSON needs key {key!r}")
    return data[key]


def _count(v, key):
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise SchemaError(f"{key!r} must be a positive integer, got {v!r}")
    return v


def detect_kind(data) -> str:
    """``"measure"``, ``"banded"`` or ``"dense"``."""
    if isinstance(data, dict):
        if "atoms" in data:
            return "measure"
        if "A" in data:
            return "banded"
        if "dense" in data:
            return "dense"
    raise SchemaError("JSON is neither a matrix (keys A/B or dense) nor a measure (key atoms)")


def dense_from_json(data, k: int | None = None):
    """``(dense matrix, k)`` from either matrix form; ``k`` overrides the file."""
    kind = detect_kind(data)
    if kind == "measure":
        raise SchemaError("expected a matrix, got a measure")
    kk = k if k is not None else _count(_require(data, "k", "matrix"), "k")
    if kind == "dense":
        M = decode_matrix(data["dense"], "dense")
        if M.shape[0] != M.shape[1]:
            raise SchemaError(f"dense matrix must be square, got {M.shape}")
        if "N" in data and data["N"] != M.shape[0]:
            raise SchemaError(f"N={data['N']} does not match the dense size {M.shape[0]}")
        return M, kk
    return banded_from_json(data).to_dense(), kk


def banded_from_json(data) -> BandedHermitian:
    k = _count(_require(data, "k", "matrix"), "k")
    N = _count(_require(data, "N", "matrix"), "N")
    A = _require(data, "A", "matrix")
    B = data.get("B", [])
    if not isinstance(A, list) or not isinstance(B, list):
        raise SchemaError("A and B must be lists of blocks")
    try:
        return BandedHermitian(k, N, tuple(decode_matrix(a, f"A[{i}]") for i, a in enumerate(A)),
                               tuple(decode_matrix(b, f"B[{i}]") for i, b in enumerate(B)))
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc)) from exc


def measure_from_json(data) -> MatrixMeasure:
    k = _count(_require(data, "k", "measure"), "k")
    atoms = _require(data, "atoms", "measure")
    if not isinstance(atoms, list) or not atoms:
        raise SchemaError("atoms must be a non-empty list")
    xs, Ws = [], []
    for i, a in enumerate(atoms):
        x = _require(a, "x", f"atom {i}")
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise SchemaError(f"atom {i}: x must be a number")
        W = decode_matrix(_require(a, "W", f"atom {i}"), f"atoms[{i}].W")
        if W.shape != (k, k):
            raise SchemaError(f"atom {i}: W has shape {W.shape}, expected {(k, k)}")
        xs.append(float(x))
        Ws.append(W)
    return MatrixMeasure.from_weights(xs, np.array(Ws))
