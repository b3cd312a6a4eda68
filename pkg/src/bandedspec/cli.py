"""Command-line front end.

Exit status: 0 on success, 1 when an input fails validation (bad JSON,
schema, class membership), 2 when a computation fails numerically.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import io
from .errors import NumericalError, ValidationError
from .linalg import DEFAULT_TOL
from .measure import MERGE_TOL, measure_distance, validate_measure
from .spectral import banded_distance, inverse_spectral_map, spectral_map, validate_banded
from .toda import (
    eigenvalue_drift,
    toda_qr_flow,
    toda_rk4_oracle,
    toda_spectral_flow,
)
from .tridiag import block_lanczos, equivalence_check, householder_blocktridiag

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _load_banded(args):
    data = io.load_json(args.input)
    M, k = io.dense_from_json(data, args.k)
    return validate_banded(M, k, args.tol)


def cmd_validate(args) -> int:
    data = io.load_json(args.input)
    if io.detect_kind(data) == "measure":
        mu = io.measure_from_json(data)
        rep = validate_measure(mu, k=args.k, tol=args.tol).as_dict()
        rep["kind"] = "measure"
        _emit(io.dumps(rep), args)
        return EXIT_OK if rep["member_of_MkN"] else EXIT_INVALID
    M, k = io.dense_from_json(data, args.k)
    try:
        J = validate_banded(M, k, args.tol)
    except ValidationError as exc:
        rep = {"kind": "matrix", "valid": False, "error": type(exc).__name__, "message": str(exc)}
        _emit(io.dumps(rep), args)
        return EXIT_INVALID
    _emit(io.dumps({"kind": "matrix", "valid": True, "k": J.k, "N": J.N, "n": J.n, "ell": J.ell}), args)
    return EXIT_OK


def cmd_spectral(args) -> int:
    J = _load_banded(args)
    _emit(io.dumps(io.measure_to_json(spectral_map(J, args.tol, args.merge_tol))), args)
    return EXIT_OK


def cmd_inverse(args) -> int:
    mu = io.measure_from_json(io.load_json(args.input))
    _emit(io.dumps(io.banded_to_json(inverse_spectral_map(mu, args.tol))), args)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    data = io.load_json(args.input)
    if io.detect_kind(data) == "measure":
        mu = io.measure_from_json(data)
        J = inverse_spectral_map(mu, args.tol)
    else:
        M, k = io.dense_from_json(data, args.k)
        J = validate_banded(M, k, args.tol)
        mu = spectral_map(J, args.tol, args.merge_tol)
    J2 = inverse_spectral_map(spectral_map(J, args.tol, args.merge_tol), args.tol)
    mu2 = spectral_map(inverse_spectral_map(mu, args.tol), args.tol, args.merge_tol)
    rep = {"psi_phi_block_error": banded_distance(J, J2), "phi_psi_atom_error": measure_distance(mu, mu2)}
    _emit(io.dumps(rep), args)
    return EXIT_OK


def cmd_lanczos(args) -> int:
    M, k = io.dense_from_json(io.load_json(args.input), args.k)
    N = M.shape[0]
    if args.seed is None:
        V = np.eye(N, k, dtype=complex)
    else:
        rng = np.random.default_rng(args.seed)
        V = rng.standard_normal((N, k)) + 1j * rng.standard_normal((N, k))
    out = block_lanczos(M, V, reorth=args.reorth == "on", tol=args.tol)
    rep = {"k": k, "N": N,
           "A": [io.encode_matrix(a) for a in out.A],
           "B": [io.encode_matrix(b) for b in out.B[: len(out.A) - 1]],
           "completed": out.completed, "terminated_early": out.terminated_early,
           "steps": out.steps, "widths": out.widths[: len(out.A)]}
    _emit(io.dumps(rep), args)
    return EXIT_OK


def cmd_householder(args) -> int:
    M, k = io.dense_from_json(io.load_json(args.input), args.k)
    _emit(io.dumps(io.banded_to_json(householder_blocktridiag(M, k, args.tol))), args)
    return EXIT_OK


def cmd_equivalence(args) -> int:
    M, k = io.dense_from_json(io.load_json(args.input), args.k)
    rep = equivalence_check(M, k, rank_tol=args.tol, reorth=args.reorth == "on")
    _emit(io.dumps(rep.as_dict()), args)
    return EXIT_OK


def _toda_methods(method):
    return ["qr", "spectral", "rk4"] if method == "compare" else [method]


def cmd_toda(args) -> int:
    X0 = _load_banded(args)
    D0 = X0.to_dense()
    times = [args.t * (i + 1) / args.samples for i in range(args.samples)]
    lines, rows = [], []
    for t in times:
        states = {}
        for m in _toda_methods(args.method):
            if m == "qr":
                Xt = toda_qr_flow(X0, t, args.tol).dense()
            elif m == "spectral":
                Xt = toda_spectral_flow(X0, t, args.tol).to_dense()
            else:
                Xt = toda_rk4_oracle(X0, t, args.dt)
            states[m] = Xt
            drift = eigenvalue_drift(D0, Xt)
            lines.append(io.dumps({"t": t, "X": io.encode_matrix(Xt), "eig_drift": drift, "method": m}))
            rows.append([t, m, drift] + [v for z in Xt[np.tril_indices(X0.N)] for v in (z.real, z.imag)])
        if len(states) > 1:
            names = list(states)
            pair = {f"{a}-{b}": float(np.abs(states[a] - states[b]).max())
                    for i, a in enumerate(names) for b in names[i + 1:]}
            lines.append(io.dumps({"t": t, "method": "compare", "pairwise_max_abs_error": pair}))
    _emit("\n".join(lines), args)
    if args.csv:
        il, jl = np.tril_indices(X0.N)
        header = ["t", "method", "eig_drift"] + [f"X_{i}_{j}_{p}" for i, j in zip(il, jl) for p in ("re", "im")]
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows([[v if isinstance(v, str) else repr(float(v)) for v in r] for r in rows])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bandedspec",
                                description="Spectral tools for banded Hermitian matrices.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="JSON file with a matrix or a measure")
    common.add_argument("--k", type=int, default=None, help="block size (overrides the file)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative rank tolerance")
    common.add_argument("--merge-tol", type=float, default=MERGE_TOL,
                        help="relative distance below which eigenvalues are one atom")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="class-membership report")
    sub.add_parser("spectral", parents=[common], help="spectral measure of a banded matrix")
    sub.add_parser("inverse", parents=[common], help="banded matrix of a measure")
    sub.add_parser("roundtrip", parents=[common], help="errors of both round trips")
    lz = sub.add_parser("lanczos", parents=[common], help="block Lanczos reduction")
    lz.add_argument("--seed", type=int, default=None, help="random start block (default: first k unit vectors)")
    lz.add_argument("--reorth", choices=["on", "off"], default="on")
    sub.add_parser("householder", parents=[common], help="Householder block reduction")
    eq = sub.add_parser("equivalence", parents=[common], help="Lanczos vs Householder report")
    eq.add_argument("--reorth", choices=["on", "off"], default="on")
    td = sub.add_parser("toda", parents=[common], help="Toda flow trajectory (JSON lines)")
    td.add_argument("--t", type=float, required=True, help="final time")
    td.add_argument("--dt", type=float, default=1e-3, help="RK4 step")
    td.add_argument("--method", choices=["qr", "spectral", "rk4", "compare"], default="qr")
    td.add_argument("--samples", type=int, default=1, help="number of equally spaced output times")
    td.add_argument("--csv", default=None, help="also write the trajectory as CSV")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "spectral": cmd_spectral,
    "inverse": cmd_inverse,
    "roundtrip": cmd_roundtrip,
    "lanczos": cmd_lanczos,
    "householder": cmd_householder,
    "equivalence": cmd_equivalence,
    "toda": cmd_toda,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 1) < 1:
        print("error: --samples must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
