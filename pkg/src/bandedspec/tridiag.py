"""Block tridiagonalization: block Lanczos and Householder block reduction.

Both reductions started from the first ``k`` coordinate vectors produce the
same banded matrix whenever the block Krylov space of ``A`` is full, because
the two results share their spectral measure.  ``equivalence_check`` runs
both and reports how far apart they are.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import Incomparable, NumericalError, RankZeroStart, ValidationError
from .linalg import DEFAULT_TOL, check_hermitian, echelon_qr
from .measure import class_dimensions
from .spectral import (
    BandedHermitian,
    banded_distance,
    extract_blocks,
    inverse_spectral_map,
    spectral_measure,
)

__all__ = [
    "LanczosOutput",
    "block_lanczos",
    "householder_blocktridiag",
    "EquivalenceReport",
    "equivalence_check",
]


@dataclass
class LanczosOutput:
    """Blocks and basis produced by block Lanczos.

    ``V[j]`` is ``N x w_j``; ``A[j]`` is ``w_j x w_j``; ``B[j]`` is
    ``w_{j+1} x w_j``.  ``completed`` means the basis spans the whole space
    with block widths ``k, ..., k, k - ell``.
    """

    k: int
    N: int
    A: list
    B: list
    V: list
    completed: bool
    terminated_early: bool
    steps: int
    residual_norm: float = 0.0

    @property
    def widths(self) -> list:
        return [v.shape[1] for v in self.V]

    def basis(self) -> np.ndarray:
        return np.concatenate(self.V, axis=1)

    def to_dense(self) -> np.ndarray:
        """Block tridiagonal matrix assembled from the computed blocks."""
        w = np.cumsum([0] + self.widths[: len(self.A)])
        J = np.zeros((w[-1], w[-1]), dtype=complex)
        for j, a in enumerate(self.A):
            J[w[j]:w[j + 1], w[j]:w[j + 1]] = a
        for j, b in enumerate(self.B[: len(self.A) - 1]):
            J[w[j + 1]:w[j + 2], w[j]:w[j + 1]] = b
            J[w[j]:w[j + 1], w[j + 1]:w[j + 2]] = b.conj().T
        return J

    def to_banded(self) -> BandedHermitian:
        if not self.completed:
            raise Incomparable("block Lanczos terminated early; blocks do not form a full banded matrix")
        return BandedHermitian(self.k, self.N, tuple(self.A), tuple(self.B[: len(self.A) - 1]))


def _project_out(Z, basis, passes):
    for _ in range(passes):
        for Vi in basis:
            Z = Z - Vi @ (Vi.conj().T @ Z)
    return Z


def block_lanczos(A, V, steps: int | None = None, reorth: bool = True,
                  tol: float = DEFAULT_TOL) -> LanczosOutput:
    """Block Lanczos with rank-adaptive QR of each residual block.

    ``steps`` defaults to ``ceil(N / k)``.  A residual whose columns are all
    below ``tol * ||A||_2`` has rank 0 and ends the iteration early.  With
    ``reorth`` every residual is projected against all previous basis blocks
    (two passes).
    """
    H = check_hermitian(A, tol, "A")
    N = H.shape[0]
    V = np.asarray(V, dtype=complex)
    if V.ndim != 2 or V.shape[0] != N:
        raise ValueError(f"start block must be {N} x k, got {V.shape}")
    k = V.shape[1]
    n, ell = class_dimensions(k, N)
    steps = n if steps is None else steps
    scale = max(np.linalg.norm(H, 2), np.finfo(float).tiny)
    atol = tol * scale
    V1, _ = echelon_qr(V, atol=tol * max(np.linalg.norm(V, 2), np.finfo(float).tiny))
    if V1.shape[1] == 0:
        raise RankZeroStart("start block has numerical rank 0")
    if V1.shape[1] < k:
        raise RankZeroStart(f"start block has rank {V1.shape[1]} < k={k}")
    Vs, As, Bs = [V1], [], []
    early = False
    res = 0.0
    for j in range(steps):
        Z = H @ Vs[j]
        if j >= 1:
            Z = Z - Vs[j - 1] @ Bs[j - 1].conj().T
        Aj = Vs[j].conj().T @ Z
        Aj = 0.5 * (Aj + Aj.conj().T)
        As.append(Aj)
        Z = Z - Vs[j] @ Aj
        if reorth:
            Z = _project_out(Z, Vs, 2)
        Qz, Bj = echelon_qr(Z, atol)
        res = float(np.linalg.norm(Z, 2))
        if Qz.shape[1] == 0:
            early = sum(v.shape[1] for v in Vs) < N
            break
        if sum(v.shape[1] for v in Vs) + Qz.shape[1] > N:
            # numerically nonzero residual beyond a full basis: stop, keep the blocks
            break
        Bs.append(Bj)
        Vs.append(Qz)
    widths = [v.shape[1] for v in Vs]
    expected = [k] * (n - 1) + [k - ell]
    completed = widths == expected and len(As) == n
    return LanczosOutput(k, N, As, Bs, Vs, completed, early, len(As), res)


def householder_blocktridiag(A, k: int, tol: float = DEFAULT_TOL,
                             return_unitary: bool = False):
    """Householder reduction to block tridiagonal form with bandwidth ``k``.

    Column ``j`` is reduced below row ``k + j`` by the reflector
    ``I - 2 w w*``, ``w ~ v + s ||v|| e_1`` with ``s = v_1 / |v_1|``
    (``s = 1`` when ``v_1 = 0``), which maps ``v`` to ``-s ||v|| e_1``.  Row and
    column ``k + j`` are then rescaled by the unimodular factor ``-conj(s)``
    so that the new band entry is positive.  The result is the band part
    ``|i - j| <= k`` as a ``BandedHermitian`` (blocks are not validated).
    With ``return_unitary`` the accumulated unitary ``U`` with
    ``U* A U = J`` is also returned.
    """
    M = check_hermitian(A, tol, "A").copy()
    N = M.shape[0]
    class_dimensions(k, N)
    U = np.eye(N, dtype=complex)
    for j in range(max(N - k, 0)):
        r = k + j
        v = M[r:, j].copy()
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            continue
        s = v[0] / abs(v[0]) if v[0] != 0 else 1.0
        u = v.copy()
        u[0] += s * nrm
        w = u / np.linalg.norm(u)
        M[r:, j:] -= 2.0 * np.outer(w, w.conj() @ M[r:, j:])
        M[j:, r:] -= 2.0 * np.outer(M[j:, r:] @ w, w.conj())
        U[:, r:] -= 2.0 * np.outer(U[:, r:] @ w, w.conj())
        d = -np.conj(s)
        M[r, :] *= d
        M[:, r] *= np.conj(d)
        U[:, r] *= np.conj(d)
        M[r, j] = nrm
        M[j, r] = nrm
        M[r + 1:, j] = 0.0
        M[j, r + 1:] = 0.0
    M = 0.5 * (M + M.conj().T)
    idx = np.arange(N)
    M[np.abs(idx[:, None] - idx[None, :]) > k] = 0.0
    J = extract_blocks(M, k)
    return (J, U) if return_unitary else J


@dataclass
class EquivalenceReport:
    k: int
    N: int
    comparable: bool
    lanczos_completed: bool
    lanczos_steps: int
    block_errors: list = field(default_factory=list)
    max_error: float = float("nan")
    scaled_error: float = float("nan")
    tol: float = 1e-8
    agree: bool = False
    inverse_map_error: float | None = None
    messages: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "N": self.N,
            "comparable": bool(self.comparable),
            "lanczos_completed": bool(self.lanczos_completed),
            "lanczos_steps": int(self.lanczos_steps),
            "block_errors": [float(e) for e in self.block_errors],
            "max_error": float(self.max_error),
            "scaled_error": float(self.scaled_error),
            "tol": self.tol,
            "agree": bool(self.agree),
            "inverse_map_error": None if self.inverse_map_error is None else float(self.inverse_map_error),
            "messages": list(self.messages),
        }


def equivalence_check(A, k: int, tol: float = 1e-8, rank_tol: float = DEFAULT_TOL,
                      reorth: bool = True, cross_check: bool = True,
                      strict: bool = False) -> EquivalenceReport:
    """Compare block Lanczos (start ``I_{N x k}``) with the Householder reduction.

    Agreement means every block differs by at most ``tol * ||A||_2`` in
    Frobenius norm.  When Lanczos terminates early the report is marked
    not comparable (``Incomparable`` is raised instead if ``strict``).  With
    ``cross_check`` both are also compared with the matrix rebuilt from the
    spectral measure of ``A`` (first ``k`` coordinates); that error is
    reported but does not affect ``agree``.
    """
    H = check_hermitian(A, rank_tol, "A")
    N = H.shape[0]
    scale = max(np.linalg.norm(H, 2), np.finfo(float).tiny)
    lz = block_lanczos(H, np.eye(N, k, dtype=complex), reorth=reorth, tol=rank_tol)
    rep = EquivalenceReport(k, N, lz.completed, lz.completed, lz.steps, tol=tol)
    if not lz.completed:
        rep.messages.append(f"block Lanczos stopped after {lz.steps} steps with widths {lz.widths}")
        if strict:
            raise Incomparable(rep.messages[-1])
        return rep
    J1 = lz.to_banded()
    J2 = householder_blocktridiag(H, k, tol=rank_tol)
    errs = [np.linalg.norm(a - b) for a, b in zip(J1.A + J1.B, J2.A + J2.B)]
    rep.block_errors = errs
    rep.max_error = float(max(errs))
    rep.scaled_error = rep.max_error / scale
    rep.agree = rep.scaled_error <= tol
    if cross_check:
        try:
            J3 = inverse_spectral_map(spectral_measure(H, k, rank_tol), tol=rank_tol)
            rep.inverse_map_error = max(banded_distance(J1, J3), banded_distance(J2, J3)) / scale
        except (ValidationError, NumericalError) as exc:
            rep.messages.append(f"inverse-map cross-check unavailable: {exc}")
    return rep
