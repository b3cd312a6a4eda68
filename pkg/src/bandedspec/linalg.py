"""Dense complex linear-algebra kernels.

Every routine here fixes a sign or pivot convention: eigenvalues ascending,
QR factors with a positive real diagonal, echelon factors with positive real
pivots, Cholesky factors with a positive diagonal.  The banded-matrix and
orthogonal-polynomial code relies on these conventions for uniqueness.

Rank decisions are relative: a singular value (or eigenvalue, for PSD input)
counts as nonzero when it exceeds ``tol`` times the largest one.  The default
``DEFAULT_TOL`` can be overridden per call.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotPositiveDefinite,
    NotPSD,
    RankDeficient,
)

DEFAULT_TOL = 1e-10


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(M, name="matrix") -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} has non-finite entries")
    return A


def hermitian_defect(M: np.ndarray) -> float:
    """Relative Frobenius distance ``||M - M*|| / ||M||`` (0 for the zero matrix)."""
    scale = np.linalg.norm(M)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(M - M.conj().T) / scale)


def check_hermitian(M, tol: float = DEFAULT_TOL, name="matrix") -> np.ndarray:
    """Return ``M`` as a symmetrized complex array, or raise ``NotHermitian``."""
    A = as_complex_matrix(M, name)
    if A.shape[0] != A.shape[1]:
        raise NotHermitian(f"{name} is not square: shape {A.shape}")
    defect = hermitian_defect(A)
    if defect > tol:
        raise NotHermitian(f"{name} is not Hermitian (relative defect {defect:.3e})")
    return 0.5 * (A + A.conj().T)


def _fix_column_phases(U: np.ndarray) -> np.ndarray:
    # largest-modulus entry of each column made real positive (first one on ties)
    idx = np.argmax(np.abs(U) > np.abs(U).max(axis=0) * (1 - 1e-12), axis=0)
    lead = U[idx, np.arange(U.shape[1])]
    phases = np.where(lead == 0, 1.0, lead / np.abs(lead))
    return U / phases


def hermitian_eig(M, tol: float = DEFAULT_TOL) -> HermitianEig:
    """Eigendecomposition ``M = U diag(lam) U*`` with ``lam`` ascending.

    Column phases are normalized so that the largest-modulus entry of each
    eigenvector is real and positive; this makes the output reproducible but
    carries no mathematical meaning for repeated eigenvalues.
    """
    A = check_hermitian(M, tol)
    lam, U = np.linalg.eigh(A)
    order = np.argsort(lam, kind="stable")
    return HermitianEig(lam[order], _fix_column_phases(U[:, order]))


def rank_with_tol(A, tol: float = DEFAULT_TOL, psd: bool = False) -> int:
    """Numerical rank relative to the largest singular value (or eigenvalue)."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return 0
    if psd:
        vals = np.linalg.eigvalsh(0.5 * (A + A.conj().T))
    else:
        vals = np.linalg.svd(A, compute_uv=False)
    top = vals.max()
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(vals > tol * top))


def qr_positive(M, tol: float = DEFAULT_TOL):
    """Thin QR of a full-column-rank matrix with ``diag(R)`` real and positive.

    This is the unique QR factorization; ``RankDeficient`` is raised when a
    diagonal entry of ``R`` falls below ``tol`` times the largest one.
    """
    A = as_complex_matrix(M)
    m, n = A.shape
    if n > m:
        raise RankDeficient(f"{m}x{n} matrix cannot have full column rank")
    Q, R = np.linalg.qr(A, mode="reduced")
    d = np.diag(R)
    mags = np.abs(d)
    if n and (mags.max() == 0.0 or mags.min() <= tol * mags.max()):
        raise RankDeficient("matrix is numerically rank deficient")
    phases = d / mags
    Q = Q * phases[None, :]
    R = phases.conj()[:, None] * R
    R[np.diag_indices(n)] = mags
    return Q, np.triu(R)


def echelon_qr(M, atol: float):
    """Rank-revealing factorization ``M = Q R`` with ``R`` in row echelon form.

    Columns are scanned left to right.  A column becomes a pivot column when
    the part of it below the current row has norm larger than ``atol``; a
    phased Householder reflector then maps that part onto a positive real
    multiple of the current row's unit vector.  Sub-columns at or below
    ``atol`` are treated as zero and cleared.

    Returns ``Q`` (m x r, orthonormal columns) and ``R`` (r x n, row echelon
    with positive real pivots), where ``r`` is the number of pivots found.
    """
    R = as_complex_matrix(M).copy()
    m, n = R.shape
    G = np.eye(m, dtype=complex)
    row = 0
    for col in range(n):
        if row == m:
            break
        v = R[row:, col]
        nrm = np.linalg.norm(v)
        if nrm <= atol:
            R[row:, col] = 0.0
            continue
        v1 = v[0]
        s = v1 / abs(v1) if v1 != 0 else 1.0
        u = v.copy()
        u[0] += s * nrm
        w = u / np.linalg.norm(u)
        R[row:, col:] -= 2.0 * np.outer(w, w.conj() @ R[row:, col:])
        G[row:, :] -= 2.0 * np.outer(w, w.conj() @ G[row:, :])
        # reflector leaves -s*nrm in the pivot; rotate it onto the positive axis
        R[row, :] *= -np.conj(s)
        G[row, :] *= -np.conj(s)
        R[row, col] = nrm
        R[row + 1 :, col] = 0.0
        row += 1
    return G.conj().T[:, :row], R[:row]


def pivot_columns(R, atol: float = 0.0) -> list:
    """Column index of the leading entry of each row (``None`` for zero rows)."""
    R = np.asarray(R)
    pivots = []
    for r in R:
        nz = np.flatnonzero(np.abs(r) > atol)
        pivots.append(int(nz[0]) if nz.size else None)
    return pivots


def is_row_echelon(R, atol: float = 0.0) -> bool:
    """True when ``R`` has strictly increasing pivots that are real and positive."""
    R = np.asarray(R)
    pivots = pivot_columns(R, atol)
    last = -1
    for i, p in enumerate(pivots):
        if p is None or p <= last:
            return False
        piv = R[i, p]
        if abs(piv.imag) > atol or piv.real <= atol:
            return False
        last = p
    return True


def ref_factor(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unique row-echelon factor ``R`` (r x n, positive pivots) with ``A = R* R``.

    ``A`` must be Hermitian positive semidefinite; ``r`` is its numerical rank.
    The factor is obtained from ``X = Lambda_+^{1/2} U_+^*`` (so that
    ``A = X* X``) by reducing ``X`` to echelon form with ``echelon_qr``.
    """
    H = check_hermitian(A, tol)
    n = H.shape[0]
    lam, U = np.linalg.eigh(H)
    top = lam.max() if n else 0.0
    if top <= 0.0:
        if n and lam.min() < -tol * max(np.abs(lam).max(), 1.0):
            raise NotPSD("matrix has negative eigenvalues")
        return np.zeros((0, n), dtype=complex)
    if lam.min() < -tol * top:
        raise NotPSD(f"negative eigenvalue {lam.min():.3e} (largest {top:.3e})")
    keep = lam > tol * top
    X = np.sqrt(lam[keep])[:, None] * U[:, keep].conj().T
    _, R = echelon_qr(X, atol=tol * np.linalg.norm(X))
    return R


def cholesky(A, tol: float = 0.0) -> np.ndarray:
    """Lower-triangular ``L`` with positive diagonal such that ``A = L L*``.

    With ``tol > 0`` the smallest eigenvalue must also exceed ``tol`` times
    the largest; otherwise only numerical positive definiteness is required.
    """
    H = check_hermitian(A, max(tol, DEFAULT_TOL))
    if tol > 0.0:
        lam = np.linalg.eigvalsh(H)
        if lam[0] <= tol * max(lam[-1], 0.0) or lam[-1] <= 0.0:
            raise NotPositiveDefinite(f"smallest eigenvalue {lam[0]:.3e} too small")
    try:
        L = np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    if not np.all(np.isfinite(L)) or np.any(np.diag(L).real <= 0.0):
        raise NotPositiveDefinite("Cholesky factor has a non-positive pivot")
    return L


def right_pseudoinverse(B, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``B* (B B*)^{-1}`` for a full-row-rank ``B`` (r x n, r <= n)."""
    B = as_complex_matrix(B)
    r, n = B.shape
    if r > n or rank_with_tol(B, tol) < r:
        raise RankDeficient(f"{r}x{n} matrix does not have full row rank")
    G = B @ B.conj().T
    return B.conj().T @ np.linalg.solve(G, np.eye(r))


def hermitian_sqrt(G, inverse: bool = False, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Principal (PSD) square root of a Hermitian PSD matrix, or its inverse."""
    lam, U = np.linalg.eigh(check_hermitian(G, tol))
    if lam.size and lam.min() < -tol * max(lam.max(), 0.0):
        raise NotPSD("matrix is not positive semidefinite")
    lam = np.clip(lam, 0.0, None)
    if inverse:
        if lam.size and lam.min() <= tol * lam.max():
            raise RankDeficient("matrix is singular; inverse square root undefined")
        d = 1.0 / np.sqrt(lam)
    else:
        d = np.sqrt(lam)
    return (U * d[None, :]) @ U.conj().T


def hermitian_expm(M, t: float = 1.0, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``exp(t M)`` for Hermitian ``M`` via its eigendecomposition."""
    lam, U = hermitian_eig(M, tol)
    return (U * np.exp(t * lam)[None, :]) @ U.conj().T
