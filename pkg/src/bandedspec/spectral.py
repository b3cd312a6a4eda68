"""Banded Hermitian matrices, their spectral measures, and reconstruction.

``BandedHermitian`` stores the blocks of an ``N x N`` Hermitian block
tridiagonal matrix with block size ``k``: ``n = ceil(N / k)`` diagonal blocks
(the last one ``(k-ell) x (k-ell)``, ``N = n k - ell``) and ``n - 1``
subdiagonal blocks (the last one ``(k-ell) x k``).  Membership in the class
additionally requires every subdiagonal block to be in row echelon form with
positive real pivots and full row rank; ``validate_banded`` checks that.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BandViolation,
    DimensionMismatch,
    NotInClass,
    PivotViolation,
    RankViolation,
)
from .linalg import DEFAULT_TOL, check_hermitian, hermitian_eig, pivot_columns, right_pseudoinverse
from .measure import MERGE_TOL, MatrixMeasure, class_dimensions, validate_measure
from .orthopoly import orthonormal_family
from .polynomial import MatrixPolynomial

__all__ = [
    "BandedHermitian",
    "block_slices",
    "selection_block",
    "extract_blocks",
    "validate_banded",
    "to_dense",
    "banded_distance",
    "spectral_measure",
    "spectral_map",
    "inverse_spectral_map",
    "lanczos_polynomials",
]


def block_slices(k: int, N: int) -> list:
    """Row/column ranges of the ``n`` diagonal blocks."""
    n, _ = class_dimensions(k, N)
    return [slice(j * k, min((j + 1) * k, N)) for j in range(n)]


def selection_block(N: int, k: int, j: int) -> np.ndarray:
    """``E_j`` (1-based): the identity columns of the ``j``-th block."""
    n, _ = class_dimensions(k, N)
    if not 1 <= j <= n:
        raise ValueError(f"block index {j} outside 1..{n}")
    s = block_slices(k, N)[j - 1]
    return np.eye(N, dtype=complex)[:, s]


@dataclass(frozen=True)
class BandedHermitian:
    """Blocks ``A_0..A_{n-1}`` (diagonal) and ``B_0..B_{n-2}`` (below the diagonal)."""

    k: int
    N: int
    A: tuple
    B: tuple

    def __post_init__(self):
        n, ell = class_dimensions(self.k, self.N)
        if n == 1 and ell:
            raise DimensionMismatch(f"N={self.N} is smaller than the block size k={self.k}")
        sizes = [self.k] * (n - 1) + [self.k - ell]
        A = tuple(np.array(a, dtype=complex) for a in self.A)
        B = tuple(np.array(b, dtype=complex) for b in self.B)
        if len(A) != n or len(B) != n - 1:
            raise DimensionMismatch(f"expected {n} diagonal and {n - 1} subdiagonal blocks")
        for j, a in enumerate(A):
            if a.shape != (sizes[j], sizes[j]):
                raise DimensionMismatch(f"A_{j} has shape {a.shape}, expected {(sizes[j],) * 2}")
        for j, b in enumerate(B):
            if b.shape != (sizes[j + 1], sizes[j]):
                raise DimensionMismatch(f"B_{j} has shape {b.shape}, expected {(sizes[j + 1], sizes[j])}")
        for arr in A + B:
            arr.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return len(self.A)

    @property
    def ell(self) -> int:
        return self.n * self.k - self.N

    def to_dense(self) -> np.ndarray:
        J = np.zeros((self.N, self.N), dtype=complex)
        sl = block_slices(self.k, self.N)
        for j, a in enumerate(self.A):
            J[sl[j], sl[j]] = a
        for j, b in enumerate(self.B):
            J[sl[j + 1], sl[j]] = b
            J[sl[j], sl[j + 1]] = b.conj().T
        return J


def to_dense(J: BandedHermitian) -> np.ndarray:
    return J.to_dense()


def banded_distance(J1: BandedHermitian, J2: BandedHermitian) -> float:
    """Largest block-wise Frobenius difference (infinite if the shapes differ)."""
    if (J1.k, J1.N) != (J2.k, J2.N):
        return float("inf")
    errs = [np.linalg.norm(a - b) for a, b in zip(J1.A + J1.B, J2.A + J2.B)]
    return float(max(errs))


def extract_blocks(M, k: int) -> BandedHermitian:
    """Read the block tridiagonal part of a dense matrix without any checks."""
    M = np.asarray(M, dtype=complex)
    N = M.shape[0]
    sl = block_slices(k, N)
    A = [0.5 * (M[s, s] + M[s, s].conj().T) for s in sl]
    B = [M[sl[j + 1], sl[j]] for j in range(len(sl) - 1)]
    return BandedHermitian(k, N, tuple(A), tuple(B))


def _check_echelon(b, j, atol, violations):
    """Record problems with one subdiagonal block; return the cleaned block."""
    b = b.copy()
    pivots = pivot_columns(b, atol)
    last = -1
    for i, p in enumerate(pivots):
        if p is None:
            violations.append(("rank", f"B_{j} row {i} is zero"))
            continue
        if p <= last:
            violations.append(("pivot", f"B_{j} row {i} has its leading entry in column {p}, "
                                        f"not right of column {last}"))
        piv = b[i, p]
        if abs(piv.imag) > atol or piv.real <= 0.0:
            violations.append(("pivot", f"B_{j} pivot ({i}, {p}) = {piv:.3g} is not positive real"))
        else:
            b[i, p] = piv.real
        b[i, :p] = 0.0
        last = max(last, p)
    return b


def validate_banded(M, k: int, tol: float = DEFAULT_TOL) -> BandedHermitian:
    """Check that a dense matrix belongs to the banded class and return its blocks.

    Entries whose modulus is at most ``tol * ||M||_F`` count as zero; they are
    cleared in the returned blocks (outside the band, left of echelon pivots,
    imaginary parts of pivots).  All violations are collected; the raised
    error class follows the most basic failure: ``BandViolation`` (nonzero
    outside the block tridiagonal pattern), then ``RankViolation`` (zero row
    in a subdiagonal block), then ``PivotViolation`` (not in echelon form, or
    a pivot that is not positive real).
    """
    H = check_hermitian(M, tol)
    N = H.shape[0]
    n, ell = class_dimensions(k, N)
    if n == 1 and ell:
        raise DimensionMismatch(f"N={N} is smaller than the block size k={k}")
    atol = tol * np.linalg.norm(H)
    sl = block_slices(k, N)
    block_of = np.repeat(np.arange(n), [s.stop - s.start for s in sl])
    outside = np.abs(block_of[:, None] - block_of[None, :]) > 1
    violations = []
    bad = np.argwhere(outside & (np.abs(H) > atol))
    for i, j in bad[:10]:
        violations.append(("band", f"entry ({i}, {j}) = {H[i, j]:.3g} lies outside the band"))
    if len(bad) > 10:
        violations.append(("band", f"... {len(bad) - 10} more entries outside the band"))
    A = [0.5 * (H[s, s] + H[s, s].conj().T) for s in sl]
    B = [_check_echelon(H[sl[j + 1], sl[j]], j, atol, violations) for j in range(n - 1)]
    if violations:
        kinds = {v[0] for v in violations}
        msg = "; ".join(v[1] for v in violations)
        for kind, cls in (("band", BandViolation), ("rank", RankViolation), ("pivot", PivotViolation)):
            if kind in kinds:
                raise cls(msg, violations)
    return BandedHermitian(k, N, tuple(A), tuple(B))


def spectral_measure(M, k: int, tol: float = DEFAULT_TOL,
                     merge_tol: float = MERGE_TOL) -> MatrixMeasure:
    """Eigenvalues of ``M`` with weights built from the first ``k`` eigenvector rows.

    Eigenvalues closer than ``merge_tol`` times the spectral spread are one
    atom; its weight is ``V V*`` with ``V`` the first ``k`` rows of all the
    eigenvectors in the group.
    """
    lam, U = hermitian_eig(M, tol)
    top = U[:k, :]
    W = np.einsum("ki,li->ikl", top, top.conj())
    return MatrixMeasure.from_weights(lam, W, tol=tol, merge_tol=merge_tol)


def spectral_map(J: BandedHermitian, tol: float = DEFAULT_TOL,
                 merge_tol: float = MERGE_TOL) -> MatrixMeasure:
    return spectral_measure(J.to_dense(), J.k, tol, merge_tol)


def inverse_spectral_map(mu: MatrixMeasure, tol: float = DEFAULT_TOL,
                         method: str = "recurrence") -> BandedHermitian:
    """Rebuild the banded matrix whose spectral measure is ``mu``.

    The blocks are the recurrence coefficients of the canonical orthonormal
    polynomials of ``mu``.  Raises ``NotInClass`` when ``mu`` fails the
    membership test.
    """
    report = validate_measure(mu, tol=tol)
    if not report.member:
        raise NotInClass("measure is not the spectral measure of a banded matrix: "
                         + "; ".join(report.messages), report)
    fam = orthonormal_family(mu, method=method, tol=tol)
    return BandedHermitian(mu.k, mu.N, tuple(fam.A), tuple(fam.B))


def lanczos_polynomials(J: BandedHermitian, tol: float = DEFAULT_TOL) -> list:
    """``P_0 .. P_{n-1}`` from the blocks of ``J`` (so that ``P_j(J) E_1 = E_{j+1}``).

    ``P_{j+1} = (x P_j - P_j A_j - P_{j-1} B_{j-1}^*) B_j^+`` with the right
    inverse of ``B_j``.
    """
    k = J.k
    P = [MatrixPolynomial.identity(k)]
    for j in range(J.n - 1):
        nxt = P[j].times_x() - P[j] @ J.A[j]
        if j >= 1:
            nxt = nxt - P[j - 1] @ J.B[j - 1].conj().T
        P.append(nxt @ right_pseudoinverse(J.B[j], tol))
    return P
