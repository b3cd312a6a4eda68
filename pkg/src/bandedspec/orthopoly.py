"""Matrix orthogonal polynomials of an atomic matrix measure.

Polynomials are carried in two forms at once: as coefficient lists
(``MatrixPolynomial``) and as their stacked values ``V_j^* P(x_j)`` at the
atoms.  Inner products are always taken from the values, which keeps every
step a finite sum over atoms and avoids forming moment (Hankel) matrices.
Each new polynomial is re-orthogonalized against the previous ones; the
correction is zero in exact arithmetic and is applied to both forms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotDefinite, RankMismatch
from .linalg import (
    DEFAULT_TOL,
    hermitian_sqrt,
    qr_positive,
    rank_with_tol,
    ref_factor,
    right_pseudoinverse,
)
from .measure import (
    MatrixMeasure,
    class_dimensions,
    krylov_rank,
    polynomial_values,
    quasi_inner,
)
from .polynomial import MatrixPolynomial

__all__ = [
    "MatrixPolynomial",
    "MonicData",
    "OrthonormalFamily",
    "poly_eval",
    "poly_apply",
    "monic_sequence",
    "orthonormal_sequence",
    "last_polynomial",
    "orthonormal_family",
    "residual_polynomials",
    "null_dimension",
]


def poly_eval(P: MatrixPolynomial, x: float) -> np.ndarray:
    return P(x)


def poly_apply(P: MatrixPolynomial, J, E) -> np.ndarray:
    """``sum_j J**j E C_j`` for ``P(x) = sum_j x**j C_j``."""
    return P.apply(J, E)


def _herm(M):
    return 0.5 * (M + M.conj().T)


@dataclass
class MonicData:
    """Monic recurrence data.

    ``gammas[j] = <Pi_j, Pi_j>`` for ``j <= n-1``; ``taus[j]`` is the
    coefficient of ``x**(j-1)`` in ``Pi_j``; ``C[j]`` for ``j <= n-2`` (and
    ``j = n-1`` when ``gammas[n-1]`` is invertible); ``D[j] =
    gammas[j-1]^{-1} gammas[j]`` for ``1 <= j <= n-1`` (``D[0] = gammas[0]``).
    """

    gammas: list
    taus: list
    C: list
    D: list


def _values_inner(a, b):
    return a.conj().T @ b


def _monic(mu, n, method, tol, reorth=True):
    if n < 1:
        raise ValueError("n must be at least 1")
    if method == "recurrence":
        return _monic_recurrence(mu, n, tol, reorth)
    if method == "gram_schmidt":
        return _monic_gram_schmidt(mu, n, tol)
    raise ValueError(f"unknown method {method!r}")


def monic_sequence(mu: MatrixMeasure, n: int, method: str = "recurrence",
                   tol: float = DEFAULT_TOL, reorth: bool = True):
    """Monic orthogonal polynomials ``Pi_0 .. Pi_{n-1}`` and their recurrence data.

    ``method="recurrence"`` uses the three-term recurrence
    ``Pi_{j+1} = x Pi_j - Pi_j C_j - Pi_{j-1} D_j``.  ``method="gram_schmidt"``
    orthogonalizes the monomials ``x**j I`` directly, evaluating every inner
    product from the coefficient form; it is an independent check of the
    recurrence.

    Raises ``NotDefinite`` when some ``gamma_j`` with ``j <= n-2`` is singular.
    """
    pis, gammas, vals = _monic(mu, n, method, tol, reorth)
    return pis, _monic_data(mu, pis, gammas, vals, tol)


def _monic_data(mu, pis, gammas, vals, tol):
    k, n = mu.k, len(pis)
    x = mu.expanded_points()[:, None]
    taus = [np.zeros((k, k), dtype=complex)]
    taus += [P.coeffs[j - 1] for j, P in enumerate(pis) if j >= 1]
    C, D = [], []
    for j in range(n):
        if j <= n - 2 or rank_with_tol(gammas[j], tol, psd=True) == k:
            C.append(np.linalg.solve(gammas[j], _values_inner(vals[j], x * vals[j])))
        prev = np.eye(k) if j == 0 else gammas[j - 1]
        D.append(np.linalg.solve(prev, gammas[j]))
    return MonicData(gammas, taus, C, D)


def _check_definite(gamma, j, k, tol):
    if rank_with_tol(gamma, tol, psd=True) < k:
        raise NotDefinite(f"gamma_{j} is singular; measure is not definite enough")


def _monic_recurrence(mu, n, tol, reorth):
    k = mu.k
    x = mu.expanded_points()[:, None]
    pis = [MatrixPolynomial.identity(k)]
    vals = [mu.stacked_factors()]
    gammas = [_herm(_values_inner(vals[0], vals[0]))]
    for j in range(n - 1):
        _check_definite(gammas[j], j, k, tol)
        xv = x * vals[j]
        Cj = np.linalg.solve(gammas[j], _values_inner(vals[j], xv))
        new_v = xv - vals[j] @ Cj
        new_p = pis[j].times_x() - pis[j] @ Cj
        if j >= 1:
            Dj = np.linalg.solve(gammas[j - 1], gammas[j])
            new_v = new_v - vals[j - 1] @ Dj
            new_p = new_p - pis[j - 1] @ Dj
        if reorth:
            for i in range(j + 1):
                c = np.linalg.solve(gammas[i], _values_inner(vals[i], new_v))
                new_v = new_v - vals[i] @ c
                new_p = new_p - pis[i] @ c
        vals.append(new_v)
        pis.append(new_p)
        gammas.append(_herm(_values_inner(new_v, new_v)))
    return pis, gammas, vals


def _monic_gram_schmidt(mu, n, tol):
    k = mu.k
    pis, gammas = [], []
    for j in range(n):
        P = MatrixPolynomial.monomial(j, k)
        for i in range(j):
            P = P - pis[i] @ np.linalg.solve(gammas[i], quasi_inner(pis[i], P, mu))
        gamma = _herm(quasi_inner(P, P, mu))
        if j <= n - 2:
            _check_definite(gamma, j, k, tol)
        pis.append(P)
        gammas.append(gamma)
    return pis, gammas, [polynomial_values(P, mu) for P in pis]


@dataclass
class OrthonormalFamily:
    """Canonical orthonormal polynomials and their block recurrence.

    ``P[j]`` for ``j <= n-1`` (the last one ``k x (k-ell)``), ``A[j]`` for
    ``j <= n-1``, ``B[j]`` for ``j <= n-2``; ``Q[j]`` are the normalizing
    unitaries with ``P_j = Pi_j gamma_j^{-1/2} Q_j`` for ``j <= n-2``.
    ``aux`` is the unnormalized degree ``n-1`` polynomial whose Gram matrix
    is ``B[n-2]^* B[n-2]`` (``None`` when ``n == 1``).
    """

    k: int
    N: int
    n: int
    ell: int
    P: list
    A: list
    B: list
    Q: list
    monic: MonicData
    aux: MatrixPolynomial | None
    values: list

    @property
    def last(self) -> MatrixPolynomial:
        return self.P[-1]


def _orthonormal_head(mu, n, method, tol):
    """P_0..P_{n-2}, A_0..A_{n-3}, B_0..B_{n-3}, Q_0..Q_{n-2} and their values."""
    pis, gammas, vals = _monic(mu, n, method, tol)
    monic = _monic_data(mu, pis, gammas, vals, tol)
    x = mu.expanded_points()[:, None]
    k = mu.k
    m = max(n - 1, 0)
    tilde_p, tilde_v = [], []
    for j in range(m):
        g = hermitian_sqrt(monic.gammas[j], inverse=True, tol=tol)
        tilde_p.append(pis[j] @ g)
        tilde_v.append(vals[j] @ g)
    P, V, Q, A, B = [], [], [], [], []
    if m:
        Q.append(np.eye(k, dtype=complex))
        P.append(tilde_p[0])
        V.append(tilde_v[0])
    for j in range(m - 1):
        A.append(_herm(_values_inner(V[j], x * V[j])))
        Qn, Bj = qr_positive(_values_inner(tilde_v[j + 1], x * V[j]), tol)
        Q.append(Qn)
        B.append(Bj)
        P.append(tilde_p[j + 1] @ Qn)
        V.append(tilde_v[j + 1] @ Qn)
    return P, V, Q, A, B, monic


def orthonormal_sequence(mu: MatrixMeasure, n: int | None = None,
                         method: str = "recurrence", tol: float = DEFAULT_TOL):
    """Orthonormal ``P_0 .. P_{n-2}`` with ``A_0 .. A_{n-3}``, ``B_0 .. B_{n-3}``.

    The normalizing unitaries are fixed by requiring every ``B_j`` to be
    upper triangular with a positive diagonal (``P_0 = I``).
    """
    if n is None:
        n, _ = class_dimensions(mu.k, mu.N)
    P, _, _, A, B, _ = _orthonormal_head(mu, n, method, tol)
    return P, A, B


def orthonormal_family(mu: MatrixMeasure, method: str = "recurrence",
                       tol: float = DEFAULT_TOL) -> OrthonormalFamily:
    """All orthonormal polynomials and recurrence blocks of ``mu``.

    ``N`` is the total weight rank of ``mu``; the last polynomial has
    ``k - ell`` columns where ``N = n k - ell``.
    """
    k, N = mu.k, mu.N
    n, ell = class_dimensions(k, N)
    x = mu.expanded_points()[:, None]
    if n == 1:
        if ell:
            raise RankMismatch(f"N={N} < k={k}")
        pis, monic = monic_sequence(mu, 1, method=method, tol=tol)
        v0 = mu.stacked_factors()
        A0 = _herm(_values_inner(v0, x * v0))
        return OrthonormalFamily(k, N, 1, 0, [pis[0]], [A0], [], [np.eye(k, dtype=complex)],
                                 monic, None, [v0])
    P, V, Q, A, B, monic = _orthonormal_head(mu, n, method, tol)
    # degree n-1: P~ = x P_{n-2} - P_{n-2} A_{n-2} - P_{n-3} B_{n-3}^*
    a_prev = _herm(_values_inner(V[-1], x * V[-1]))
    A.append(a_prev)
    aux = P[-1].times_x() - P[-1] @ a_prev
    aux_v = x * V[-1] - V[-1] @ a_prev
    if n >= 3:
        aux = aux - P[-2] @ B[-1].conj().T
        aux_v = aux_v - V[-2] @ B[-1].conj().T
    for Pi, Vi in zip(P, V):
        c = _values_inner(Vi, aux_v)
        aux = aux - Pi @ c
        aux_v = aux_v - Vi @ c
    gram = _herm(_values_inner(aux_v, aux_v))
    r = rank_with_tol(gram, tol, psd=True)
    if r != k - ell:
        raise RankMismatch(f"rank of the degree-{n - 1} Gram matrix is {r}, expected {k - ell}")
    B_last = ref_factor(gram, tol)
    if B_last.shape[0] != k - ell:
        raise RankMismatch(f"echelon factor has {B_last.shape[0]} rows, expected {k - ell}")
    pinv = right_pseudoinverse(B_last, tol)
    P.append(aux @ pinv)
    V.append(aux_v @ pinv)
    B.append(B_last)
    A.append(_herm(_values_inner(V[-1], x * V[-1])))
    return OrthonormalFamily(k, N, n, ell, P, A, B, Q, monic, aux, V)


def last_polynomial(mu: MatrixMeasure, method: str = "recurrence", tol: float = DEFAULT_TOL):
    """``(P_{n-1}, A_{n-2}, B_{n-2}, A_{n-1})`` for a measure of total rank N.

    ``B_{n-2}`` is the row-echelon factor (positive pivots) of the Gram matrix
    of ``x P_{n-2} - P_{n-2} A_{n-2} - P_{n-3} B_{n-3}^*`` and ``P_{n-1}`` is
    that polynomial times the right inverse of ``B_{n-2}``.  For ``n == 1``
    the middle two entries are ``None``.
    """
    fam = orthonormal_family(mu, method, tol)
    if fam.n == 1:
        return fam.P[0], None, None, fam.A[0]
    return fam.P[-1], fam.A[-2], fam.B[-1], fam.A[-1]


def residual_polynomials(fam: OrthonormalFamily):
    """``(R_{n-2}, R_{n-1})``: what the truncated recurrence leaves over.

    ``x P(x) = J P(x) + R(x)`` holds with only the last two block rows of
    ``R`` nonzero; both have zero quasi-norm under the measure.  For
    ``n == 1`` the first entry is ``None``.
    """
    P, A, B = fam.P, fam.A, fam.B
    n = fam.n
    last = P[n - 1].times_x() - P[n - 1] @ A[n - 1]
    if n == 1:
        return None, last
    last = last - P[n - 2] @ B[n - 2].conj().T
    prev = P[n - 2].times_x() - P[n - 2] @ A[n - 2] - P[n - 1] @ B[n - 2]
    if n >= 3:
        prev = prev - P[n - 3] @ B[n - 3].conj().T
    return prev, last


def null_dimension(mu: MatrixMeasure, d: int, tol: float = DEFAULT_TOL) -> int:
    """Dimension of the space of degree-``d`` vector polynomials with zero norm."""
    return (d + 1) * mu.k - krylov_rank(mu, d, tol)
