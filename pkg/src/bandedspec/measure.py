"""Finitely supported matrix-valued measures.

A measure is ``sum_j W_j delta_{x_j}`` with ``W_j`` Hermitian PSD ``k x k``.
Each weight is stored together with a canonical factor ``V_j`` (``k x n_j``,
full column rank, ``W_j = V_j V_j^*``).  Factors are only defined up to a
right unitary; the canonical choice is: columns are eigenvectors of ``W_j``
scaled by the square roots of the eigenvalues, in descending eigenvalue
order, with the first nonzero entry of each column real and positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotPSD, SingularTotalMass
from .linalg import DEFAULT_TOL, as_complex_matrix, cholesky, rank_with_tol
from .polynomial import MatrixPolynomial, as_polynomial

MERGE_TOL = 1e-9


def weight_factors(W, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Canonical full-column-rank factor ``V`` of a PSD weight, ``W = V V*``.

    Eigenvalues below ``tol`` times the largest are discarded, so the
    number of columns is the numerical rank of ``W``.
    """
    W = as_complex_matrix(W, "weight")
    k = W.shape[0]
    if W.shape != (k, k):
        raise DimensionMismatch(f"weight must be square, got {W.shape}")
    H = 0.5 * (W + W.conj().T)
    lam, U = np.linalg.eigh(H)
    top = lam[-1] if k else 0.0
    scale = max(top, np.abs(lam).max() if k else 0.0)
    if k and lam[0] < -tol * scale:
        raise NotPSD(f"weight has negative eigenvalue {lam[0]:.3e}")
    if top <= 0.0:
        return np.zeros((k, 0), dtype=complex)
    keep = np.flatnonzero(lam > tol * top)[::-1]
    V = U[:, keep] * np.sqrt(lam[keep])[None, :]
    for c in range(V.shape[1]):
        col = V[:, c]
        nz = np.flatnonzero(np.abs(col) > tol * np.abs(col).max())
        lead = col[nz[0]]
        V[:, c] = col * (abs(lead) / lead)
    return V


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MatrixMeasure:
    """Atomic ``k x k`` matrix measure; use the ``from_*`` constructors."""

    points: np.ndarray
    weights: np.ndarray  # (m, k, k)
    factors: tuple = field(repr=False)

    @classmethod
    def from_weights(cls, points, weights, tol: float = DEFAULT_TOL,
                     merge_tol: float = MERGE_TOL) -> "MatrixMeasure":
        """Build from raw atoms.

        Points are sorted; points closer than ``merge_tol`` times the spread
        of the support (or than 64 ulps of the largest point) are merged and
        their weights summed.  Atoms whose
        weight has numerical rank zero are dropped.
        """
        x = np.asarray(points, dtype=float).ravel()
        W = np.asarray(weights, dtype=complex)
        if W.ndim != 3 or W.shape[0] != x.size or W.shape[1] != W.shape[2]:
            raise DimensionMismatch(f"need m points and (m, k, k) weights, got {x.shape}, {W.shape}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(W))):
            raise ValueError("measure has non-finite data")
        k = W.shape[1]
        order = np.argsort(x, kind="stable")
        x, W = x[order], W[order]
        spread = x[-1] - x[0] if x.size else 0.0
        # the roundoff floor matters only when all points coincide (spread ~ 0)
        gap = max(merge_tol * spread, 64 * np.finfo(float).eps * np.abs(x).max()) if x.size else 0.0
        pts, ws = [], []
        for xi, Wi in zip(x, W):
            if pts and xi - pts[-1][-1] <= gap:
                pts[-1].append(xi)
                ws[-1] = ws[-1] + Wi
            else:
                pts.append([xi])
                ws.append(Wi.copy())
        keep_x, keep_w, keep_v = [], [], []
        for group, Wg in zip(pts, ws):
            Wg = 0.5 * (Wg + Wg.conj().T)
            V = weight_factors(Wg, tol)
            if V.shape[1] == 0:
                continue
            keep_x.append(float(np.mean(group)))
            keep_w.append(Wg)
            keep_v.append(_frozen(V))
        weights_arr = np.array(keep_w, dtype=complex).reshape(len(keep_w), k, k)
        return cls(_frozen(np.array(keep_x, dtype=float)), _frozen(weights_arr), tuple(keep_v))

    @classmethod
    def from_factors(cls, points, factors, tol: float = DEFAULT_TOL,
                     merge_tol: float = MERGE_TOL) -> "MatrixMeasure":
        """Build from ``V_j`` factors (weights ``V_j V_j^*``)."""
        Vs = [np.atleast_2d(np.asarray(V, dtype=complex)) for V in factors]
        W = np.array([V @ V.conj().T for V in Vs])
        return cls.from_weights(points, W, tol, merge_tol)

    @property
    def k(self) -> int:
        return self.weights.shape[1]

    @property
    def m(self) -> int:
        return self.points.size

    @property
    def ranks(self) -> tuple:
        return tuple(V.shape[1] for V in self.factors)

    @property
    def N(self) -> int:
        return sum(self.ranks)

    def total_mass(self) -> np.ndarray:
        return self.weights.sum(axis=0) if self.m else np.zeros((self.k, self.k), dtype=complex)

    def is_normalized(self, tol: float = DEFAULT_TOL) -> bool:
        return np.linalg.norm(self.total_mass() - np.eye(self.k)) <= tol * max(1.0, np.sqrt(self.k))

    def stacked_factors(self) -> np.ndarray:
        """``V`` (N x k) with ``V* = [V_1 ... V_m]``."""
        if not self.m:
            return np.zeros((0, self.k), dtype=complex)
        return np.concatenate([V.conj().T for V in self.factors], axis=0)

    def expanded_points(self) -> np.ndarray:
        """Diagonal of ``X``: each ``x_j`` repeated ``n_j`` times."""
        return np.repeat(self.points, self.ranks)


def measure_distance(mu: MatrixMeasure, nu: MatrixMeasure) -> float:
    """Largest atom-wise discrepancy (point or Frobenius weight error).

    Infinite when the supports have different sizes or dimensions.
    """
    if mu.m != nu.m or mu.k != nu.k:
        return float("inf")
    if mu.m == 0:
        return 0.0
    dx = np.abs(mu.points - nu.points).max()
    dw = max(np.linalg.norm(a - b) for a, b in zip(mu.weights, nu.weights))
    return float(max(dx, dw))


def quasi_inner(F, G, mu: MatrixMeasure) -> np.ndarray:
    """Right quasi-inner product ``sum_j F(x_j)* W_j G(x_j)``."""
    F, G = as_polynomial(F), as_polynomial(G)
    if F.shape[0] != mu.k or G.shape[0] != mu.k:
        raise DimensionMismatch(f"polynomials need {mu.k} rows, got {F.shape[0]} and {G.shape[0]}")
    Fx = F.evaluate_many(mu.points)
    Gx = G.evaluate_many(mu.points)
    return np.einsum("mki,mkl,mlj->ij", Fx.conj(), mu.weights, Gx)


def moment(mu: MatrixMeasure, i: int) -> np.ndarray:
    """``sum_j x_j**i W_j``."""
    if i < 0:
        raise ValueError("moment order must be non-negative")
    return np.einsum("m,mkl->kl", mu.points.astype(complex) ** i, mu.weights)


def krylov_matrix(mu: MatrixMeasure, d: int) -> np.ndarray:
    """``[V, X V, ..., X**d V]`` (N x (d+1)k) built from the canonical factors."""
    V = mu.stacked_factors()
    x = mu.expanded_points()
    blocks = [V]
    for _ in range(d):
        blocks.append(x[:, None] * blocks[-1])
    return np.concatenate(blocks, axis=1)


def krylov_rank(mu: MatrixMeasure, d: int, tol: float = DEFAULT_TOL) -> int:
    """Numerical rank of ``krylov_matrix(mu, d)``.

    The rank is invariant under affine changes of the variable, so it is
    computed with the support mapped into ``[-1, 1]``; this keeps the
    monomial columns comparable in size.
    """
    if mu.m == 0:
        return 0
    lo, hi = mu.points[0], mu.points[-1]
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo) if hi > lo else max(abs(centre), 1.0)
    shifted = MatrixMeasure(_frozen((mu.points - centre) / half), mu.weights, mu.factors)
    return rank_with_tol(krylov_matrix(shifted, d), tol)


@dataclass(frozen=True)
class MeasureClassReport:
    total_mass_ok: bool
    rank_sum: int
    krylov_rank: int
    member: bool
    n: int
    ell: int
    multiplicity_ok: bool = True
    points_ok: bool = True
    messages: tuple = ()

    def as_dict(self) -> dict:
        return {
            "total_mass_ok": bool(self.total_mass_ok),
            "rank_sum": int(self.rank_sum),
            "krylov_rank": int(self.krylov_rank),
            "member_of_MkN": bool(self.member),
            "n": int(self.n),
            "ell": int(self.ell),
            "multiplicity_ok": bool(self.multiplicity_ok),
            "points_ok": bool(self.points_ok),
            "messages": list(self.messages),
        }


def class_dimensions(k: int, N: int) -> tuple:
    """``(n, ell)`` with ``n = ceil(N / k)`` and ``N = n k - ell``."""
    if k < 1 or N < 1:
        raise ValueError("k and N must be positive")
    n = -(-N // k)
    return n, n * k - N


def validate_measure(mu: MatrixMeasure, k: int | None = None, N: int | None = None,
                     tol: float = DEFAULT_TOL) -> MeasureClassReport:
    """Check membership of ``mu`` in the class of spectral measures of size ``N``.

    Conditions: total mass ``I_k``; sum of weight ranks equals ``N``; every
    rank at most ``k``; distinct increasing points; and the Krylov matrices
    ``M_{n-2}`` and ``M_{n-1}`` have full rank (which fixes the null-space
    dimensions for every degree).  ``N`` defaults to the rank sum.
    """
    k = mu.k if k is None else k
    msgs = []
    if k != mu.k:
        msgs.append(f"measure is {mu.k}x{mu.k}, expected k={k}")
    rank_sum = mu.N
    N = rank_sum if N is None else N
    mass_ok = mu.k == k and mu.is_normalized(tol=max(tol, 1e-9))
    if not mass_ok:
        msgs.append("total mass differs from the identity")
    mult_ok = all(r <= k for r in mu.ranks)
    if not mult_ok:
        msgs.append("an atom has weight rank larger than k")
    pts_ok = bool(np.all(np.diff(mu.points) > 0))
    if not pts_ok:
        msgs.append("support points are not strictly increasing")
    if rank_sum != N:
        msgs.append(f"rank sum {rank_sum} differs from N={N}")
    if N < 1 or rank_sum < 1:
        return MeasureClassReport(mass_ok, rank_sum, 0, False, 0, 0, mult_ok, pts_ok,
                                  tuple(msgs + ["empty measure"]))
    n, ell = class_dimensions(k, N)
    if n == 1 and ell != 0:
        msgs.append(f"N={N} < k={k}: no banded class of this size")
    kr = krylov_rank(mu, n - 1, tol)
    krylov_ok = kr == N
    if n >= 2 and krylov_rank(mu, n - 2, tol) != (n - 1) * k:
        krylov_ok = False
        msgs.append(f"M_{n - 2} does not have full column rank")
    if kr != N:
        msgs.append(f"rank M_{n - 1} = {kr} < N={N}")
    member = (mass_ok and mult_ok and pts_ok and rank_sum == N and krylov_ok
              and not (n == 1 and ell != 0))
    return MeasureClassReport(mass_ok, rank_sum, kr, member, n, ell, mult_ok, pts_ok, tuple(msgs))


def normalize(mu: MatrixMeasure, tol: float = DEFAULT_TOL) -> MatrixMeasure:
    """Rescale to unit total mass: ``W_j -> L^{-1} W_j L^{-*}`` with ``M = L L*``."""
    try:
        L = cholesky(mu.total_mass(), tol=tol)
    except Exception as exc:
        raise SingularTotalMass("total mass is not positive definite") from exc
    factors = [np.linalg.solve(L, V) for V in mu.factors]
    return MatrixMeasure.from_factors(mu.points, factors, tol)


def polynomial_values(P: MatrixPolynomial, mu: MatrixMeasure) -> np.ndarray:
    """Stacked ``V_j^* P(x_j)`` (N x w); ``<F, G> = values(F)^* values(G)``."""
    vals = P.evaluate_many(mu.points)
    return np.concatenate([V.conj().T @ Px for V, Px in zip(mu.factors, vals)], axis=0)
