"""Toda flow ``dX/dt = X B(X) - B(X) X`` on banded Hermitian matrices.

Three solvers:

* ``toda_qr_flow``: ``exp(t X0) = Q R`` (positive diagonal ``R``), then
  ``X(t) = Q* X0 Q``.
* ``toda_spectral_flow``: evolve the spectral measure in closed form and
  rebuild the matrix from it.
* ``toda_rk4_oracle``: classical Runge-Kutta on the differential equation,
  an independent check on the other two.

``B(X) = X_- - X_-^*`` with ``X_-`` the strictly lower triangular part; for
real symmetric ``X`` this is the familiar ``X_- - X_-^T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, NotPositiveDefinite, SingularNormalizer, StepSizeTooLarge
from .linalg import DEFAULT_TOL, cholesky, hermitian_defect, hermitian_eig, qr_positive
from .measure import MatrixMeasure
from .spectral import BandedHermitian, inverse_spectral_map, spectral_map, validate_banded

__all__ = [
    "TodaSolution",
    "flow_generator",
    "pi_decomposition",
    "toda_qr_flow",
    "evolve_measure",
    "normalizer_from_r",
    "toda_spectral_flow",
    "toda_rk4_oracle",
    "eigenvalue_drift",
    "MAX_EXPONENT",
    "MAX_CONDITION",
]

# |t| * (largest - smallest eigenvalue) allowed before exp(t X0) is too skewed
MAX_EXPONENT = 40.0
# condition number of R beyond which the QR solution is refused
MAX_CONDITION = 1e12


def flow_generator(X) -> np.ndarray:
    """``B(X) = X_- - X_-^*`` (skew-Hermitian)."""
    X = np.asarray(X, dtype=complex)
    low = np.tril(X, -1)
    return low - low.conj().T


def pi_decomposition(X):
    """Split ``X`` into a skew-Hermitian part and an upper triangular part.

    The skew-Hermitian part has zero diagonal and agrees with ``X`` strictly
    below the diagonal, so for Hermitian ``X`` it is ``B(X)``.
    """
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"need a square matrix, got shape {X.shape}")
    S = flow_generator(X)
    return S, X - S


@dataclass
class TodaSolution:
    """State of the flow at time ``t`` and the factors that produced it."""

    t: float
    X: BandedHermitian
    Q: np.ndarray
    R: np.ndarray
    L: np.ndarray
    measure: MatrixMeasure
    similarity_residual: float

    def dense(self) -> np.ndarray:
        return self.X.to_dense()


def _guard(lam, t):
    spread = float(lam[-1] - lam[0]) if lam.size else 0.0
    if abs(t) * spread > MAX_EXPONENT:
        raise ConditioningError(
            f"|t| * spread = {abs(t) * spread:.3g} exceeds {MAX_EXPONENT}; exp(t X0) is too ill-conditioned")


def normalizer_from_r(R, k: int) -> np.ndarray:
    """``L`` with ``L^{-1}`` the leading ``k x k`` block of ``R^{-*}``."""
    R = np.asarray(R, dtype=complex)
    Linv = np.linalg.inv(R).conj().T[:k, :k]
    return np.linalg.inv(Linv)


def toda_qr_flow(X0: BandedHermitian, t: float, tol: float = DEFAULT_TOL,
                 max_condition: float = MAX_CONDITION) -> TodaSolution:
    """Solve the flow through the QR factorization of ``exp(t X0)``.

    ``X(t) = Q* X0 Q``; the second form ``R X0 R^{-1}`` is computed too and
    their relative difference is stored as ``similarity_residual``.  The
    measure of ``X(t)`` is obtained from ``R`` (``L = R_11^*``), not by
    diagonalizing ``X(t)``.
    """
    D = X0.to_dense()
    lam, U = hermitian_eig(D, tol)
    _guard(lam, t)
    if t == 0:
        N = X0.N
        I = np.eye(N, dtype=complex)
        return TodaSolution(0.0, X0, I, I, np.eye(X0.k, dtype=complex), spectral_map(X0, tol), 0.0)
    # shift by the largest exponent so exp stays in range; R scales by a constant
    shift = max(t * lam[0], t * lam[-1])
    E = (U * np.exp(t * lam - shift)[None, :]) @ U.conj().T
    Q, R = qr_positive(E, tol=0.0)
    cond = np.linalg.cond(R)
    if not np.isfinite(cond) or cond > max_condition:
        raise ConditioningError(f"condition number of R is {cond:.3g}")
    Xt = Q.conj().T @ D @ Q
    Xt = 0.5 * (Xt + Xt.conj().T)
    Xr = R @ np.linalg.solve(R.T, D.T).T
    scale = max(np.linalg.norm(D), np.finfo(float).tiny)
    resid = float(np.linalg.norm(Xt - Xr) / scale)
    J = validate_banded(Xt, X0.k, tol=max(tol, 1e-10))
    R_true = R * math.exp(shift)
    L = normalizer_from_r(R, X0.k) * math.exp(shift)
    mu = _measure_from_normalizer(spectral_map(X0, tol), t, L, tol)
    return TodaSolution(float(t), J, Q, R_true, L, mu, resid)


def _exponents(mu, t):
    e = 2.0 * t * mu.points
    return e, e.max() if e.size else 0.0


def _measure_from_normalizer(mu0: MatrixMeasure, t: float, L, tol) -> MatrixMeasure:
    e, _ = _exponents(mu0, t)
    factors = [np.linalg.solve(L, math.exp(0.5 * ej) * V) for ej, V in zip(e, mu0.factors)]
    return MatrixMeasure.from_factors(mu0.points, factors, tol)


def evolve_measure(mu0: MatrixMeasure, t: float, tol: float = DEFAULT_TOL,
                   return_normalizer: bool = False):
    """Spectral measure of ``X(t)`` given that of ``X0``.

    ``W_j(t) = L^{-1} e^{2 x_j t} W_j(0) L^{-*}`` where ``L`` is the Cholesky
    factor of ``S(t) = sum_j e^{2 x_j t} W_j(0)``.  Exponents are shifted
    by their maximum before exponentiating; the shift cancels in ``W_j(t)``.
    With ``return_normalizer`` the unshifted ``L`` is returned as well.
    """
    if mu0.m:
        _guard(mu0.points, t)
    e, top = _exponents(mu0, t)
    S = np.einsum("m,mkl->kl", np.exp(e - top), mu0.weights)
    try:
        L = cholesky(S, tol=tol)
    except NotPositiveDefinite as exc:
        raise SingularNormalizer(f"normalizer S(t) is singular: {exc}") from exc
    factors = [np.linalg.solve(L, math.exp(0.5 * (ej - top)) * V) for ej, V in zip(e, mu0.factors)]
    mu = MatrixMeasure.from_factors(mu0.points, factors, tol)
    if return_normalizer:
        return mu, L * math.exp(0.5 * top)
    return mu


def toda_spectral_flow(X0: BandedHermitian, t: float, tol: float = DEFAULT_TOL) -> BandedHermitian:
    """``X(t)`` rebuilt from the evolved spectral measure of ``X0``."""
    return inverse_spectral_map(evolve_measure(spectral_map(X0, tol), t, tol), tol)


def _rhs(X):
    B = flow_generator(X)
    return X @ B - B @ X


def toda_rk4_oracle(X0, t: float, dt: float = 1e-3, drift_guard: float = 1e-8,
                    norm_guard: float = 1e-3) -> np.ndarray:
    """Classical RK4 on the flow equation; returns the dense ``X(t)``.

    Uses ``ceil(|t| / dt)`` equal steps and re-symmetrizes after each step.
    ``StepSizeTooLarge`` is raised when a step leaves the Hermitian matrices
    by more than ``drift_guard`` (relative), produces non-finite entries, or
    changes the Frobenius norm (a conserved quantity of the flow) by more
    than ``norm_guard`` relative to the start.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    X = np.array(X0.to_dense() if isinstance(X0, BandedHermitian) else X0, dtype=complex)
    steps = math.ceil(abs(t) / dt) if t else 0
    if steps == 0:
        return X
    h = t / steps
    norm0 = np.linalg.norm(X)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(steps):
            k1 = _rhs(X)
            k2 = _rhs(X + 0.5 * h * k1)
            k3 = _rhs(X + 0.5 * h * k2)
            k4 = _rhs(X + h * k3)
            X = X + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if not np.all(np.isfinite(X)):
                raise StepSizeTooLarge("RK4 produced non-finite values; reduce dt")
            if hermitian_defect(X) > drift_guard:
                raise StepSizeTooLarge(f"Hermiticity drift {hermitian_defect(X):.3g} exceeds {drift_guard}")
            X = 0.5 * (X + X.conj().T)
            drift = abs(np.linalg.norm(X) - norm0) / max(norm0, np.finfo(float).tiny)
            if drift > norm_guard:
                raise StepSizeTooLarge(f"Frobenius norm drift {drift:.3g} exceeds {norm_guard}; reduce dt")
    return X


def eigenvalue_drift(X0, Xt) -> float:
    """Largest difference between the sorted eigenvalues of two Hermitian matrices."""
    a = np.linalg.eigvalsh(X0.to_dense() if isinstance(X0, BandedHermitian) else X0)
    b = np.linalg.eigvalsh(Xt.to_dense() if isinstance(Xt, BandedHermitian) else Xt)
    return float(np.abs(a - b).max())
