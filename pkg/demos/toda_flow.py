"""
Toda flow on banded matrices
============================

Three solvers for dX/dt = X B(X) - B(X) X: QR of exp(t X0), evolution of
the spectral measure followed by the inverse map, and Runge-Kutta.
"""

import numpy as np

from bandedspec import ConditioningError, toda_qr_flow, toda_rk4_oracle, toda_spectral_flow, validate_banded
from bandedspec.random_instances import random_toda_start
from bandedspec.toda import eigenvalue_drift

# 2 x 2: the exact solution is [[tanh 2t, sech 2t], [sech 2t, -tanh 2t]]
X0 = validate_banded([[0.0, 1.0], [1.0, 0.0]], 1)
t = 0.5
print("QR flow:\n", np.round(toda_qr_flow(X0, t).dense().real, 10))
print("exact: tanh =", np.tanh(2 * t), " sech =", 1 / np.cosh(2 * t))

rng = np.random.default_rng(5)
X0 = random_toda_start(rng, 2, 7, max_norm=3.0)
for t in (0.25, 1.0, 2.0):
    sol = toda_qr_flow(X0, t)
    Xs = toda_spectral_flow(X0, t).to_dense()
    Xr = toda_rk4_oracle(X0, t)
    print(f"t={t}: qr-spectral {np.abs(sol.dense() - Xs).max():.1e}, "
          f"qr-rk4 {np.abs(sol.dense() - Xr).max():.1e}, drift {eigenvalue_drift(X0, sol.X):.1e}")

# the diagonal drifts toward the eigenvalues, largest first
sol = toda_qr_flow(X0, 3.0)
print("\ndiagonal at t=3:", np.round(np.diag(sol.dense()).real, 3))
print("eigenvalues:    ", np.round(np.linalg.eigvalsh(X0.to_dense())[::-1], 3))

# long times make exp(t X0) too ill-conditioned; the solver refuses
try:
    toda_qr_flow(X0, 6.0)
except ConditioningError as exc:
    print("\nt=6 refused:", exc)
