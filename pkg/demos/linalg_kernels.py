"""
Linear algebra kernels
======================

Positive-diagonal QR, the row echelon factor of a PSD matrix, and
Hermitian exponentials.  These are the building blocks used everywhere else.
"""

import numpy as np

from bandedspec import hermitian_expm, qr_positive, ref_factor
from bandedspec.random_instances import random_complex, random_psd

rng = np.random.default_rng(0)

# QR with a positive real diagonal in R is unique
M = random_complex(rng, (4, 3))
Q, R = qr_positive(M)
print("diag(R) =", np.round(np.diag(R), 4))
print("||QR - M|| =", np.linalg.norm(Q @ R - M))

# a rank-2 PSD matrix has a 2 x 4 echelon factor with positive pivots
A = random_psd(rng, 4, rank=2)
Rf = ref_factor(A)
print("\nechelon factor shape:", Rf.shape)
print(np.round(Rf, 3))
print("||A - R*R|| =", np.linalg.norm(A - Rf.conj().T @ Rf))

# exp(tH) through the eigendecomposition
H = np.array([[0.0, 1.0], [1.0, 0.0]])
print("\nexp(H) =\n", np.round(hermitian_expm(H, 1.0).real, 6))
print("cosh(1), sinh(1) =", np.cosh(1.0), np.sinh(1.0))
