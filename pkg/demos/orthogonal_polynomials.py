"""
Matrix orthogonal polynomials
=============================

Monic and orthonormal polynomials of a matrix measure and their recurrence
coefficients.  In the degenerate case the last polynomial has fewer
columns and the last off-diagonal coefficient is a wide echelon block.
"""

import numpy as np

from bandedspec import monic_sequence, null_dimension, orthonormal_family, quasi_inner
from bandedspec.random_instances import random_measure

rng = np.random.default_rng(2)

mu = random_measure(rng, 2, 5)   # k = 2, N = 5: blocks 2, 2, 1
fam = orthonormal_family(mu)
print("n =", fam.n, " ell =", fam.ell)
print("B shapes:", [b.shape for b in fam.B])
print("last B (echelon, positive pivots):\n", np.round(fam.B[-1], 4))

# orthonormality
for i, P in enumerate(fam.P):
    print(f"<P{i}, P{i}> =", np.round(quasi_inner(P, P, mu), 10).real.tolist())

# monic Gram matrices lose rank exactly at the last degree
_, data = monic_sequence(mu, fam.n)
print("\nGram eigenvalues:", [np.round(np.linalg.eigvalsh(g), 6).tolist() for g in data.gammas])
print("null space dimensions:", [null_dimension(mu, d) for d in range(5)])
