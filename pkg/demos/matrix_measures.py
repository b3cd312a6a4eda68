"""
Matrix-valued measures
======================

A finitely supported measure with PSD k x k weights, its moments, the
Krylov matrices that decide class membership, and a measure that fails.
"""

import numpy as np

from bandedspec import MatrixMeasure, moment, spectral_map, validate_measure
from bandedspec.random_instances import random_banded

rng = np.random.default_rng(1)

# the spectral measure of a random 2-banded 7 x 7 matrix
J = random_banded(rng, 2, 7)
mu = spectral_map(J)
print("atoms:", mu.m, " ranks:", mu.ranks, " total rank:", mu.N)
print("total mass:\n", np.round(mu.total_mass(), 12).real)

# moments equal the leading block of the matrix powers
D = J.to_dense()
for i in range(4):
    ref = np.linalg.matrix_power(D, i)[:2, :2]
    print(f"moment {i}: error {np.linalg.norm(moment(mu, i) - ref):.1e}")

print("\nclass report:", validate_measure(mu, 2, 7).as_dict())

# two rank-one atoms sharing a direction: ranks add up, the Krylov test fails
u = np.array([1.0, 1.0]) / np.sqrt(2)
P = np.outer(u, u)
bad = MatrixMeasure.from_weights([0.0, 1.0, 2.0], [np.eye(2) - 0.5 * P, 0.25 * P, 0.25 * P])
rep = validate_measure(bad, 2, 4)
print("\nrank sum:", rep.rank_sum, " Krylov rank:", rep.krylov_rank, " member:", rep.member)
