"""
Spectral map and its inverse
============================

A banded matrix goes to its spectral measure and comes back unchanged; a
measure goes to a banded matrix and comes back unchanged.
"""

import numpy as np

from bandedspec import banded_distance, inverse_spectral_map, measure_distance, spectral_map
from bandedspec.random_instances import random_banded, random_measure

rng = np.random.default_rng(3)

for k, N in [(1, 8), (2, 6), (2, 7), (3, 8), (3, 10)]:
    J = random_banded(rng, k, N)
    mu = spectral_map(J)
    J_back = inverse_spectral_map(mu)
    nu = random_measure(rng, k, N)
    nu_back = spectral_map(inverse_spectral_map(nu))
    print(f"k={k} N={N} ell={J.ell}: matrix round trip {banded_distance(J, J_back):.1e}, "
          f"measure round trip {measure_distance(nu, nu_back):.1e}")

# the classical case: equal masses at -1 and 1 give [[0, 1], [1, 0]]
from bandedspec import MatrixMeasure

half = MatrixMeasure.from_weights([-1.0, 1.0], [[[0.5]], [[0.5]]])
print("\n", np.round(inverse_spectral_map(half).to_dense().real, 12))
