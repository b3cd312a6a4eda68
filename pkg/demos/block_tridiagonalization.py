"""
Block Lanczos and Householder
=============================

Both reductions, started from the first k coordinates, produce the same
banded matrix whenever Lanczos runs to completion.
"""

import numpy as np

from bandedspec import block_lanczos, equivalence_check, householder_blocktridiag
from bandedspec.random_instances import random_hermitian

rng = np.random.default_rng(4)

A = random_hermitian(rng, 9)
k = 2
lz = block_lanczos(A, np.eye(9, k))
hh = householder_blocktridiag(A, k)
print("Lanczos widths:", lz.widths, " completed:", lz.completed)
print("largest block difference:",
      max(np.linalg.norm(a - b) for a, b in zip(lz.to_banded().A + lz.to_banded().B, hh.A + hh.B)))

rep = equivalence_check(A, k)
print("report:", {key: rep.as_dict()[key] for key in ("agree", "scaled_error", "inverse_map_error")})

# a start vector that is an eigenvector stops Lanczos after one step
rep = equivalence_check(np.diag([1.0, 2.0, 3.0]), 1)
print("\ndiagonal input comparable:", rep.comparable, "-", rep.messages[0])
