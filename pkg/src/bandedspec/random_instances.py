"""Seeded random instances for tests, demos and the acceptance suite.

Every generator takes a ``numpy.random.Generator`` (or a seed) so a run is
reproducible from its seed alone.
"""

from __future__ import annotations

import numpy as np

from .linalg import DEFAULT_TOL
from .measure import MatrixMeasure, class_dimensions, normalize, validate_measure
from .spectral import BandedHermitian


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_complex(rng, shape, real: bool = False) -> np.ndarray:
    rng = _rng(rng)
    z = rng.uniform(-1.0, 1.0, shape)
    if not real:
        z = z + 1j * rng.uniform(-1.0, 1.0, shape)
    return z


def random_hermitian(rng, N: int, real: bool = False) -> np.ndarray:
    Z = random_complex(rng, (N, N), real)
    return 0.5 * (Z + Z.conj().T)


def random_pivots(rng, r: int, n: int) -> np.ndarray:
    """Increasing pivot columns, uniform over all size-``r`` subsets of ``range(n)``."""
    return np.sort(_rng(rng).choice(n, size=r, replace=False))


def random_ref(rng, r: int, n: int, pivots=None, real: bool = False) -> np.ndarray:
    """``r x n`` row echelon matrix with positive pivots in the given (or random) columns."""
    rng = _rng(rng)
    if pivots is None:
        pivots = random_pivots(rng, r, n)
    R = random_complex(rng, (r, n), real)
    for i, p in enumerate(pivots):
        R[i, :p] = 0.0
        R[i, p] = 1.0 + rng.uniform()
    return R


def random_psd(rng, n: int, rank: int | None = None, real: bool = False) -> np.ndarray:
    rng = _rng(rng)
    r = int(rng.integers(0, n + 1)) if rank is None else rank
    X = random_complex(rng, (n, r), real)
    return X @ X.conj().T


def random_banded(rng, k: int, N: int, real: bool = False, scale: float = 1.0) -> BandedHermitian:
    """Random member of the banded class.

    Diagonal blocks are Hermitian with entries uniform in ``[-1, 1]``;
    square subdiagonal blocks are upper triangular with diagonal ``1 + U(0,1)``;
    the last subdiagonal block is in echelon form with random pivot columns.
    ``scale`` multiplies the whole matrix.
    """
    rng = _rng(rng)
    n, ell = class_dimensions(k, N)
    sizes = [k] * (n - 1) + [k - ell]
    A = [scale * random_hermitian(rng, s, real) for s in sizes]
    B = []
    for j in range(n - 1):
        if sizes[j + 1] == k:
            b = np.triu(random_complex(rng, (k, k), real))
            b[np.diag_indices(k)] = 1.0 + rng.uniform(size=k)
        else:
            b = random_ref(rng, sizes[j + 1], k, real=real)
        B.append(scale * b)
    return BandedHermitian(k, N, tuple(A), tuple(B))


def random_toda_start(rng, k: int, N: int, max_norm: float = 3.0, real: bool = False) -> BandedHermitian:
    """Random banded matrix rescaled so that its spectral norm is ``max_norm``."""
    J = random_banded(rng, k, N, real)
    s = max_norm / np.linalg.norm(J.to_dense(), 2)
    return BandedHermitian(k, N, tuple(s * a for a in J.A), tuple(s * b for b in J.B))


def random_points(rng, m: int, low: float = -2.0, high: float = 2.0,
                  min_gap: float | None = None) -> np.ndarray:
    """``m`` sorted points in ``[low, high]`` with gaps at least ``min_gap``.

    Sampled as a random composition of the spare length, so the gap
    condition holds without rejection.
    """
    rng = _rng(rng)
    if min_gap is None:
        min_gap = 0.25 * (high - low) / max(m, 1)
    spare = (high - low) - min_gap * (m - 1)
    if spare < 0:
        raise ValueError("interval too short for the requested gap")
    cuts = np.sort(rng.uniform(0.0, spare, m))
    return low + cuts + min_gap * np.arange(m)


def random_ranks(rng, k: int, N: int, m: int | None = None) -> list:
    """Atom ranks ``n_j`` in ``1..k`` summing to ``N`` (``m`` atoms, random if omitted)."""
    rng = _rng(rng)
    n, _ = class_dimensions(k, N)
    m_min = n
    if m is None:
        m = int(rng.integers(m_min, N + 1))
    if not m_min <= m <= N:
        raise ValueError(f"need between {m_min} and {N} atoms, got {m}")
    ranks = np.ones(m, dtype=int)
    for _ in range(N - m):
        free = np.flatnonzero(ranks < k)
        ranks[rng.choice(free)] += 1
    return list(rng.permutation(ranks))


def random_measure(rng, k: int, N: int, m: int | None = None, real: bool = False,
                   tol: float = DEFAULT_TOL, max_tries: int = 50) -> MatrixMeasure:
    """Random normalized measure in the class of spectral measures of size ``N``.

    Generic factors satisfy the Krylov rank conditions; a draw that does not
    is discarded and redrawn.
    """
    rng = _rng(rng)
    for _ in range(max_tries):
        ranks = random_ranks(rng, k, N, m)
        x = random_points(rng, len(ranks))
        Vs = [random_complex(rng, (k, r), real) for r in ranks]
        raw = MatrixMeasure.from_factors(x, Vs, tol)
        mu = normalize(raw, tol)
        if validate_measure(mu, k, N, tol).member:
            return mu
    raise RuntimeError("could not draw a measure in the class")
