import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import stieltjes_jacobi
from conftest import half_half
from bandedspec import (
    BandedHermitian,
    BandViolation,
    MatrixMeasure,
    NotHermitian,
    NotInClass,
    PivotViolation,
    RankViolation,
    banded_distance,
    inverse_spectral_map,
    lanczos_polynomials,
    measure_distance,
    moment,
    null_dimension,
    poly_apply,
    quasi_inner,
    selection_block,
    spectral_map,
    to_dense,
    validate_banded,
)
from bandedspec.measure import class_dimensions
from bandedspec.random_instances import random_banded, random_measure

seeds = st.integers(0, 2**32 - 1)
sizes = st.sampled_from([(1, 1), (1, 8), (2, 2), (2, 3), (2, 6), (2, 7), (3, 4), (3, 8), (3, 10), (4, 9)])
SETTINGS = settings(max_examples=50, deadline=None)


def jacobi(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return np.diag(a) + np.diag(b, 1) + np.diag(b, -1)


# validate_banded

def test_validate_jacobi():
    J = validate_banded(jacobi([1.0, -2.0, 0.5], [0.3, 1.2]), 1)
    assert J.n == 3 and J.ell == 0
    assert np.allclose([b[0, 0] for b in J.B], [0.3, 1.2])


def test_validate_lower_triangular_block_is_pivot_violation():
    M = np.zeros((4, 4))
    M[2:, :2] = [[1.0, 0.0], [1.0, 1.0]]
    M[:2, 2:] = M[2:, :2].T
    with pytest.raises(PivotViolation) as info:
        validate_banded(M, 2)
    assert info.value.violations


def test_validate_degenerate_last_block():
    # k = 2, N = 3: B_0 is 1 x 2 in echelon form
    good = np.array([[1, 0, 0], [0, 2, 0.5], [0, 0.5, 3]], dtype=complex)
    J = validate_banded(good, 2)
    assert J.B[0].shape == (1, 2) and J.A[1].shape == (1, 1)
    bad = good.copy()
    bad[2, 1] = bad[1, 2] = -0.5
    with pytest.raises(PivotViolation):
        validate_banded(bad, 2)
    zero = good.copy()
    zero[2, :2] = zero[:2, 2] = 0
    with pytest.raises(RankViolation):
        validate_banded(zero, 2)


def test_validate_band_violation():
    M = jacobi([0, 0, 0], [1, 1])
    M[0, 2] = M[2, 0] = 0.1
    with pytest.raises(BandViolation):
        validate_banded(M, 1)


def test_validate_not_hermitian():
    with pytest.raises(NotHermitian):
        validate_banded([[0, 1], [2, 0]], 1)


def test_validate_complex_pivot():
    M = jacobi([0, 0], [1]).astype(complex)
    M[1, 0], M[0, 1] = 1j, -1j
    with pytest.raises(PivotViolation):
        validate_banded(M, 1)


@SETTINGS
@given(seeds, sizes)
def test_to_dense_roundtrip(seed, kN):
    J = random_banded(np.random.default_rng(seed), *kN)
    D = to_dense(J)
    assert np.abs(D - D.conj().T).max() <= 1e-15
    J2 = validate_banded(D, J.k)
    assert banded_distance(J, J2) == 0.0


def test_to_dense_scalar_layout():
    J = BandedHermitian(1, 3, ([[1]], [[2]], [[3]]), ([[4]], [[5]]))
    assert np.array_equal(to_dense(J).real, jacobi([1, 2, 3], [4, 5]))


def test_selection_blocks():
    E1, E2 = selection_block(5, 3, 1), selection_block(5, 3, 2)
    assert E1.shape == (5, 3) and E2.shape == (5, 2)
    assert np.allclose(E2.conj().T @ E2, np.eye(2))
    assert np.allclose(E1.conj().T @ E2, 0)


# spectral_map

def test_spectral_map_swap():
    mu = spectral_map(validate_banded([[0, 1], [1, 0]], 1))
    assert measure_distance(mu, half_half()) <= 1e-15


def test_spectral_map_one_by_one():
    mu = spectral_map(BandedHermitian(1, 1, ([[2.5]],), ()))
    assert np.allclose(mu.points, [2.5]) and np.allclose(mu.weights, [[[1.0]]])


def test_spectral_map_repeated_eigenvalue():
    # k = 2 allows multiplicity two; both eigenvectors land in one atom
    J = validate_banded(np.diag([1.0, 1.0]), 2)
    mu = spectral_map(J)
    assert mu.m == 1 and mu.ranks == (2,)


@SETTINGS
@given(seeds, sizes)
def test_spectral_map_moments(seed, kN):
    k, N = kN
    J = random_banded(np.random.default_rng(seed), k, N)
    D = J.to_dense()
    mu = spectral_map(J)
    E = np.eye(N, k)
    P = np.eye(N)
    s = np.linalg.norm(D, 2)
    for i in range(2 * J.n + 1):
        assert np.linalg.norm(moment(mu, i) - E.T @ P @ E) <= 1e-12 * max(1.0, s) ** i
        P = P @ D
    assert np.allclose(mu.total_mass(), np.eye(k), atol=1e-12)
    assert mu.N == N and max(mu.ranks) <= k


# inverse_spectral_map

def test_inverse_half_half():
    J = inverse_spectral_map(half_half())
    assert np.allclose(J.to_dense(), [[0, 1], [1, 0]], atol=1e-15)


def test_inverse_point_mass():
    J = inverse_spectral_map(MatrixMeasure.from_weights([-0.75], [[[1.0]]]))
    assert J.N == 1 and np.isclose(J.A[0][0, 0], -0.75)


def test_inverse_matches_stieltjes_oracle():
    x = np.array([-1.3, -0.4, 0.1, 0.8, 1.5, 2.2])
    w = np.array([0.1, 0.2, 0.15, 0.25, 0.2, 0.1])
    a, b = stieltjes_jacobi(x, w, 6)
    J = inverse_spectral_map(MatrixMeasure.from_weights(x, w[:, None, None]))
    assert np.allclose([A[0, 0].real for A in J.A], a, atol=1e-12)
    assert np.allclose([B[0, 0].real for B in J.B], b, atol=1e-12)


def test_inverse_rejects_non_member():
    mu = MatrixMeasure.from_weights([0.0, 1.0], [[[0.3]], [[0.3]]])
    with pytest.raises(NotInClass) as info:
        inverse_spectral_map(mu)
    assert info.value.report is not None and not info.value.report.member


@pytest.mark.parametrize("k,N", [(2, 6), (2, 7), (3, 8)])
def test_psi_phi_roundtrip(rng, k, N):
    for _ in range(10):
        J = random_banded(rng, k, N)
        J2 = inverse_spectral_map(spectral_map(J))
        assert banded_distance(J, J2) <= 1e-8
        validate_banded(J2.to_dense(), k)


@SETTINGS
@given(seeds, sizes)
def test_bijection(seed, kN):
    k, N = kN
    rng = np.random.default_rng(seed)
    J = random_banded(rng, k, N)
    assert banded_distance(J, inverse_spectral_map(spectral_map(J))) <= 1e-8
    mu = random_measure(rng, k, N)
    assert measure_distance(mu, spectral_map(inverse_spectral_map(mu))) <= 1e-8


@SETTINGS
@given(seeds, sizes)
def test_multiplicity_and_definiteness_profile(seed, kN):
    k, N = kN
    J = random_banded(np.random.default_rng(seed), k, N)
    lam = np.linalg.eigvalsh(J.to_dense())
    # multiplicity from the eigenvalues directly (independent of atom merging)
    gaps = np.diff(lam) > 1e-9 * max(lam[-1] - lam[0], 1.0)
    runs = np.diff(np.flatnonzero(np.concatenate([[True], gaps, [True]])))
    assert runs.max() <= k
    mu = spectral_map(J)
    n, ell = class_dimensions(k, N)
    for d in range(n):
        assert null_dimension(mu, d) == (0 if d < n - 1 else ell)


# lanczos_polynomials

@SETTINGS
@given(seeds, sizes)
def test_lanczos_polynomials(seed, kN):
    k, N = kN
    J = random_banded(np.random.default_rng(seed), k, N)
    D = J.to_dense()
    P = lanczos_polynomials(J)
    E1 = selection_block(N, k, 1)
    assert np.array_equal(P[0].coeffs, np.eye(k)[None])
    prod = np.eye(k)
    for j in range(1, J.n + 1):
        Ej = selection_block(N, k, j)
        assert np.linalg.norm(poly_apply(P[j - 1], D, E1) - Ej) <= 1e-10
        if j >= 2:
            prod = J.B[j - 2] @ prod
            Jp = np.linalg.matrix_power(D, j - 1)
            assert np.linalg.norm(Ej.conj().T @ Jp @ E1 - prod) <= 1e-10 * max(1, np.linalg.norm(prod))
    mu = spectral_map(J)
    for i in range(J.n):
        for j in range(J.n):
            G = quasi_inner(P[i], P[j], mu)
            expect = np.eye(G.shape[0]) if i == j else 0
            assert np.allclose(G, expect, atol=1e-8)


def test_lanczos_polynomials_scalar():
    # Jacobi matrix with a = 0, b = 1/2 gives Chebyshev polynomials of the second kind
    J = validate_banded(jacobi([0, 0, 0, 0], [0.5, 0.5, 0.5]), 1)
    P = lanczos_polynomials(J)
    x = 0.3
    U = [1, 2 * x, 4 * x ** 2 - 1, 8 * x ** 3 - 4 * x]
    assert np.allclose([p(x)[0, 0] for p in P], U)
