import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import half_half
from bandedspec import (
    MatrixMeasure,
    MatrixPolynomial,
    NotDefinite,
    RankMismatch,
    last_polynomial,
    monic_sequence,
    null_dimension,
    orthonormal_family,
    orthonormal_sequence,
    poly_apply,
    poly_eval,
    quasi_inner,
    residual_polynomials,
    spectral_map,
)
from bandedspec.linalg import hermitian_sqrt, is_row_echelon, rank_with_tol
from bandedspec.measure import class_dimensions
from bandedspec.random_instances import random_banded, random_complex, random_hermitian, random_measure

seeds = st.integers(0, 2**32 - 1)
sizes = st.sampled_from([(1, 3), (1, 6), (2, 3), (2, 4), (2, 7), (3, 5), (3, 9), (3, 12)])
SETTINGS = settings(max_examples=40, deadline=None)


def gram(fam_P, mu):
    return [[quasi_inner(a, b, mu) for b in fam_P] for a in fam_P]


# evaluation and the polynomial map

def test_poly_eval_examples(rng):
    assert np.array_equal(poly_eval(MatrixPolynomial.identity(2), 7.3), np.eye(2))
    assert np.allclose(poly_eval(MatrixPolynomial.monomial(1, 2), 3.0), 3 * np.eye(2))
    C = random_complex(rng, (4, 2, 3))
    P = MatrixPolynomial(C)
    x = 0.7
    assert np.allclose(poly_eval(P, x), sum(x ** j * C[j] for j in range(4)), atol=1e-12)
    assert np.allclose(P.evaluate_many([x, -x])[1], poly_eval(P, -x))


def test_poly_apply_examples(rng):
    J = random_hermitian(rng, 5)
    E = np.eye(5, 2)
    assert np.allclose(poly_apply(MatrixPolynomial.identity(2), J, E), E)
    assert np.allclose(poly_apply(MatrixPolynomial.monomial(1, 2), J, E), J @ E)


@SETTINGS
@given(seeds)
def test_poly_apply_identities(seed):
    rng = np.random.default_rng(seed)
    J = random_hermitian(rng, 6)
    E = random_complex(rng, (6, 2))
    F = MatrixPolynomial(random_complex(rng, (3, 2, 2)))
    G = MatrixPolynomial(random_complex(rng, (2, 2, 2)))
    C = random_complex(rng, (2, 2))
    by_powers = sum(np.linalg.matrix_power(J, j) @ E @ F.coeffs[j] for j in range(3))
    assert np.allclose(poly_apply(F, J, E), by_powers, atol=1e-10)
    assert np.allclose(poly_apply(F + G, J, E), poly_apply(F, J, E) + poly_apply(G, J, E), atol=1e-10)
    assert np.allclose(poly_apply(F @ C, J, E), poly_apply(F, J, E) @ C, atol=1e-10)
    assert np.allclose(poly_apply(F.times_x(), J, E), J @ poly_apply(F, J, E), atol=1e-10)


# monic polynomials

def test_monic_half_half():
    pis, data = monic_sequence(half_half(), 2)
    assert np.allclose(pis[0].coeffs, [[[1]]])
    assert np.allclose(pis[1].trimmed(1e-14).coeffs, [[[0]], [[1]]])
    assert np.allclose(data.gammas, [[[1]], [[1]]])
    assert np.allclose(data.C[0], 0)


@SETTINGS
@given(seeds, sizes)
def test_monic_recurrence_agrees_with_gram_schmidt(seed, kN):
    k, N = kN
    rng = np.random.default_rng(seed)
    mu = random_measure(rng, k, N)
    n, _ = class_dimensions(k, N)
    p1, d1 = monic_sequence(mu, n, method="recurrence")
    p2, d2 = monic_sequence(mu, n, method="gram_schmidt")
    for a, b in zip(p1, p2):
        assert a.is_monic(1e-12) and b.is_monic(1e-12)
        assert np.abs(a.coeffs - b.coeffs).max() <= 1e-8
    G = gram(p1, mu)
    for i in range(n):
        for j in range(n):
            expect = d1.gammas[j] if i == j else 0
            assert np.allclose(G[i][j], expect, atol=1e-10)
    for j in range(1, n):
        assert np.allclose(d1.D[j], np.linalg.solve(d1.gammas[j - 1], d1.gammas[j]), atol=1e-10)
    for j in range(n - 1):
        assert np.allclose(d1.C[j], d1.taus[j] - d1.taus[j + 1], atol=1e-8)


def test_gamma_last_rank(rng):
    for k, N in [(2, 5), (3, 7), (3, 8), (3, 9)]:
        n, ell = class_dimensions(k, N)
        mu = spectral_map(random_banded(rng, k, N))
        _, data = monic_sequence(mu, n)
        assert rank_with_tol(data.gammas[n - 1], psd=True) == k - ell


def test_not_definite():
    mu = MatrixMeasure.from_weights([0.0], [np.eye(2)])
    with pytest.raises(NotDefinite):
        monic_sequence(mu, 3)


# orthonormal polynomials

def test_orthonormal_scalar(rng):
    mu = random_measure(rng, 1, 6)
    P, A, B = orthonormal_sequence(mu)
    assert np.allclose(P[0].coeffs, [[[1]]])
    assert all(np.isreal(a).all() for a in A)
    assert all(b[0, 0].real > 0 and b[0, 0].imag == 0 for b in B)


@SETTINGS
@given(seeds, sizes)
def test_orthonormal_family_properties(seed, kN):
    k, N = kN
    rng = np.random.default_rng(seed)
    mu = random_measure(rng, k, N)
    fam = orthonormal_family(mu)
    n, ell = fam.n, fam.ell
    assert np.allclose(fam.P[0].coeffs, np.eye(k)[None])
    G = gram(fam.P, mu)
    for i in range(n):
        for j in range(n):
            expect = np.eye(G[i][j].shape[0]) if i == j else 0
            assert np.allclose(G[i][j], expect, atol=1e-10)
    for j in range(n):
        xP = fam.P[j].times_x()
        assert np.allclose(fam.A[j], quasi_inner(fam.P[j], xP, mu), atol=1e-8)
    for j, b in enumerate(fam.B):
        if j < n - 2:
            assert np.allclose(np.tril(b, -1), 0) and np.all(np.diag(b).real > 0)
        assert is_row_echelon(b, 1e-12)
    if n > 1:
        assert fam.B[-1].shape == (k - ell, k)
    # A_j from the monic data: Q* gamma^{1/2} C gamma^{-1/2} Q
    for j in range(n - 2):
        g = fam.monic.gammas[j]
        Q = fam.Q[j]
        A_monic = Q.conj().T @ hermitian_sqrt(g) @ fam.monic.C[j] @ hermitian_sqrt(g, inverse=True) @ Q
        assert np.allclose(A_monic, fam.A[j], atol=1e-8)


@SETTINGS
@given(seeds, sizes)
def test_orthonormal_independent_of_monic_method(seed, kN):
    k, N = kN
    mu = random_measure(np.random.default_rng(seed), k, N)
    f1 = orthonormal_family(mu, method="recurrence")
    f2 = orthonormal_family(mu, method="gram_schmidt")
    for a, b in zip(f1.A + f1.B, f2.A + f2.B):
        assert np.abs(a - b).max() <= 1e-8


def test_last_polynomial_square_case(rng):
    mu = random_measure(rng, 2, 6)
    P, A2, B2, A1 = last_polynomial(mu)
    assert P.shape == (2, 2) and B2.shape == (2, 2)
    assert np.allclose(np.tril(B2, -1), 0) and np.all(np.diag(B2).real > 0)


def test_last_polynomial_degenerate(rng):
    mu = random_measure(rng, 2, 3)
    P, A0, B0, A1 = last_polynomial(mu)
    assert B0.shape == (1, 2) and is_row_echelon(B0, 1e-12)
    assert P.shape == (2, 1) and A1.shape == (1, 1)
    assert np.allclose(quasi_inner(P, P, mu), 1, atol=1e-10)


def test_last_polynomial_rank_mismatch():
    # k = 2, N = 4 but M_1 deficient: the Gram matrix has rank 1, not 2
    u = np.array([1.0, 1.0]) / np.sqrt(2)
    Pu = np.outer(u, u)
    mu = MatrixMeasure.from_weights([0.0, 1.0, 2.0], [np.eye(2) - 0.5 * Pu, 0.25 * Pu, 0.25 * Pu])
    with pytest.raises(RankMismatch):
        orthonormal_family(mu)


@SETTINGS
@given(seeds, sizes)
def test_residuals_and_last_moment(seed, kN):
    k, N = kN
    mu = random_measure(np.random.default_rng(seed), k, N)
    fam = orthonormal_family(mu)
    R2, R1 = residual_polynomials(fam)
    for R in (R2, R1):
        if R is not None:
            assert np.linalg.norm(quasi_inner(R, R, mu)) <= 1e-8
    if fam.n >= 2:
        xP = fam.last.times_x()
        lhs = quasi_inner(xP, xP, mu)
        rhs = fam.A[-1] @ fam.A[-1] + fam.B[-1] @ fam.B[-1].conj().T
        assert np.linalg.norm(lhs - rhs) <= 1e-8


# null space dimension

@pytest.mark.parametrize("k,N", [(1, 5), (2, 6), (2, 7), (3, 8), (3, 10)])
def test_null_dimension_law(rng, k, N):
    n, ell = class_dimensions(k, N)
    mu = spectral_map(random_banded(rng, k, N))
    for d in range(n + 3):
        expect = 0 if d < n - 1 else ell if d == n - 1 else k * (d + 1) - N
        assert null_dimension(mu, d) == expect
