import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from bandedspec import (
    NotHermitian,
    NotPositiveDefinite,
    NotPSD,
    RankDeficient,
    cholesky,
    echelon_qr,
    hermitian_eig,
    hermitian_expm,
    qr_positive,
    rank_with_tol,
    ref_factor,
    right_pseudoinverse,
)
from bandedspec.linalg import is_row_echelon, pivot_columns
from bandedspec.random_instances import random_complex, random_hermitian, random_psd, random_ref

seeds = st.integers(0, 2**32 - 1)
SETTINGS = settings(max_examples=60, deadline=None)


# hermitian_eig

def test_eig_identity():
    lam, U = hermitian_eig(np.eye(2))
    assert np.array_equal(lam, [1.0, 1.0])
    assert np.allclose(U, np.eye(2), atol=0)


def test_eig_swap_matrix():
    lam, U = hermitian_eig([[0, 1], [1, 0]])
    assert np.allclose(lam, [-1, 1], atol=1e-15)
    s = 1 / np.sqrt(2)
    # columns are (1,-1)/sqrt2 and (1,1)/sqrt2 up to a phase
    assert abs(abs(np.vdot(U[:, 0], [s, -s])) - 1) < 1e-14
    assert abs(abs(np.vdot(U[:, 1], [s, s])) - 1) < 1e-14


def test_eig_random_residual(rng):
    M = random_hermitian(rng, 6)
    lam, U = hermitian_eig(M)
    assert np.all(np.diff(lam) >= 0)
    assert np.linalg.norm(M @ U - U * lam) <= 1e-12 * np.linalg.norm(M)
    assert np.linalg.norm(U.conj().T @ U - np.eye(6)) <= 1e-12


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig([[0, 1], [2, 0]])
    with pytest.raises(NotHermitian):
        hermitian_eig(np.ones((2, 3)))


# qr_positive

@pytest.mark.parametrize("M,Q,R", [
    (np.eye(2), np.eye(2), np.eye(2)),
    ([[0, 1], [1, 0]], [[0, 1], [1, 0]], np.eye(2)),
    ([[2, 0], [0, 3]], np.eye(2), np.diag([2, 3])),
])
def test_qr_examples(M, Q, R):
    q, r = qr_positive(M)
    assert np.allclose(q, Q, atol=1e-15)
    assert np.allclose(r, R, atol=1e-15)


def test_qr_rank_deficient():
    with pytest.raises(RankDeficient):
        qr_positive([[1, 2], [2, 4]])
    with pytest.raises(RankDeficient):
        qr_positive(np.ones((2, 3)))


@SETTINGS
@given(seeds, st.integers(1, 6), st.integers(0, 4))
def test_qr_properties(seed, n, extra):
    rng = np.random.default_rng(seed)
    M = random_complex(rng, (n + extra, n))
    Q, R = qr_positive(M)
    assert np.linalg.norm(Q @ R - M) <= 1e-13 * np.linalg.norm(M)
    assert np.allclose(np.tril(R, -1), 0)
    assert np.all(np.diag(R).real > 0) and np.all(np.diag(R).imag == 0)
    Q2, R2 = qr_positive(M.copy())
    assert np.array_equal(Q, Q2) and np.array_equal(R, R2)


# echelon_qr and ref_factor

def test_echelon_qr_skips_zero_column():
    M = np.array([[0, 1, 2], [0, 1, 0]], dtype=complex)
    Q, R = echelon_qr(M, atol=1e-14)
    assert pivot_columns(R, 1e-14) == [1, 2]
    assert is_row_echelon(R, 1e-14)
    assert np.allclose(Q @ R, M, atol=1e-14)


@pytest.mark.parametrize("A,R", [
    (np.eye(2), np.eye(2)),
    ([[1, 1], [1, 1]], [[1, 1]]),
    ([[0, 0], [0, 4]], [[0, 2]]),
])
def test_ref_examples(A, R):
    assert np.allclose(ref_factor(A), R, atol=1e-14)


def test_ref_zero_and_negative():
    assert ref_factor(np.zeros((3, 3))).shape == (0, 3)
    with pytest.raises(NotPSD):
        ref_factor(np.diag([1.0, -1.0]))


@SETTINGS
@given(seeds, st.integers(1, 8))
def test_ref_factorization(seed, n):
    rng = np.random.default_rng(seed)
    A = random_psd(rng, n)
    R = ref_factor(A)
    assert R.shape[0] == rank_with_tol(A, psd=True)
    assert is_row_echelon(R, 1e-12)
    assert np.linalg.norm(A - R.conj().T @ R) <= 1e-12 * max(np.linalg.norm(A), 1)


@SETTINGS
@given(seeds, st.integers(1, 8), st.data())
def test_ref_unique(seed, n, data):
    rng = np.random.default_rng(seed)
    r = data.draw(st.integers(1, n))
    R = random_ref(rng, r, n)
    assert np.linalg.norm(ref_factor(R.conj().T @ R) - R) <= 1e-10 * np.linalg.norm(R)


# cholesky

def test_cholesky_examples(rng):
    assert np.allclose(cholesky(np.eye(3)), np.eye(3))
    assert np.allclose(cholesky(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))
    X = random_complex(rng, (5, 5))
    A = X @ X.conj().T + np.eye(5)
    L = cholesky(A)
    assert np.allclose(np.triu(L, 1), 0)
    assert np.all(np.diag(L).real > 0)
    assert np.linalg.norm(L @ L.conj().T - A) <= 1e-12 * np.linalg.norm(A)


def test_cholesky_rejects_semidefinite():
    with pytest.raises(NotPositiveDefinite):
        cholesky([[1, 1], [1, 1]], tol=1e-12)
    with pytest.raises(NotPositiveDefinite):
        cholesky(np.diag([1.0, -1.0]))


# right_pseudoinverse

@pytest.mark.parametrize("B,P", [
    (np.eye(2), np.eye(2)),
    ([[1, 0]], [[1], [0]]),
    ([[0, 2]], [[0], [0.5]]),
])
def test_pinv_examples(B, P):
    assert np.allclose(right_pseudoinverse(B), P, atol=1e-15)


def test_pinv_rank_deficient():
    with pytest.raises(RankDeficient):
        right_pseudoinverse([[1, 2], [2, 4]])


@SETTINGS
@given(seeds, st.integers(1, 5), st.integers(0, 3))
def test_pinv_properties(seed, r, extra):
    rng = np.random.default_rng(seed)
    B = random_complex(rng, (r, r + extra))
    P = right_pseudoinverse(B)
    assert np.linalg.norm(B @ P - np.eye(r)) <= 1e-10
    PB = P @ B
    assert np.linalg.norm(PB @ PB - PB) <= 1e-10
    assert np.allclose(P, np.linalg.pinv(B), atol=1e-10)


# hermitian_expm

def test_expm_examples(rng):
    M = random_hermitian(rng, 4)
    assert np.allclose(hermitian_expm(M, 0.0), np.eye(4), atol=1e-14)
    assert np.allclose(hermitian_expm(np.diag([1.0, -1.0]), 1.0), np.diag([np.e, 1 / np.e]), atol=1e-14)
    E = hermitian_expm(M, 0.7)
    assert np.linalg.norm(E @ M - M @ E) <= 1e-10
    assert np.allclose(E, scipy.linalg.expm(0.7 * M), atol=1e-12)


@SETTINGS
@given(seeds, st.floats(-2, 2), st.floats(-2, 2))
def test_expm_group_law(seed, s, t):
    rng = np.random.default_rng(seed)
    M = random_hermitian(rng, 5)
    M *= 5 / np.linalg.norm(M, 2)
    lhs = hermitian_expm(M, s) @ hermitian_expm(M, t)
    rhs = hermitian_expm(M, s + t)
    assert np.linalg.norm(lhs - rhs) <= 1e-8 * max(1.0, np.linalg.norm(rhs))


# rank_with_tol

def test_rank_examples():
    assert rank_with_tol(np.eye(3)) == 3
    assert rank_with_tol([[1, 1], [1, 1]]) == 1
    assert rank_with_tol(np.zeros((3, 3))) == 0
    assert rank_with_tol([[1, 1], [1, 1]], psd=True) == 1
