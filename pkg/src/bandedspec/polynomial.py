"""Matrix polynomials with coefficients acting on the right.

``P(x) = sum_j x**j C_j`` where each ``C_j`` is ``k x w``.  Right-multiplying
coefficients matches the right quasi-inner product used throughout the
package: ``<F C, G D> = C* <F, G> D``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch


class MatrixPolynomial:
    """Dense coefficient storage, ``coeffs[j]`` multiplies ``x**j``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[0] == 0:
            raise DimensionMismatch(f"coefficients must have shape (p+1, k, w), got {c.shape}")
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def constant(cls, C) -> "MatrixPolynomial":
        return cls(np.asarray(C, dtype=complex)[None])

    @classmethod
    def identity(cls, k: int) -> "MatrixPolynomial":
        return cls.constant(np.eye(k))

    @classmethod
    def zero(cls, k: int, w: int | None = None) -> "MatrixPolynomial":
        return cls(np.zeros((1, k, k if w is None else w)))

    @classmethod
    def monomial(cls, j: int, k: int) -> "MatrixPolynomial":
        c = np.zeros((j + 1, k, k), dtype=complex)
        c[j] = np.eye(k)
        return cls(c)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def shape(self) -> tuple:
        return self.coeffs.shape[1:]

    def leading(self) -> np.ndarray:
        return self.coeffs[-1]

    def is_monic(self, tol: float = 0.0) -> bool:
        k, w = self.shape
        return k == w and np.allclose(self.leading(), np.eye(k), rtol=0.0, atol=tol)

    def __call__(self, x) -> np.ndarray:
        """Horner evaluation at a scalar ``x``."""
        out = self.coeffs[-1].copy()
        for C in self.coeffs[-2::-1]:
            out = x * out + C
        return out

    def evaluate_many(self, xs) -> np.ndarray:
        """Values at each point of ``xs``, stacked along the first axis."""
        xs = np.asarray(xs, dtype=float)
        out = np.broadcast_to(self.coeffs[-1], (xs.size,) + self.shape).astype(complex)
        for C in self.coeffs[-2::-1]:
            out = xs[:, None, None] * out + C
        return out

    def apply(self, J, E) -> np.ndarray:
        """Polynomial map ``sum_j J**j E C_j`` (Horner in ``J``)."""
        J = np.asarray(J, dtype=complex)
        E = np.asarray(E, dtype=complex)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or E.shape[0] != J.shape[0]:
            raise DimensionMismatch(f"incompatible J {J.shape} and E {E.shape}")
        if E.shape[1] != self.shape[0]:
            raise DimensionMismatch(f"E has {E.shape[1]} columns, polynomial has {self.shape[0]} rows")
        out = E @ self.coeffs[-1]
        for C in self.coeffs[-2::-1]:
            out = J @ out + E @ C
        return out

    def times_x(self) -> "MatrixPolynomial":
        """The polynomial ``x -> x P(x)``."""
        k, w = self.shape
        return MatrixPolynomial(np.concatenate([np.zeros((1, k, w)), self.coeffs]))

    def __matmul__(self, C) -> "MatrixPolynomial":
        C = np.asarray(C, dtype=complex)
        if C.ndim != 2 or C.shape[0] != self.shape[1]:
            raise DimensionMismatch(f"cannot right-multiply {self.shape} by {C.shape}")
        return MatrixPolynomial(self.coeffs @ C)

    def _padded(self, other: "MatrixPolynomial"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape mismatch {self.shape} vs {other.shape}")
        p = max(self.degree, other.degree) + 1
        a = np.zeros((p,) + self.shape, dtype=complex)
        b = np.zeros_like(a)
        a[: self.degree + 1] = self.coeffs
        b[: other.degree + 1] = other.coeffs
        return a, b

    def __add__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        a, b = self._padded(other)
        return MatrixPolynomial(a + b)

    def __sub__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        a, b = self._padded(other)
        return MatrixPolynomial(a - b)

    def __neg__(self) -> "MatrixPolynomial":
        return MatrixPolynomial(-self.coeffs)

    def trimmed(self, atol: float = 0.0) -> "MatrixPolynomial":
        """Drop trailing coefficients whose entries are all at most ``atol``."""
        c = self.coeffs
        p = c.shape[0]
        while p > 1 and np.abs(c[p - 1]).max() <= atol:
            p -= 1
        return MatrixPolynomial(c[:p])

    def __repr__(self) -> str:
        return f"MatrixPolynomial(degree={self.degree}, shape={self.shape})"


def as_polynomial(F, k: int | None = None) -> MatrixPolynomial:
    if isinstance(F, MatrixPolynomial):
        return F
    return MatrixPolynomial.constant(F)
