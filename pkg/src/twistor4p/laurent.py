"""Finite Laurent polynomials in the spectral parameter and 2x2 matrix algebra.

A ``LaurentPoly`` stores a dense coefficient vector starting at degree ``lo``.
Leading and trailing coefficients below ``TRIM_REL`` times the largest
coefficient are dropped when an instance is built.  Numeric 2x2 matrices are
plain ``numpy`` arrays; ``PolyMatrix`` holds 2x2 matrices with polynomial
entries.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import SingularSystemError

TRIM_REL = 1e-14


class LaurentPoly:
    __slots__ = ("lo", "coeffs")

    def __init__(self, coeffs: Iterable[complex] = (), lo: int = 0, trim: bool = True):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                     dtype=complex).ravel()
        if trim and c.size:
            big = np.max(np.abs(c))
            if big == 0.0:
                c = c[:0]
            else:
                keep = np.nonzero(np.abs(c) > TRIM_REL * big)[0]
                lo += int(keep[0])
                c = c[keep[0]:keep[-1] + 1]
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "lo", int(lo) if c.size else 0)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # construction helpers
    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def const(cls, c: complex) -> "LaurentPoly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "LaurentPoly":
        return cls([c], lo=k)

    @classmethod
    def from_dict(cls, terms: dict[int, complex]) -> "LaurentPoly":
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        c = np.zeros(hi - lo + 1, dtype=complex)
        for k, val in terms.items():
            c[k - lo] += val
        return cls(c, lo)

    # shape
    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def coeff(self, k: int) -> complex:
        i = k - self.lo
        if 0 <= i < len(self.coeffs):
            return complex(self.coeffs[i])
        return 0j

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Dense coefficients for degrees lo..hi (zero padded)."""
        out = np.zeros(hi - lo + 1, dtype=complex)
        for k in range(max(lo, self.lo), min(hi, self.hi) + 1):
            out[k - lo] = self.coeffs[k - self.lo]
        return out

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def to_dict(self) -> dict[int, complex]:
        return {self.lo + i: complex(c) for i, c in enumerate(self.coeffs)}

    # arithmetic
    def __add__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        return LaurentPoly(self.window(lo, hi) + other.window(lo, hi), lo)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(-self.coeffs, self.lo, trim=False)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return lp_mul(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return LaurentPoly(self.coeffs * other, self.lo)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, c) -> "LaurentPoly":
        return LaurentPoly(self.coeffs / c, self.lo)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by lambda**k."""
        return LaurentPoly(self.coeffs, self.lo + k, trim=False)

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=complex)
        if self.is_zero():
            return np.zeros_like(lam)
        if np.any(lam == 0) and self.lo < 0:
            raise ZeroDivisionError("evaluation at lambda = 0 of a negative power")
        acc = np.zeros_like(lam)
        for c in self.coeffs[::-1]:
            acc = acc * lam + c
        return acc * lam ** self.lo

    def star(self) -> "LaurentPoly":
        return lp_star(self)

    def split(self):
        return lp_split(self)

    def pos(self) -> "LaurentPoly":
        return lp_split(self)[2]

    def neg(self) -> "LaurentPoly":
        return lp_split(self)[0]

    def close_to(self, other, tol: float) -> bool:
        return (self - _coerce(other)).norm() <= tol

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.lo == other.lo and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.lo, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        if self.is_zero():
            return "LaurentPoly(0)"
        terms = [f"({c:.6g})*l^{self.lo + i}" for i, c in enumerate(self.coeffs) if c != 0]
        return "LaurentPoly(" + " + ".join(terms) + ")"


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.const(complex(x))


def lp_mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    if f.is_zero() or g.is_zero():
        return LaurentPoly()
    return LaurentPoly(np.convolve(f.coeffs, g.coeffs), f.lo + g.lo)


def lp_star(f: LaurentPoly) -> LaurentPoly:
    """conj(f(-1/conj(lambda))): c_k at degree k goes to (-1)^k conj(c_k) at -k."""
    if f.is_zero():
        return f
    k = np.arange(f.lo, f.hi + 1)
    c = np.where(k % 2 == 0, 1.0, -1.0) * np.conj(f.coeffs)
    return LaurentPoly(c[::-1], -f.hi)


def lp_split(f: LaurentPoly) -> tuple[LaurentPoly, complex, LaurentPoly]:
    """Return (negative part, constant, positive part)."""
    neg = LaurentPoly(f.window(f.lo, -1), f.lo) if f.lo < 0 else LaurentPoly()
    pos = LaurentPoly(f.window(1, f.hi), 1) if f.hi > 0 else LaurentPoly()
    return neg, f.coeff(0), pos


def neg_star(f: LaurentPoly) -> LaurentPoly:
    """Star of the negative part, a polynomial with positive degrees only."""
    return lp_star(lp_split(f)[0])


def lp_divmod(f: LaurentPoly, d: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Euclidean division of ordinary polynomials, f = d*q + r with deg r < deg d."""
    if d.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if f.lo < 0 or d.lo < 0:
        raise ValueError("lp_divmod needs ordinary polynomials (no negative degrees)")
    if f.is_zero():
        return LaurentPoly(), LaurentPoly()
    num = f.window(0, f.hi)[::-1].copy()  # highest degree first
    den = d.window(0, d.hi)[::-1]
    dd = d.hi
    if f.hi < dd:
        return LaurentPoly(), f
    nq = f.hi - dd + 1
    q = np.zeros(nq, dtype=complex)
    for i in range(nq):
        q[i] = num[i] / den[0]
        num[i:i + dd + 1] -= q[i] * den
    rem = num[nq:][::-1]
    return LaurentPoly(q[::-1], 0), LaurentPoly(rem, 0)


def cramer3(M, b, eps: float = 1e-12) -> np.ndarray:
    """Solve a 3x3 complex system by Cramer's rule.

    ``eps`` is relative to the Hadamard bound (product of row norms).
    """
    M = np.asarray(M, dtype=complex)
    b = np.asarray(b, dtype=complex)
    d = det3(M)
    scale = float(np.prod(np.linalg.norm(M, axis=1)))
    if not abs(d) > eps * scale:
        raise SingularSystemError("near-singular 3x3 system", d)
    x = np.empty(3, dtype=complex)
    for i in range(3):
        Mi = M.copy()
        Mi[:, i] = b
        x[i] = det3(Mi) / d
    return x


def det3(M) -> complex:
    return (M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0]))


# 2x2 matrices

PAULI = (
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, 1j], [-1j, 0]], dtype=complex),
)
ID2 = np.eye(2, dtype=complex)
# conjugators of the two symmetries z -> -z and z -> 1/z
D_MAT = np.array([[1j, 0], [0, -1j]], dtype=complex)
C_MAT = np.array([[0, 1j], [1j, 0]], dtype=complex)


def pauli(j: int) -> np.ndarray:
    if j not in (1, 2, 3):
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {j!r}")
    return PAULI[j - 1]


def pauli_word(word: Sequence[int]) -> np.ndarray:
    out = ID2.copy()
    for j in word:
        out = out @ pauli(j)
    return out


class PolyMatrix:
    """2x2 matrix with LaurentPoly entries."""

    __slots__ = ("e",)

    def __init__(self, entries):
        self.e = tuple(tuple(_coerce(x) for x in row) for row in entries)

    @classmethod
    def from_coeffs(cls, mats: dict[int, np.ndarray]) -> "PolyMatrix":
        return cls([[LaurentPoly.from_dict({k: m[i, j] for k, m in mats.items()})
                     for j in range(2)] for i in range(2)])

    def __getitem__(self, ij):
        i, j = ij
        return self.e[i][j]

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[self.e[i][j] + other.e[i][j] for j in range(2)] for i in range(2)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[self.e[i][j] - other.e[i][j] for j in range(2)] for i in range(2)])

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix([[-x for x in row] for row in self.e])

    def scale(self, f) -> "PolyMatrix":
        return PolyMatrix([[x * f for x in row] for row in self.e])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        a, b = self.e, other.e
        return PolyMatrix([[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)]
                           for i in range(2)])

    def trace(self) -> LaurentPoly:
        return self.e[0][0] + self.e[1][1]

    def det(self) -> LaurentPoly:
        return self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]

    def commutator(self, other: "PolyMatrix") -> "PolyMatrix":
        return self @ other - other @ self

    def __call__(self, lam: complex) -> np.ndarray:
        return np.array([[complex(x(lam)) for x in row] for row in self.e])

    def coeff(self, k: int) -> np.ndarray:
        return np.array([[x.coeff(k) for x in row] for row in self.e])

    @property
    def lo(self) -> int:
        los = [x.lo for row in self.e for x in row if not x.is_zero()]
        return min(los) if los else 0

    @property
    def hi(self) -> int:
        his = [x.hi for row in self.e for x in row if not x.is_zero()]
        return max(his) if his else 0

    def norm(self) -> float:
        return max(x.norm() for row in self.e for x in row)

    def __repr__(self) -> str:
        return f"PolyMatrix({self.e!r})"
