"""Matrix and vector polynomials over exact rationals, plus differential
operators with matrix-polynomial coefficients acting from the left.

Coefficients are stored by ascending power with trailing zeros trimmed, so
structural equality is exact polynomial equality.  The degree of the zero
polynomial is the sentinel float('-inf'), which compares correctly against
integer degrees.  All values are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .exact import format_rational

__all__ = ["MatPoly", "VecPoly", "DiffOp", "NEG_INF"]

NEG_INF = float("-inf")


def _trimmed(items, is_zero) -> tuple:
    n = len(items)
    while n > 0 and is_zero(items[n - 1]):
        n -= 1
    return tuple(items[:n])


@dataclass(frozen=True)
class MatPoly:
    """Square-matrix-valued polynomial in one variable u."""

    dim: int
    coeffs: tuple = ()

    def __post_init__(self):
        frozen = [linalg.freeze_matrix(c) for c in self.coeffs]
        for c in frozen:
            if len(c) != self.dim or any(len(row) != self.dim for row in c):
                raise ValueError("coefficient matrices must be dim x dim")
        object.__setattr__(self, "coeffs", _trimmed(frozen, linalg.is_zero_matrix))

    @classmethod
    def zero(cls, dim: int) -> MatPoly:
        return cls(dim, ())

    @classmethod
    def constant(cls, mat) -> MatPoly:
        mat = linalg.freeze_matrix(mat)
        return cls(len(mat), (mat,))

    @classmethod
    def identity(cls, dim: int) -> MatPoly:
        return cls(dim, (linalg.identity(dim),))

    @classmethod
    def from_scalar(cls, dim: int, scalar_coeffs) -> MatPoly:
        """Scalar polynomial times the identity matrix."""
        return cls(dim, tuple(linalg.scale(linalg.identity(dim), c) for c in scalar_coeffs))

    @classmethod
    def monomial(cls, dim: int, mat, power: int) -> MatPoly:
        if power < 0:
            raise ValueError("power must be non-negative")
        pad = (linalg.zeros(dim),) * power
        return cls(dim, pad + (linalg.freeze_matrix(mat),))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, m: int):
        if 0 <= m < len(self.coeffs):
            return self.coeffs[m]
        return linalg.zeros(self.dim)

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def entry(self, i: int, j: int) -> tuple:
        """Scalar coefficient sequence of one entry, ascending, trimmed."""
        return _trimmed([c[i][j] for c in self.coeffs], lambda x: x == 0)

    def _require_same_dim(self, other):
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")

    def __add__(self, other: MatPoly) -> MatPoly:
        self._require_same_dim(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return MatPoly(self.dim, tuple(linalg.add(self.coeff(m), other.coeff(m)) for m in range(n)))

    def __sub__(self, other: MatPoly) -> MatPoly:
        return self + (-other)

    def __neg__(self) -> MatPoly:
        return MatPoly(self.dim, tuple(linalg.scale(c, -1) for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, MatPoly):
            self._require_same_dim(other)
            if self.is_zero() or other.is_zero():
                return MatPoly.zero(self.dim)
            out = [linalg.zeros(self.dim) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
            for a, ca in enumerate(self.coeffs):
                for b, cb in enumerate(other.coeffs):
                    out[a + b] = linalg.add(out[a + b], linalg.matmul(ca, cb))
            return MatPoly(self.dim, tuple(out))
        if isinstance(other, (int, Fraction)):
            return MatPoly(self.dim, tuple(linalg.scale(c, other) for c in self.coeffs))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def mul_scalar_poly(self, scalar_coeffs) -> MatPoly:
        """Multiply by a scalar polynomial given by ascending coefficients."""
        s = [Fraction(c) for c in scalar_coeffs]
        while s and s[-1] == 0:
            s.pop()
        if not s or self.is_zero():
            return MatPoly.zero(self.dim)
        out = [linalg.zeros(self.dim) for _ in range(len(self.coeffs) + len(s) - 1)]
        for a, ca in enumerate(self.coeffs):
            for b, cb in enumerate(s):
                if cb:
                    out[a + b] = linalg.add(out[a + b], linalg.scale(ca, cb))
        return MatPoly(self.dim, tuple(out))

    def transpose(self) -> MatPoly:
        return MatPoly(self.dim, tuple(linalg.transpose(c) for c in self.coeffs))

    def derivative(self) -> MatPoly:
        return MatPoly(self.dim, tuple(linalg.scale(c, m) for m, c in enumerate(self.coeffs) if m >= 1))

    def evaluate(self, u0):
        u0 = Fraction(u0)
        total = linalg.zeros(self.dim)
        for c in reversed(self.coeffs):
            total = linalg.add(linalg.scale(total, u0), c)
        return total

    def matvec(self, v: VecPoly) -> VecPoly:
        """Product M(u) v(u) with a vector polynomial."""
        if self.dim != v.dim:
            raise ValueError("dimension mismatch")
        if self.is_zero() or v.is_zero():
            return VecPoly.zero(self.dim)
        out = [(Fraction(0),) * self.dim for _ in range(len(self.coeffs) + len(v.coeffs) - 1)]
        for a, ca in enumerate(self.coeffs):
            for b, cb in enumerate(v.coeffs):
                out[a + b] = linalg.vec_add(out[a + b], linalg.matvec(ca, cb))
        return VecPoly(self.dim, tuple(out))

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "coeffs": [[format_rational(x) for row in c for x in row] for c in self.coeffs],
        }


@dataclass(frozen=True)
class VecPoly:
    """Column-vector-valued polynomial in one variable u."""

    dim: int
    coeffs: tuple = ()

    def __post_init__(self):
        frozen = [linalg.freeze_vector(c) for c in self.coeffs]
        for c in frozen:
            if len(c) != self.dim:
                raise ValueError("coefficient vectors must have length dim")
        object.__setattr__(self, "coeffs", _trimmed(frozen, linalg.is_zero_vector))

    @classmethod
    def zero(cls, dim: int) -> VecPoly:
        return cls(dim, ())

    @classmethod
    def constant(cls, vec) -> VecPoly:
        vec = linalg.freeze_vector(vec)
        return cls(len(vec), (vec,))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, m: int):
        if 0 <= m < len(self.coeffs):
            return self.coeffs[m]
        return (Fraction(0),) * self.dim

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: VecPoly) -> VecPoly:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        n = max(len(self.coeffs), len(other.coeffs))
        return VecPoly(self.dim, tuple(linalg.vec_add(self.coeff(m), other.coeff(m)) for m in range(n)))

    def __sub__(self, other: VecPoly) -> VecPoly:
        return self + (-other)

    def __neg__(self) -> VecPoly:
        return VecPoly(self.dim, tuple(linalg.vec_scale(c, -1) for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return VecPoly(self.dim, tuple(linalg.vec_scale(c, other) for c in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def derivative(self) -> VecPoly:
        return VecPoly(self.dim, tuple(linalg.vec_scale(c, m) for m, c in enumerate(self.coeffs) if m >= 1))

    def evaluate(self, u0):
        u0 = Fraction(u0)
        total = (Fraction(0),) * self.dim
        for c in reversed(self.coeffs):
            total = linalg.vec_add(linalg.vec_scale(total, u0), c)
        return total

    def to_json_rows(self) -> list:
        return [[format_rational(x) for x in c] for c in self.coeffs]


@dataclass(frozen=True)
class DiffOp:
    """Differential operator sum_j A_j(u) d^j/du^j with MatPoly coefficients.

    Coefficients are stored leading order first, order zero last.  The
    operator acts on matrix or vector polynomials by left multiplication of
    the coefficients.  Order is structural: it is preserved by arithmetic
    even when leading coefficients vanish, so a commutator keeps its shape.
    """

    dim: int
    coeffs: tuple = ()

    def __post_init__(self):
        cs = tuple(self.coeffs)
        if not cs:
            raise ValueError("an operator needs at least its order-zero coefficient")
        for c in cs:
            if not isinstance(c, MatPoly) or c.dim != self.dim:
                raise ValueError("coefficients must be MatPoly of matching dimension")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def identity(cls, dim: int) -> DiffOp:
        return cls(dim, (MatPoly.identity(dim),))

    @classmethod
    def from_ascending(cls, dim: int, coeffs_ascending) -> DiffOp:
        return cls(dim, tuple(reversed(tuple(coeffs_ascending))))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff_of_order(self, j: int) -> MatPoly:
        if 0 <= j <= self.order:
            return self.coeffs[self.order - j]
        return MatPoly.zero(self.dim)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def is_degree_bounded(self) -> bool:
        """True when deg A_j <= j for every order j, the class closed under composition."""
        return all(self.coeff_of_order(j).degree <= j for j in range(self.order + 1))

    def apply(self, f):
        """Apply to a MatPoly or VecPoly: sum_j A_j(u) f^(j)(u)."""
        if isinstance(f, MatPoly):
            out = MatPoly.zero(self.dim)
            combine = lambda a, g: a * g
        elif isinstance(f, VecPoly):
            out = VecPoly.zero(self.dim)
            combine = lambda a, g: a.matvec(g)
        else:
            raise TypeError("apply expects a MatPoly or VecPoly")
        if f.dim != self.dim:
            raise ValueError("dimension mismatch")
        g = f
        for j in range(self.order + 1):
            a = self.coeff_of_order(j)
            if not a.is_zero() and not g.is_zero():
                out = out + combine(a, g)
            g = g.derivative()
        return out

    def compose(self, other: DiffOp) -> DiffOp:
        """Operator product self(other(.)), expanded by the Leibniz rule.

        The term A_i d^i applied after B_j d^j contributes
        C(i, m) A_i B_j^(m) at order i + j - m for 0 <= m <= i.
        """
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        total = self.order + other.order
        acc = [MatPoly.zero(self.dim) for _ in range(total + 1)]
        for i in range(self.order + 1):
            ai = self.coeff_of_order(i)
            if ai.is_zero():
                continue
            for j in range(other.order + 1):
                bj = other.coeff_of_order(j)
                for m in range(i + 1):
                    if bj.is_zero():
                        break
                    acc[i + j - m] = acc[i + j - m] + (ai * bj) * math.comb(i, m)
                    bj = bj.derivative()
        return DiffOp.from_ascending(self.dim, acc)

    def __add__(self, other: DiffOp) -> DiffOp:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        top = max(self.order, other.order)
        return DiffOp.from_ascending(
            self.dim, [self.coeff_of_order(j) + other.coeff_of_order(j) for j in range(top + 1)]
        )

    def __sub__(self, other: DiffOp) -> DiffOp:
        return self + (-other)

    def __neg__(self) -> DiffOp:
        return DiffOp(self.dim, tuple(-c for c in self.coeffs))
