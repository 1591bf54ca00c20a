"""Exact arithmetic in definite quaternion algebras (alpha, beta | Q) with a
fixed maximal order, for the class-number-one discriminants 2, 3, 5, 7, 13.

Elements are kept in rational structure coordinates over (1, I, J, K) with
I^2 = alpha, J^2 = beta, K = IJ = -JI. Nothing here touches floats.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from ._util import fmt_frac, mat_inv, to_frac
from .errors import AlgebraMismatch, DivisionByZero, UnsupportedAlgebra

SUPPORTED = (2, 3, 5, 7, 13)

_h = Fraction(1, 2)
_q = Fraction(1, 4)

# (alpha, beta, maximal order basis in structure coordinates)
_PRESENTATIONS = {
    2: (-1, -1, ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (_h, _h, _h, _h))),
    3: (-1, -3, ((1, 0, 0, 0), (0, 1, 0, 0), (0, _h, _h, 0), (_h, 0, 0, _h))),
    7: (-1, -7, ((1, 0, 0, 0), (0, 1, 0, 0), (0, _h, _h, 0), (_h, 0, 0, _h))),
    # the order for (-2,-p) is Z<1, I, (1+I+J)/2, (2+I+K)/4>; see notes
    5: (-2, -5, ((1, 0, 0, 0), (0, 1, 0, 0), (_h, _h, _h, 0), (_h, _q, 0, _q))),
    13: (-2, -13, ((1, 0, 0, 0), (0, 1, 0, 0), (_h, _h, _h, 0), (_h, _q, 0, _q))),
}


@dataclass(frozen=True, eq=False)
class AlgebraDescriptor:
    d_a: int
    alpha: Fraction
    beta: Fraction
    norm_gram: tuple
    basis_coords: tuple
    unit_count: int
    unit_coords: tuple = field(repr=False)
    _basis_inv: tuple = field(repr=False)

    @property
    def order_basis(self) -> tuple["Quaternion", ...]:
        return tuple(Quaternion(c, self) for c in self.basis_coords)

    @property
    def units(self) -> tuple["Quaternion", ...]:
        return tuple(Quaternion(c, self) for c in self.unit_coords)

    def element(self, *coords) -> "Quaternion":
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)):
            coords = tuple(coords[0])
        return Quaternion(coords, self)

    def scalar(self, q) -> "Quaternion":
        return Quaternion((q, 0, 0, 0), self)

    @property
    def one(self) -> "Quaternion":
        return self.scalar(1)

    @property
    def zero(self) -> "Quaternion":
        return self.scalar(0)

    @property
    def I(self) -> "Quaternion":
        return Quaternion((0, 1, 0, 0), self)

    @property
    def J(self) -> "Quaternion":
        return Quaternion((0, 0, 1, 0), self)

    @property
    def K(self) -> "Quaternion":
        return Quaternion((0, 0, 0, 1), self)

    def from_order_coords(self, ints) -> "Quaternion":
        """Element sum t_i b_i of the order basis."""
        acc = [Fraction(0)] * 4
        for t, b in zip(ints, self.basis_coords):
            for k in range(4):
                acc[k] += t * b[k]
        return Quaternion(acc, self)

    def order_coords(self, x: "Quaternion") -> tuple[Fraction, ...]:
        """Rational coordinates of x in the order basis."""
        return tuple(sum((x.coords[k] * self._basis_inv[k][j] for k in range(4)), Fraction(0))
                     for j in range(4))

    def __repr__(self):
        return f"AlgebraDescriptor(d_a={self.d_a}, alpha={self.alpha}, beta={self.beta})"

    def __reduce__(self):
        return (make_algebra, (self.d_a,))


class Quaternion:
    """Element of an AlgebraDescriptor's algebra. Immutable."""

    __slots__ = ("coords", "algebra")

    def __init__(self, coords, algebra: AlgebraDescriptor):
        c = tuple(to_frac(x) for x in coords)
        if len(c) != 4:
            raise ValueError("a quaternion has 4 coordinates")
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "algebra", algebra)

    def __setattr__(self, k, v):
        raise AttributeError("Quaternion is immutable")

    def __reduce__(self):
        return (Quaternion, (self.coords, self.algebra))

    def _check(self, other: "Quaternion"):
        if other.algebra is not self.algebra and other.algebra.d_a != self.algebra.d_a:
            raise AlgebraMismatch(f"d_a={self.algebra.d_a} vs d_a={other.algebra.d_a}")

    def _lift(self, other):
        if isinstance(other, Quaternion):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Quaternion((other, 0, 0, 0), self.algebra)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Quaternion([x + y for x, y in zip(self.coords, o.coords)], self.algebra)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Quaternion([x - y for x, y in zip(self.coords, o.coords)], self.algebra)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return Quaternion([-x for x in self.coords], self.algebra)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Quaternion([x * other for x in self.coords], self.algebra)
        if not isinstance(other, Quaternion):
            return NotImplemented
        self._check(other)
        al, be = self.algebra.alpha, self.algebra.beta
        x0, x1, x2, x3 = self.coords
        y0, y1, y2, y3 = other.coords
        return Quaternion((
            x0 * y0 + al * x1 * y1 + be * x2 * y2 - al * be * x3 * y3,
            x0 * y1 + x1 * y0 - be * x2 * y3 + be * x3 * y2,
            x0 * y2 + x2 * y0 + al * x1 * y3 - al * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ), self.algebra)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Quaternion([x * other for x in self.coords], self.algebra)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise DivisionByZero("division by zero scalar")
            return Quaternion([x / other for x in self.coords], self.algebra)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Quaternion):
            return self.algebra.d_a == other.algebra.d_a and self.coords == other.coords
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.coords == (Fraction(other), 0, 0, 0)
        return NotImplemented

    def __hash__(self):
        return hash((self.algebra.d_a, self.coords))

    def __bool__(self):
        return any(self.coords)

    def conj(self) -> "Quaternion":
        x0, x1, x2, x3 = self.coords
        return Quaternion((x0, -x1, -x2, -x3), self.algebra)

    def norm(self) -> Fraction:
        al, be = self.algebra.alpha, self.algebra.beta
        x0, x1, x2, x3 = self.coords
        return x0 * x0 - al * x1 * x1 - be * x2 * x2 + al * be * x3 * x3

    def trace(self) -> Fraction:
        return 2 * self.coords[0]

    def inv(self) -> "Quaternion":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("inverse of zero quaternion")
        return self.conj() / n

    def is_scalar(self) -> bool:
        return not any(self.coords[1:])

    def to_json(self) -> list[str]:
        return [fmt_frac(c) for c in self.coords]

    def __repr__(self):
        return "Q(" + ", ".join(fmt_frac(c) for c in self.coords) + f"; d_a={self.algebra.d_a})"


def mul(x: Quaternion, y: Quaternion) -> Quaternion:
    return x * y


def conj(x: Quaternion) -> Quaternion:
    return x.conj()


def norm(x: Quaternion) -> Fraction:
    return x.norm()


def trace(x: Quaternion) -> Fraction:
    return x.trace()


def inv(x: Quaternion) -> Quaternion:
    return x.inv()


def in_order(x: Quaternion) -> bool:
    return all(c.denominator == 1 for c in x.algebra.order_coords(x))


def _norm1_points(alpha, beta, basis):
    """All order-basis integer vectors t with n(sum t_i b_i) = 1, by a plain box search."""
    diag = (Fraction(1), -alpha, -beta, alpha * beta)
    gram = [[sum((basis[i][k] * basis[j][k] * diag[k] for k in range(4)), Fraction(0))
             for j in range(4)] for i in range(4)]
    ginv = mat_inv(gram)
    # |t_i|^2 <= n * (G^-1)_ii for any vector of norm n
    bounds = [math.isqrt(int(ginv[i][i])) + 1 for i in range(4)]
    pts = []
    for t in itertools.product(*(range(-b, b + 1) for b in bounds)):
        n = sum(t[i] * t[j] * gram[i][j] for i in range(4) for j in range(4))
        if n == 1:
            pts.append(tuple(sum((t[i] * basis[i][k] for i in range(4)), Fraction(0)) for k in range(4)))
    return pts


@lru_cache(maxsize=None)
def make_algebra(d_a: int) -> AlgebraDescriptor:
    if isinstance(d_a, bool) or not isinstance(d_a, int) or d_a not in _PRESENTATIONS:
        raise UnsupportedAlgebra(f"d_a={d_a!r}; supported: {SUPPORTED}")
    alpha, beta, basis = _PRESENTATIONS[d_a]
    alpha, beta = Fraction(alpha), Fraction(beta)
    basis = tuple(tuple(Fraction(x) for x in row) for row in basis)
    gram = tuple(tuple(Fraction(v if i == j else 0) for j in range(4))
                 for i, v in enumerate((1, -alpha, -beta, alpha * beta)))
    binv = mat_inv([list(r) for r in basis])
    units = tuple(sorted(_norm1_points(alpha, beta, basis)))
    expected = 24 // (d_a - 1)
    if len(units) != expected:
        raise AssertionError(f"unit enumeration gave {len(units)}, expected {expected}")
    return AlgebraDescriptor(d_a, alpha, beta, gram, basis, len(units), units,
                             tuple(tuple(r) for r in binv))
