"""Binary Hamiltonian forms f(u, v) = a n(u) + tr(conj(u) b v) + c n(v)."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from ._util import fmt_frac, to_frac
from .errors import AlgebraMismatch, NotIndefinite, NotPositiveDefinite
from .mat2_geometry import HPoint, Mat2
from .quat_algebra import AlgebraDescriptor, Quaternion, in_order, make_algebra


class FormClass(enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    NEGATIVE_DEFINITE = "NegativeDefinite"
    INDEFINITE = "Indefinite"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class HermForm:
    a: Fraction
    b: Quaternion
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", to_frac(self.a))
        object.__setattr__(self, "c", to_frac(self.c))

    @classmethod
    def of(cls, algebra: AlgebraDescriptor, a, b, c) -> "HermForm":
        if not isinstance(b, Quaternion):
            b = algebra.element(*b) if isinstance(b, (list, tuple)) else algebra.scalar(to_frac(b))
        return cls(a, b, c)

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.b.algebra

    def __neg__(self) -> "HermForm":
        return HermForm(-self.a, -self.b, -self.c)

    def matrix(self) -> Mat2:
        A = self.algebra
        return Mat2(A.scalar(self.a), self.b, self.b.conj(), A.scalar(self.c))

    def key(self):
        """Canonical sort key: (a, b coords, c)."""
        return (self.a, self.b.coords, self.c)

    def to_json(self) -> dict:
        return {"a": fmt_frac(self.a), "b": self.b.to_json(), "c": fmt_frac(self.c),
                "d_a": self.algebra.d_a}

    @classmethod
    def from_json(cls, obj) -> "HermForm":
        A = make_algebra(int(obj.get("d_a", 2)))
        return cls(to_frac(obj["a"]), A.element(*obj["b"]), to_frac(obj["c"]))


def _same(x: Quaternion, y: Quaternion):
    if x.algebra.d_a != y.algebra.d_a:
        raise AlgebraMismatch("form and arguments live in different algebras")


def evaluate(f: HermForm, u: Quaternion, v: Quaternion) -> Fraction:
    _same(f.b, u)
    _same(f.b, v)
    val = f.a * u.norm() + (u.conj() * f.b * v).trace() + f.c * v.norm()
    if __debug__ and is_integral(f) and in_order(u) and in_order(v):
        assert val.denominator == 1
    return val


def discriminant(f: HermForm) -> Fraction:
    return f.b.norm() - f.a * f.c


def classify(f: HermForm) -> FormClass:
    delta = discriminant(f)
    if delta > 0:
        return FormClass.INDEFINITE
    if delta == 0:
        return FormClass.DEGENERATE
    return FormClass.POSITIVE_DEFINITE if f.a > 0 else FormClass.NEGATIVE_DEFINITE


def is_integral(f: HermForm) -> bool:
    return f.a.denominator == 1 and f.c.denominator == 1 and in_order(f.b)


def act(f: HermForm, g: Mat2) -> HermForm:
    """f o g, through M(f o g) = g* M(f) g."""
    m = g.adjoint() * f.matrix() * g
    assert m.a.is_scalar() and m.d.is_scalar()
    assert m.c == m.b.conj()
    out = HermForm(m.a.coords[0], m.b, m.d.coords[0])
    if __debug__:
        from .mat2_geometry import dieudonne_det_sq
        if dieudonne_det_sq(g) == 1:
            assert discriminant(out) == discriminant(f)
    return out


@dataclass(frozen=True)
class Sphere:
    center: Quaternion
    radius_sq: Fraction


@dataclass(frozen=True)
class Hyperplane:
    """{z : tr(conj(z) normal) + offset = 0} together with oo."""
    normal: Quaternion
    offset: Fraction


def c_infty(f: HermForm) -> Sphere | Hyperplane:
    delta = discriminant(f)
    if delta <= 0:
        raise NotIndefinite("C_oo(f) needs Delta > 0")
    if f.a != 0:
        return Sphere(-(f.b / f.a), delta / (f.a * f.a))
    return Hyperplane(f.b, f.c)


def phi_map(f: HermForm) -> HPoint:
    if classify(f) is not FormClass.POSITIVE_DEFINITE:
        raise NotPositiveDefinite("phi_map needs a positive definite form")
    return HPoint(-(f.b / f.a), -discriminant(f) / (f.a * f.a))


def on_locus(f: HermForm, x: HPoint) -> bool:
    if discriminant(f) <= 0:
        raise NotIndefinite("C(f) needs Delta > 0")
    return evaluate(f, x.z, x.z.algebra.one) + f.a * x.rsq == 0


def is_reciprocal_witness(f: HermForm, g: Mat2) -> bool:
    return act(f, g) == -f
