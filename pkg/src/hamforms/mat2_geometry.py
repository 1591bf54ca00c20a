"""2x2 quaternionic matrices: Dieudonne determinant, homographies on A u {oo},
Poincare extension to upper half-space points (z, r^2), isometric spheres."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ._util import fmt_frac, to_frac
from .errors import DegenerateArc, FixesInfinity, SingularMatrix
from .quat_algebra import AlgebraDescriptor, Quaternion, in_order


@dataclass(frozen=True)
class Mat2:
    a: Quaternion
    b: Quaternion
    c: Quaternion
    d: Quaternion

    @classmethod
    def of(cls, algebra: AlgebraDescriptor, a, b, c, d) -> "Mat2":
        """Build from Quaternions or rationals."""
        def q(x):
            return x if isinstance(x, Quaternion) else algebra.scalar(to_frac(x))
        return cls(q(a), q(b), q(c), q(d))

    @classmethod
    def identity(cls, algebra: AlgebraDescriptor) -> "Mat2":
        return cls.of(algebra, 1, 0, 0, 1)

    @property
    def algebra(self) -> AlgebraDescriptor:
        return self.a.algebra

    def __mul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def adjoint(self) -> "Mat2":
        """Conjugate transpose g*."""
        return Mat2(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())

    def is_hermitian(self) -> bool:
        return self == self.adjoint()

    def inverse(self) -> "Mat2":
        a, b, c, d = self.a, self.b, self.c, self.d
        if dieudonne_det_sq(self) == 0:
            raise SingularMatrix("matrix is not invertible")
        if a:
            ai = a.inv()
            s = d - c * ai * b
            si = s.inv()
            return Mat2(ai + ai * b * si * c * ai, -(ai * b * si), -(si * c * ai), si)
        # a = 0 forces b, c invertible
        bi, ci = b.inv(), c.inv()
        return Mat2(-(ci * d * bi), ci, bi, self.a.algebra.zero)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def to_json(self) -> list:
        return [[self.a.to_json(), self.b.to_json()], [self.c.to_json(), self.d.to_json()]]


@dataclass(frozen=True)
class HPoint:
    z: Quaternion
    rsq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rsq", to_frac(self.rsq))
        if self.rsq <= 0:
            raise ValueError("rsq must be positive")

    def to_json(self) -> dict:
        return {"z": self.z.to_json(), "rsq": fmt_frac(self.rsq)}


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()
ProjPoint = Quaternion | _Infinity  # finite points are plain Quaternions


def dieudonne_det_sq(g: Mat2) -> Fraction:
    """Det(g)^2 = n(ad) + n(bc) - tr(a cbar d bbar); branch formulas are asserted to agree."""
    a, b, c, d = g.entries()
    val = (a * d).norm() + (b * c).norm() - (a * c.conj() * d * b.conj()).trace()
    if a:
        ai = a.inv()
        assert (a * d - a * c * ai * b).norm() == val
    if c:
        ci = c.inv()
        assert (c * b - c * a * ci * d).norm() == val
    if b:
        bi = b.inv()
        assert (c * b - d * bi * a * b).norm() == val
    return val


def is_sl2o(g: Mat2) -> bool:
    return all(in_order(x) for x in g.entries()) and dieudonne_det_sq(g) == 1


def homography(g: Mat2, p) -> Quaternion | _Infinity:
    if dieudonne_det_sq(g) == 0:
        raise SingularMatrix("homography of a singular matrix")
    a, b, c, d = g.entries()
    if p is INFINITY:
        return a * c.inv() if c else INFINITY
    den = c * p + d
    if not den:
        return INFINITY
    return (a * p + b) * den.inv()


def poincare_ext(g: Mat2, x: HPoint) -> HPoint:
    if dieudonne_det_sq(g) == 0:
        raise SingularMatrix("Poincare extension of a singular matrix")
    a, b, c, d = g.entries()
    w = c * x.z + d
    den = w.norm() + x.rsq * c.norm()
    z = ((a * x.z + b) * w.conj() + a * c.conj() * x.rsq) / den
    return HPoint(z, x.rsq / (den * den))


def isometric_sphere(g: Mat2) -> tuple[Quaternion, Fraction]:
    if not g.c:
        raise FixesInfinity("lower-left entry is zero")
    return -(g.c.inv() * g.d), 1 / g.c.norm()


def in_sphere_exterior(g: Mat2, x: HPoint) -> bool:
    """S_g^+ test n(cz+d) + r^2 n(c) >= 1 (reduces to n(cz+d)+r^2 >= 1 when n(c)=1)."""
    return (g.c * x.z + g.d).norm() + x.rsq * g.c.norm() >= 1


def perp_length_log_arg(f, g: Mat2, x: Quaternion, y: Quaternion, tau) -> Fraction:
    """Square of |f o g(x, y)| / (tau n(y) sqrt(Delta)); n(x) replaces n(y) when y = 0."""
    from .forms import act, discriminant, evaluate
    tau = to_frac(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    delta = discriminant(f)
    if delta <= 0:
        raise ValueError("form must be indefinite")
    if not x and not y:
        raise ValueError("(x, y) must be nonzero")
    val = evaluate(act(f, g), x, y)
    if val == 0:
        raise DegenerateArc("f o g(x, y) = 0")
    nn = y.norm() if y else x.norm()
    return val * val / (tau * tau * nn * nn * delta)


def sample_generators(algebra: AlgebraDescriptor) -> list[Mat2]:
    A = algebra
    one, zero = A.one, A.zero
    gens = []
    for beta in A.order_basis:
        gens.append(Mat2(one, beta, zero, one))
        gens.append(Mat2(one, -beta, zero, one))
    gens.append(Mat2(zero, -one, one, zero))
    units = A.units
    for u in units:
        for v in units:
            gens.append(Mat2(u, zero, zero, v))
    return gens


def sample_sl2o(algebra: AlgebraDescriptor, seed: int, word_len: int) -> Mat2:
    """Pseudo-random word of length word_len in translations, the inversion and unit diagonals."""
    if word_len < 0:
        raise ValueError("word_len must be >= 0")
    rng = random.Random(seed)
    gens = sample_generators(algebra)
    # pick each kind with similar odds, otherwise the unit diagonals dominate
    kinds = [gens[: 2 * 4], [gens[8]], gens[9:]]
    g = Mat2.identity(algebra)
    for _ in range(word_len):
        g = g * rng.choice(rng.choice(kinds))
    return g
