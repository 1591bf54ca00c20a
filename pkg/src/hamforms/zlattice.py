"""Full-rank Z-lattices inside a quaternion algebra.

A lattice is stored as (denominator d, integer row-HNF H) with L = H/d and d
minimal, which makes equal lattices compare equal field-wise.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from ._util import fmt_frac, frac_gcd, mat_det, mat_inv
from .errors import AlgebraMismatch, DivisionByZero, NotASublattice
from .quat_algebra import AlgebraDescriptor, Quaternion


def hnf(rows) -> list[list[int]]:
    """Row Hermite normal form of an integer matrix with 4 columns.

    Returns the nonzero rows: upper triangular, positive pivots, entries above
    each pivot reduced into [0, pivot).
    """
    work = [list(r) for r in rows if any(r)]
    ncols = len(work[0]) if work else 0
    out = []
    for col in range(ncols):
        while True:
            nz = [r for r in work if r[col] != 0]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda r: abs(r[col]))
            for r in nz:
                if r is not piv:
                    q = r[col] // piv[col]
                    for k in range(col, ncols):
                        r[k] -= q * piv[k]
            work = [r for r in work if any(r)]
        if not nz:
            continue
        piv = nz[0]
        work = [r for r in work if r is not piv]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
    # reduce entries above pivots
    for i in range(len(out)):
        pc = next(k for k in range(ncols) if out[i][k] != 0)
        p = out[i][pc]
        for j in range(i):
            q = out[j][pc] // p
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], out[i])]
    return out


@dataclass(frozen=True)
class ZLattice:
    denom: int
    hnf: tuple
    algebra: AlgebraDescriptor

    def __eq__(self, other):
        if not isinstance(other, ZLattice):
            return NotImplemented
        return (self.algebra.d_a == other.algebra.d_a and self.denom == other.denom
                and self.hnf == other.hnf)

    def __hash__(self):
        return hash((self.algebra.d_a, self.denom, self.hnf))

    @property
    def basis(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.denom) for x in row] for row in self.hnf]

    def basis_elements(self) -> list[Quaternion]:
        return [Quaternion(r, self.algebra) for r in self.basis]

    def det(self) -> Fraction:
        """|det| of the basis in structure coordinates."""
        p = 1
        for i in range(4):
            p *= self.hnf[i][i]
        return Fraction(p, self.denom ** 4)

    def contains(self, x: Quaternion) -> bool:
        # solve t H = d x over Q; H is upper triangular
        y = [c * self.denom for c in x.coords]
        if any(v.denominator != 1 for v in y):
            return False
        y = [int(v) for v in y]
        for i in range(4):
            p = self.hnf[i][i]
            if y[i] % p:
                return False
            t = y[i] // p
            if t:
                y = [a - t * b for a, b in zip(y, self.hnf[i])]
        return not any(y)

    def to_json(self) -> dict:
        return {"d_a": self.algebra.d_a, "denominator": self.denom, "hnf": [list(r) for r in self.hnf]}

    def __repr__(self):
        return f"ZLattice(d_a={self.algebra.d_a}, denom={self.denom}, hnf={self.hnf})"


def from_generators(gens, algebra: AlgebraDescriptor) -> ZLattice:
    """Lattice spanned by rational 4-vectors or Quaternions (must have full rank)."""
    vecs = []
    for g in gens:
        if isinstance(g, Quaternion):
            if g.algebra.d_a != algebra.d_a:
                raise AlgebraMismatch("generator from another algebra")
            vecs.append(g.coords)
        else:
            vecs.append(tuple(Fraction(x) for x in g))
    d0 = reduce(lcm, (x.denominator for v in vecs for x in v), 1)
    ints = [[int(x * d0) for x in v] for v in vecs]
    h = hnf(ints)
    if len(h) != 4:
        raise ValueError(f"generators span rank {len(h)}, need 4")
    content = reduce(gcd, (x for r in h for x in r), 0)
    g = gcd(d0, content)
    d = d0 // g
    h = tuple(tuple(x // g for x in r) for r in h)
    return ZLattice(d, h, algebra)


def order_lattice(algebra: AlgebraDescriptor) -> ZLattice:
    return from_generators(algebra.basis_coords, algebra)


def standard_lattice(algebra: AlgebraDescriptor) -> ZLattice:
    """Z<1, I, J, K>; for d_a = 2 this is the Lipschitz order."""
    return from_generators([[int(i == j) for j in range(4)] for i in range(4)], algebra)


def _same(l1: ZLattice, l2: ZLattice):
    if l1.algebra.d_a != l2.algebra.d_a:
        raise AlgebraMismatch(f"d_a={l1.algebra.d_a} vs d_a={l2.algebra.d_a}")


def dual(L: ZLattice) -> ZLattice:
    """{y : <b_i, y> in Z} for the standard coordinate pairing."""
    inv = mat_inv(L.basis)
    # columns of B^-1 form the dual basis
    return from_generators([[inv[r][c] for r in range(4)] for c in range(4)], L.algebra)


def sum(l1: ZLattice, l2: ZLattice) -> ZLattice:  # noqa: A001 - mirrors the operation name
    _same(l1, l2)
    return from_generators(l1.basis + l2.basis, l1.algebra)


def intersect(l1: ZLattice, l2: ZLattice) -> ZLattice:
    _same(l1, l2)
    return dual(sum(dual(l1), dual(l2)))


def index(l_sub: ZLattice, l_super: ZLattice) -> Fraction:
    _same(l_sub, l_super)
    if not all(l_super.contains(b) for b in l_sub.basis_elements()):
        raise NotASublattice("first lattice is not contained in the second")
    return l_sub.det() / l_super.det()


def scale_left(z, L: ZLattice) -> ZLattice:
    z = _as_quat(z, L.algebra)
    if not z:
        raise DivisionByZero("scaling by zero")
    return from_generators([z * b for b in L.basis_elements()], L.algebra)


def scale_right(L: ZLattice, z) -> ZLattice:
    z = _as_quat(z, L.algebra)
    if not z:
        raise DivisionByZero("scaling by zero")
    return from_generators([b * z for b in L.basis_elements()], L.algebra)


def _as_quat(z, algebra) -> Quaternion:
    if isinstance(z, Quaternion):
        if z.algebra.d_a != algebra.d_a:
            raise AlgebraMismatch("scalar from another algebra")
        return z
    return algebra.scalar(z)


def _unit_vectors(algebra):
    return [Quaternion([int(i == k) for k in range(4)], algebra) for i in range(4)]


def _multiplier_order(L: ZLattice, side: str) -> ZLattice:
    # x is in the order iff coords(x) M_i B^-1 is integral for every basis vector b_i,
    # where M_i is the matrix of x -> x b_i (left order) or x -> b_i x (right order).
    A = L.algebra
    binv = mat_inv(L.basis)
    es = _unit_vectors(A)
    cols = []
    for b in L.basis_elements():
        rows = [(e * b if side == "left" else b * e).coords for e in es]
        prod = [[_dot(rows[r], [binv[k][c] for k in range(4)], (1, 1, 1, 1)) for c in range(4)]
                for r in range(4)]
        cols.extend([[prod[r][c] for r in range(4)] for c in range(4)])
    return dual(from_generators(cols, A))


def left_order(L: ZLattice) -> ZLattice:
    """{x in A : x L in L}."""
    return _multiplier_order(L, "left")


def right_order(L: ZLattice) -> ZLattice:
    """{x in A : L x in L}."""
    return _multiplier_order(L, "right")


@dataclass(frozen=True)
class IdealNorm:
    value: Fraction

    def __eq__(self, other):
        if isinstance(other, IdealNorm):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return fmt_frac(self.value)


def ideal_norm(L: ZLattice) -> IdealNorm:
    """gcd of the reduced norm over L.

    The values n(b_i) and n(b_i + b_j) generate the same group as all values of
    the norm form, by bilinearity; rational gcd handles fractional lattices
    directly (equivalent to scaling into O and dividing by n(c)).
    """
    bs = L.basis_elements()
    vals = [b.norm() for b in bs]
    vals += [(bs[i] + bs[j]).norm() for i in range(4) for j in range(i + 1, 4)]
    return IdealNorm(frac_gcd(vals))


def chenevier_product(z: Quaternion) -> Fraction:
    """[O : O n zO n Oz n zOz] * n(Oz^-1 + O)^4, which equals 1."""
    if not z:
        raise DivisionByZero("z must be nonzero")
    A = z.algebra
    O = order_lattice(A)
    zO = scale_left(z, O)
    lam = intersect(intersect(O, zO), intersect(scale_right(O, z), scale_right(zO, z)))
    n = ideal_norm(sum(scale_right(O, z.inv()), O)).value
    return index(lam, O) * n ** 4


def lattice_covolume_sq(L: ZLattice) -> Fraction:
    """Squared covolume w.r.t. the norm form: det of the Gram matrix."""
    diag = [L.algebra.norm_gram[k][k] for k in range(4)]
    B = L.basis
    gram = [[_dot(B[i], B[j], diag) for j in range(4)] for i in range(4)]
    return mat_det(gram)


def _dot(u, v, w):
    acc = Fraction(0)
    for a, b, c in zip(u, v, w):
        acc += a * b * c
    return acc
