"""Deliberately naive cross-checks. Nothing here reuses the algorithm it checks:
shell counts come from a Fincke-Pohst kernel (not the unit search in
make_algebra), the ideal norm from a gcd over enumerated values, the indefinite
reduced test from brute-force active sets instead of the multiplier solver."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import numpy as np

from . import _kernels
from . import zlattice as zl
from ._util import frac_gcd, mat_det
from .forms import HermForm, discriminant
from .quat_algebra import Quaternion

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction


@dataclass(frozen=True)
class NormShellCount:
    m: int
    count: int


def _norm_gram(L: zl.ZLattice):
    B = L.basis
    diag = [L.algebra.norm_gram[k][k] for k in range(4)]
    return [[sum((B[i][k] * B[j][k] * diag[k] for k in range(4)), Fraction(0)) for j in range(4)]
            for i in range(4)]


def _integer_gram(L: zl.ZLattice):
    G = _norm_gram(L)
    H = [[2 * x for x in row] for row in G]
    if any(x.denominator != 1 for row in H for x in row):
        raise ValueError("norm form is not integral on this lattice; scale it first")
    return np.array([[int(x) for x in row] for row in H], dtype=np.int64)


def shell_array(L: zl.ZLattice, bound: int) -> np.ndarray:
    return _kernels.shell_counts(_integer_gram(L), int(bound))


def enumerate_by_norm(L: zl.ZLattice, bound: int) -> list[NormShellCount]:
    if bound < 1:
        raise ValueError("bound must be >= 1")
    counts = shell_array(L, bound)
    return [NormShellCount(m, int(counts[m])) for m in range(1, bound + 1)]


def ideal_norm_bruteforce(L: zl.ZLattice, bound: int) -> Fraction:
    """gcd of all norm values up to bound (lattice must have integral norms)."""
    counts = shell_array(L, bound)
    return Fraction(reduce(gcd, (m for m in range(1, bound + 1) if counts[m]), 0))


def zeta_partial(L: zl.ZLattice, s: float, bound: int) -> float:
    """n(L)^(2s) * sum over 0 < n(x) <= bound of n(x)^(-2s)."""
    if s <= 1:
        raise ValueError("s must exceed 1")
    counts = shell_array(L, bound)
    m = np.arange(1, bound + 1, dtype=np.float64)
    nl = float(ideal_norm_bruteforce(L, bound))
    return float(nl ** (2 * s) * np.sum(counts[1:] * m ** (-2.0 * s)))


def zeta_tail_bound(L: zl.ZLattice, bound: int) -> float:
    """Upper bound for the omitted part of zeta_partial(L, 2, bound) (unnormalised values).

    Lattice points of norm <= X lie in a ball of radius sqrt(X); counting fundamental
    cells meeting it gives N(X) <= (pi^2/2)(sqrt(X) + rho)^4 / covol, rho the cell
    diameter bound sum_i |b_i|. Partial summation then bounds the tail by
    4 * int_M^oo N(x) x^-5 dx.
    """
    covol = math.sqrt(float(zl.lattice_covolume_sq(L)))
    rho = sum(math.sqrt(float(b.norm())) for b in L.basis_elements())
    C = (math.pi ** 2 / 2) / covol
    M = float(bound)
    # (sqrt x + rho)^4 = x^2 + 4 rho x^1.5 + 6 rho^2 x + 4 rho^3 x^0.5 + rho^4
    terms = [(1, 2.0), (4 * rho, 1.5), (6 * rho ** 2, 1.0), (4 * rho ** 3, 0.5), (rho ** 4, 0.0)]
    return 4 * C * sum(c * M ** (k - 4) / (4 - k) for c, k in terms)


def relatively_prime(u: Quaternion, v: Quaternion) -> bool:
    """Ou + Ov = O, and n(Ou n Ov) = n(u) n(v) when uv != 0."""
    if not u and not v:
        raise ValueError("(u, v) must be nonzero")
    A = u.algebra
    O = zl.order_lattice(A)
    parts = [zl.scale_right(O, x) for x in (u, v) if x]
    I = parts[0] if len(parts) == 1 else zl.sum(parts[0], parts[1])
    if I != O:
        return False
    if u and v:
        K = zl.intersect(parts[0], parts[1])
        return zl.ideal_norm(K).value == u.norm() * v.norm()
    return True


def _witness_expr(u, v, up, vp) -> Fraction:
    return (u * vp).norm() + (up * v).norm() - (u * v.conj() * vp * up.conj()).trace()


def search_witness_ii(u: Quaternion, v: Quaternion, box: int):
    """Order points (u', v') with coordinates in [-box, box] and
    n(uv') + n(u'v) - tr(u vbar v' u'bar) = 1, or None."""
    A = u.algebra
    basis = A.order_basis
    zero = A.zero
    gens = [(b, zero) for b in basis] + [(zero, b) for b in basis]

    def E(t):
        up = sum((ti * g[0] for ti, g in zip(t, gens)), zero)
        vp = sum((ti * g[1] for ti, g in zip(t, gens)), zero)
        return _witness_expr(u, v, up, vp)

    n = 8
    unit = [[int(i == j) for j in range(n)] for i in range(n)]
    diag = [E(unit[i]) for i in range(n)]
    Q = [[diag[i] if i == j else
          (E([x + y for x, y in zip(unit[i], unit[j])]) - diag[i] - diag[j]) / 2
          for j in range(n)] for i in range(n)]
    den = reduce(lcm, (x.denominator for row in Q for x in row), 1)
    Qi = np.array([[int(x * den) for x in row] for row in Q], dtype=np.int64)
    rng = np.arange(-box, box + 1, dtype=np.int64)
    tail = np.array(list(itertools.product(rng, repeat=n - 2)), dtype=np.int64)
    # E(t) = t^T Q t, split t = (h, tail)
    Qtt = np.einsum("ij,jk,ik->i", tail, Qi[2:, 2:], tail)
    for h in itertools.product(rng, repeat=2):
        h = np.array(h, dtype=np.int64)
        val = h @ Qi[:2, :2] @ h + 2 * (tail @ (Qi[2:, :2] @ h)) + Qtt
        hits = np.nonzero(val == den)[0]
        if len(hits):
            t = list(h) + list(tail[hits[0]])
            up = sum((int(ti) * g[0] for ti, g in zip(t, gens)), zero)
            vp = sum((int(ti) * g[1] for ti, g in zip(t, gens)), zero)
            assert _witness_expr(u, v, up, vp) == 1
            return up, vp
    return None


def _solve(M, r):
    """Exact solve of a small square system, None if singular."""
    n = len(M)
    a = [list(row) + [ri] for row, ri in zip(M, r)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        for i in range(n):
            if i != col and a[i][col] != 0:
                fct = a[i][col] / a[col][col]
                a[i] = [x - fct * y for x, y in zip(a[i], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def reduced_indefinite_bruteforce(f: HermForm) -> bool:
    """Does C(f) meet the weak domain? Brute force over active sets of the
    24 linear constraints (8 box, 16 vertex spheres with r^2 eliminated)."""
    delta = discriminant(f)
    if delta <= 0:
        raise ValueError("indefinite forms only")
    b = f.b.coords
    if f.a == 0:
        # the hyperplane 2<z,b> + c = 0 meets the cube iff vertex values change sign (or vanish)
        vals = [2 * sum(bl for bl, sl in zip(b, s) if sl) + f.c
                for s in itertools.product((0, 1), repeat=4)]
        return min(vals) <= 0 <= max(vals)
    if f.a < 0:
        f = -f
        b = f.b.coords
    a = _Q(f.a.numerator, f.a.denominator)
    w = [-_Q(x.numerator, x.denominator) / a for x in b]
    rho = _Q(delta.numerator, delta.denominator) / (a * a)
    cons = []  # (normal, rhs): normal . X >= rhs
    for l in range(4):
        e = [_Q(int(l == k)) for k in range(4)]
        cons.append((e, _Q(0)))
        cons.append(([-x for x in e], _Q(-1)))
    for s in itertools.product((0, 1), repeat=4):
        normal = [2 * (w[k] - s[k]) for k in range(4)]
        rhs = 1 - rho - sum(s[k] - w[k] * w[k] for k in range(4))
        cons.append((normal, rhs))
    best = None
    for size in range(5):
        for S in itertools.combinations(range(len(cons)), size):
            N = [cons[i][0] for i in S]
            r = [cons[i][1] for i in S]
            if size:
                gram = [[sum(x * y for x, y in zip(p, q)) for q in N] for p in N]
                rhs = [ri - sum(x * y for x, y in zip(p, w)) for p, ri in zip(N, r)]
                mu = _solve(gram, rhs)
                if mu is None:
                    continue
                X = [w[k] + sum(m * p[k] for m, p in zip(mu, N)) for k in range(4)]
            else:
                X = list(w)
            if all(sum(x * y for x, y in zip(p, X)) >= rr for p, rr in cons):
                d = sum((X[k] - w[k]) ** 2 for k in range(4))
                if best is None or d < best:
                    best = d
    return best is not None and best < rho


def index_by_det(l_sub: zl.ZLattice, l_super: zl.ZLattice) -> Fraction:
    """Index from determinants of the raw bases (no containment check)."""
    return abs(mat_det(l_sub.basis) / mat_det(l_super.basis))


def ideal_norm_by_pairs(L: zl.ZLattice, box: int = 2) -> Fraction:
    """gcd of n(x) over all x with basis coordinates in [-box, box]."""
    bs = L.basis_elements()
    zero = L.algebra.zero
    vals = []
    for t in itertools.product(range(-box, box + 1), repeat=4):
        if any(t):
            vals.append(sum((ti * b for ti, b in zip(t, bs)), zero).norm())
    return frac_gcd(vals)
