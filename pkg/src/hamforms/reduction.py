"""Reduction theory over the Hurwitz order (d_a = 2).

The weak fundamental domain is
    F = {(z, r) : z in [0,1]^4, n(z - s) + r^2 >= 1 for every vertex s of the cube},
moves come from SL_2 of the Lipschitz order, and forms are reduced when their
point (definite) or their locus (indefinite) meets F.
"""
from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import NotDefinite, NotIndefinite, ReductionOverflow, UnsupportedAlgebra
from .forms import FormClass, HermForm, act, classify, discriminant, phi_map
from .mat2_geometry import HPoint, Mat2, poincare_ext
from .quat_algebra import AlgebraDescriptor, Quaternion, make_algebra

log = logging.getLogger(__name__)

DEFAULT_STEP_CAP = 10 ** 6
EPS0 = Fraction(1, 4)
KAPPA0 = 8
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class WeakDomain:
    cube: tuple = ((0, 1),) * 4
    vertices: tuple = tuple(itertools.product((0, 1), repeat=4))
    cusps: tuple = ("oo", (HALF, HALF, HALF, HALF))
    # every point of F satisfies |z - omega| <= kappa r^2 (see is_in_cusp_region)
    kappa: int = 2


DOMAIN = WeakDomain()


@dataclass
class ReductionTrace:
    word: list = field(default_factory=list)
    steps: int = 0
    final: object = None
    gamma: Mat2 | None = None

    def replay(self, x: HPoint) -> HPoint:
        for g in self.word:
            x = poincare_ext(g, x)
        return x


def _hamilton(algebra: AlgebraDescriptor):
    if algebra.d_a != 2:
        raise UnsupportedAlgebra("the explicit weak domain exists only for d_a = 2")


def in_domain(x: HPoint) -> bool:
    _hamilton(x.z.algebra)
    z = x.z.coords
    if any(c < 0 or c > 1 for c in z):
        return False
    A = x.z.algebra
    return all((x.z - A.element(*s)).norm() + x.rsq >= 1 for s in DOMAIN.vertices)


def _in_cube(z) -> bool:
    return all(0 <= c <= 1 for c in z)


def _deepest_vertex(z, rsq):
    """Vertex s minimising n(z - s) + r^2 among violated ones, ties lexicographic; None if none."""
    best = None
    for s in DOMAIN.vertices:
        v = rsq
        for zc, sc in zip(z, s):
            v += (zc - sc) ** 2
        if v < 1 and (best is None or v < best[0]):
            best = (v, s)
    return best


def reduce_point(x: HPoint, step_cap: int = DEFAULT_STEP_CAP) -> tuple[HPoint, ReductionTrace]:
    A = x.z.algebra
    _hamilton(A)
    one, zero = A.one, A.zero
    z, rsq = list(x.z.coords), x.rsq
    trace = ReductionTrace()
    gamma = Mat2.identity(A)
    while True:
        if not _in_cube(z):
            t = [math.floor(c) for c in z]
            move = Mat2(one, A.element(*[-v for v in t]), zero, one)
            z = [c - v for c, v in zip(z, t)]
            trace.word.append(move)
            gamma = move * gamma
        hit = _deepest_vertex(z, rsq)
        if hit is None:
            break
        den, s = hit
        if trace.steps >= step_cap:
            raise ReductionOverflow(f"no reduction after {step_cap} inversions")
        move = Mat2(zero, -one, one, A.element(*[-v for v in s]))
        # z -> -conj(z - s)/den, r^2 -> r^2/den^2 with den = n(z-s) + r^2 < 1
        w = [c - v for c, v in zip(z, s)]
        z = [-w[0] / den, w[1] / den, w[2] / den, w[3] / den]
        new_rsq = rsq / (den * den)
        assert new_rsq > rsq
        rsq = new_rsq
        trace.word.append(move)
        trace.steps += 1
        gamma = move * gamma
    out = HPoint(A.element(*z), rsq)
    trace.final = out
    trace.gamma = gamma
    return out, trace


# ---------------------------------------------------------------------------
# reduced forms

def _definite_normalised(f: HermForm) -> HermForm:
    cls = classify(f)
    if cls is FormClass.POSITIVE_DEFINITE:
        return f
    if cls is FormClass.NEGATIVE_DEFINITE:
        return -f
    raise NotDefinite(f"form is {cls.value}")


def is_reduced_definite(f: HermForm) -> bool:
    """The 25 inequalities: a > 0, 0 <= -b_l <= a, a - c - 2 sum_{m in P} b_m <= a |P|."""
    _hamilton(f.algebra)
    f = _definite_normalised(f)
    a, b, c = f.a, f.b.coords, f.c
    ok = a > 0 and all(0 <= -bl <= a for bl in b)
    if ok:
        for s in DOMAIN.vertices:
            if a - c - 2 * sum(bl for bl, sl in zip(b, s) if sl) > a * sum(s):
                ok = False
                break
    if __debug__:
        assert ok == in_domain(phi_map(f))
    return ok


try:  # gmpy2 rationals are exact and several times faster than Fraction in the solver
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

_QHALF = _Q(1, 2)
_QZERO = _Q(0)
_QONE = _Q(1)


def _phi(x, w):
    return min(2 * x * w - w * w, 1 - 2 * x + 2 * x * w - w * w)


def _x_of_lambda(w, lam):
    left = w * (1 + lam)
    if left < _QHALF:
        return max(left, _QZERO)
    right = w + lam * (w - 1)
    if right > _QHALF:
        return min(right, _QONE)
    return _QHALF


def _breakpoint(w):
    # the single lambda > 0 where x(lambda) changes regime, if any
    if 0 < w < _QHALF:
        return 1 / (2 * w) - 1
    if _QHALF < w < 1:
        return (w - _QHALF) / (1 - w)
    return None


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def locus_min_sq_distance(w, T):
    """min |X - w|^2 over X in [0,1]^4 with sum_l phi(X_l, w_l) >= T; None when infeasible.

    The objective is convex, the constraint concave and separable, so KKT gives
    X(lambda) coordinatewise; g(lambda) = sum phi(X(lambda)) is continuous,
    nondecreasing and piecewise linear, so the multiplier is found exactly.
    """
    w = [_Q(x.numerator, x.denominator) for x in w]
    T = _Q(T.numerator, T.denominator)

    def g(lam):
        return sum(_phi(_x_of_lambda(wl, lam), wl) for wl in w)

    def dist(lam):
        return sum((_x_of_lambda(wl, lam) - wl) ** 2 for wl in w)

    if g(_QZERO) >= T:
        return _frac(dist(_QZERO))
    bps = sorted({bp for bp in (_breakpoint(wl) for wl in w) if bp is not None and bp > 0})
    prev, gprev = _QZERO, g(_QZERO)
    for bp in bps:
        gb = g(bp)
        if gb >= T:
            lam = prev + (T - gprev) * (bp - prev) / (gb - gprev)
            return _frac(dist(lam))
        prev, gprev = bp, gb
    return None  # g is constant beyond the last breakpoint


def is_reduced_indefinite(f: HermForm) -> bool:
    """Does C(f) meet F?"""
    _hamilton(f.algebra)
    delta = discriminant(f)
    if delta <= 0:
        raise NotIndefinite("reducedness of indefinite forms needs Delta > 0")
    if f.a == 0:
        # vertical hyperplane over {2<z, b> + c = 0}; reduced iff it meets the cube
        b = f.b.coords
        lo = 2 * sum(min(x, 0) for x in b)
        hi = 2 * sum(max(x, 0) for x in b)
        return lo <= -f.c <= hi
    if f.a < 0:
        f = -f
    a = f.a
    w = [-x / a for x in f.b.coords]
    rho_sq = delta / (a * a)
    m = locus_min_sq_distance(w, 1 - rho_sq)
    # r^2 = rho^2 - |X - w|^2 must be positive
    return m is not None and m < rho_sq


def is_reduced(f: HermForm) -> bool:
    if discriminant(f) > 0:
        return is_reduced_indefinite(f)
    return is_reduced_definite(f)


def locus_point(f: HermForm) -> HPoint:
    """A rational point of C(f): the apex of the hemisphere, or a point above the hyperplane."""
    delta = discriminant(f)
    if delta <= 0:
        raise NotIndefinite("C(f) needs Delta > 0")
    if f.a != 0:
        return HPoint(-(f.b / f.a), delta / (f.a * f.a))
    return HPoint(f.b * (-f.c / (2 * f.b.norm())), 1)


def reduce_form(f: HermForm, step_cap: int = DEFAULT_STEP_CAP) -> tuple[HermForm, Mat2]:
    """Returns (f o g, g) with g in SL_2(O) and f o g reduced."""
    A = f.algebra
    _hamilton(A)
    cls = classify(f)
    if cls is FormClass.DEGENERATE:
        raise NotDefinite("degenerate forms have no reduction")
    if is_reduced(f):
        return f, Mat2.identity(A)
    if cls is FormClass.INDEFINITE:
        x = locus_point(f)
    else:
        x = phi_map(_definite_normalised(f))
    _, tr = reduce_point(x, step_cap)
    g = tr.gamma.inverse()
    out = act(f, g)
    assert is_reduced(out), "transported form must be reduced"
    return out, g


# ---------------------------------------------------------------------------
# enumeration

def enumeration_bound(delta: int, bound_scale=1, eps0=EPS0, kappa0=KAPPA0) -> int:
    d = abs(int(delta))
    base = max(math.ceil(math.sqrt(d) / eps0), math.ceil(2 * kappa0 * d), 4 * d)
    return math.ceil(Fraction(bound_scale) * base)


def certified_bound(delta: int) -> int:
    """a <= 4|Delta| for every reduced form; follows from kappa = 2 for F."""
    return 4 * abs(int(delta))


def _definite_for_a(a: int, delta: int, A) -> list[HermForm]:
    nd = -delta
    need = 4 * a * a - 4 * nd  # sum of (doubled distance to the nearest face)^2 must reach this
    out = []
    for par in (0, 1):
        vals = [X for X in range(par, 2 * a + 1, 2)
                if min(X, 2 * a - X) ** 2 >= a * a - 4 * nd]
        if not vals:
            continue
        dsq = {X: min(X, 2 * a - X) ** 2 for X in vals}
        for Xs in itertools.product(vals, repeat=4):
            if sum(dsq[X] for X in Xs) < need:
                continue
            nb4 = sum(X * X for X in Xs)
            if (nb4 - 4 * delta) % (4 * a):
                continue
            b = A.element(*[Fraction(-X, 2) for X in Xs])
            f = HermForm(a, b, (nb4 - 4 * delta) // (4 * a))
            if is_reduced_definite(f):
                out.append(f)
    return out


def _indefinite_for_a(a: int, delta: int, A) -> list[HermForm]:
    s = math.sqrt(delta)
    span = math.ceil(2 * s) + 1
    lo = [-2 * a - span] * 4
    hi = [span] * 4
    r2 = math.ceil(4 * (s + 2 * delta / a) ** 2 * (1 + 1e-12)) + 1
    cands = _kernels.indefinite_candidates(a, delta, lo, hi, r2)
    out = []
    for B in cands:
        Bl = [int(v) for v in B]
        b = A.element(*[Fraction(v, 2) for v in Bl])
        c = (sum(v * v for v in Bl) - 4 * delta) // (4 * a)
        f = HermForm(a, b, c)
        if is_reduced_indefinite(f):
            out.append(f)
    return out


def _zero_stratum(delta: int, A) -> list[HermForm]:
    s = math.isqrt(4 * delta) + 1
    out = []
    rng = range(-s, s + 1)
    for Bs in itertools.product(rng, repeat=4):
        if sum(v * v for v in Bs) != 4 * delta or len({v % 2 for v in Bs}) != 1:
            continue
        b = A.element(*[Fraction(v, 2) for v in Bs])
        cmax = sum(abs(v) for v in Bs)
        for c in range(-cmax, cmax + 1):
            f = HermForm(0, b, c)
            if is_reduced_indefinite(f):
                out.append(f)
    return out


def _work(args):
    delta, a_values = args
    A = make_algebra(2)
    out = []
    for a in a_values:
        out.extend(_definite_for_a(a, delta, A) if delta < 0 else _indefinite_for_a(a, delta, A))
    return [f.to_json() for f in out]


def enumerate_reduced(delta: int, bound_scale=1, jobs: int = 1) -> list[HermForm]:
    """All reduced integral forms over the Hurwitz order with discriminant delta.

    Definite: positive definite representatives (negative ones are their negatives).
    Indefinite: every sign of a, including the a = 0 stratum.
    """
    delta = int(delta)
    if delta == 0:
        raise ValueError("delta must be nonzero")
    A = make_algebra(2)
    a_max = enumeration_bound(delta, bound_scale)
    a_vals = list(range(1, a_max + 1))
    log.info("enumerate_reduced delta=%d a_max=%d jobs=%d backend=%s", delta, a_max, jobs, _kernels.BACKEND)
    if jobs > 1:
        chunks = [(delta, a_vals[i::jobs]) for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as ex:
            raw = [d for part in ex.map(_work, chunks) for d in part]
        forms = [HermForm.from_json(d) for d in raw]
    else:
        forms = [HermForm.from_json(d) for d in _work((delta, a_vals))]
    if delta > 0:
        forms = forms + [-f for f in forms] + _zero_stratum(delta, A)
    return sorted(set(forms), key=HermForm.key)
