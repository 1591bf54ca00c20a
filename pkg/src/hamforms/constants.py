"""Exact covolumes and counting constants as rational combinations of pi^j zeta(3)^k.

Two independent routes to the covolume of PSL_2(O): the Eisenstein-series
residue route and Prasad's volume formula assembled from local factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import mpmath
import numpy as np

from . import _kernels
from ._util import fmt_frac, is_squarefree, prime_factors, to_frac
from .errors import BadDiscriminant, UnsupportedExactPoint


class SymConst:
    """Finite sum of q * pi^j * zeta(3)^k with rational q; integer j, k (negative allowed)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for (j, k), q in (terms or {}).items():
            q = to_frac(q)
            if q:
                clean[(int(j), int(k))] = clean.get((int(j), int(k)), Fraction(0)) + q
        object.__setattr__(self, "terms", {jk: q for jk, q in clean.items() if q})

    def __setattr__(self, k, v):
        raise AttributeError("SymConst is immutable")

    @classmethod
    def rational(cls, q) -> "SymConst":
        return cls({(0, 0): q})

    @classmethod
    def monomial(cls, q, j=0, k=0) -> "SymConst":
        return cls({(j, k): q})

    @staticmethod
    def _lift(x) -> "SymConst":
        if isinstance(x, SymConst):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return SymConst.rational(x)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        t = dict(self.terms)
        for jk, q in o.terms.items():
            t[jk] = t.get(jk, Fraction(0)) + q
        return SymConst(t)

    __radd__ = __add__

    def __neg__(self):
        return SymConst({jk: -q for jk, q in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        t = {}
        for (j1, k1), q1 in self.terms.items():
            for (j2, k2), q2 in o.terms.items():
                key = (j1 + j2, k1 + k2)
                t[key] = t.get(key, Fraction(0)) + q1 * q2
        return SymConst(t)

    __rmul__ = __mul__

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not o.is_monomial():
            raise ZeroDivisionError("division is only defined by nonzero monomials")
        (j, k), q = next(iter(o.terms.items()))
        return self * SymConst({(-j, -k): 1 / q})

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return SymConst.rational(1) / (self ** -n)
        return reduce(lambda x, y: x * y, [self] * n, SymConst.rational(1))

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def evaluate(self, dps: int = 50) -> mpmath.mpf:
        with mpmath.workdps(dps + 10):
            pi, z3 = mpmath.pi, mpmath.zeta(3)
            val = mpmath.mpf(0)
            for (j, k), q in self.terms.items():
                val += mpmath.mpf(q.numerator) / q.denominator * pi ** j * z3 ** k
            return +val

    def __float__(self):
        return float(self.evaluate(30))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (j, k), q in sorted(self.terms.items()):
            s = fmt_frac(q)
            if j:
                s += "·π" + ("" if j == 1 else f"^{j}")
            if k:
                s += "·ζ3" + ("" if k == 1 else f"^{k}")
            parts.append(s)
        return " + ".join(parts)

    def __repr__(self):
        return f"SymConst({self})"

    def to_json(self, digits: int = 30) -> dict:
        return {
            "symbolic": str(self),
            "terms": [{"coeff": fmt_frac(q), "pi": j, "zeta3": k} for (j, k), q in sorted(self.terms.items())],
            "float": mpmath.nstr(self.evaluate(digits + 10), digits),
        }


PI = SymConst.monomial(1, 1, 0)
ZETA3 = SymConst.monomial(1, 0, 1)
ONE = SymConst.rational(1)


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from the standard recurrence."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return B[n]


def zeta_int(n: int) -> SymConst:
    """zeta(n) for even n >= 2 (a rational multiple of pi^n) or n = 3."""
    if n == 3:
        return ZETA3
    if n >= 2 and n % 2 == 0:
        q = (-1) ** (n // 2 + 1) * bernoulli(n) * 2 ** (n - 1) / math.factorial(n)
        return SymConst.monomial(q, n, 0)
    raise UnsupportedExactPoint(f"zeta({n}) is not a pi^j zeta(3)^k monomial")


def sphere_volume(n: int) -> SymConst:
    """Volume of the unit n-sphere S^n in R^(n+1)."""
    if n < 0:
        raise ValueError("n >= 0")
    if n % 2 == 1:
        m = (n + 1) // 2
        return SymConst.monomial(Fraction(2, math.factorial(m - 1)), m, 0)
    k = n // 2
    dfact = math.prod(range(2 * k - 1, 0, -2)) if k else 1
    return SymConst.monomial(Fraction(2 ** (k + 1), dfact), k, 0)


def check_discriminant(d: int) -> list[int]:
    if isinstance(d, bool) or not isinstance(d, int) or d < 2 or not is_squarefree(d):
        raise BadDiscriminant(f"{d!r} is not a squarefree integer > 1")
    ps = prime_factors(d)
    if len(ps) % 2 == 0:
        raise BadDiscriminant(f"{d} has an even number of prime factors")
    return ps


def _rat(ps, f) -> Fraction:
    return math.prod((Fraction(f(p)) for p in ps), start=Fraction(1))


# ---------------------------------------------------------------------------
# zeta function of the algebra

def zeta_a(d_a: int, s) -> SymConst:
    """zeta(2s) zeta(2s-1) prod_{p | D}(1 - p^(1-2s)), exact when both zetas are monomials."""
    ps = check_discriminant(d_a)
    s = to_frac(s)
    e1, e2 = 2 * s, 2 * s - 1
    if e1.denominator != 1 or e2.denominator != 1:
        raise UnsupportedExactPoint(f"s={s}")
    z = zeta_int(int(e1)) * zeta_int(int(e2))
    return z * _rat(ps, lambda p: 1 - Fraction(1, p) ** int(e2))


def zeta_a_float(d_a: int, s: float) -> float:
    ps = check_discriminant(d_a)
    val = mpmath.zeta(2 * s) * mpmath.zeta(2 * s - 1)
    for p in ps:
        val *= 1 - mpmath.mpf(p) ** (1 - 2 * s)
    return float(val)


# ---------------------------------------------------------------------------
# covolumes

def eisenstein_residue(d_a: int) -> SymConst:
    """Residue at s = 4 of the normalised series E-hat((0,1), s): 8 pi^4 / (3 D^2)."""
    check_discriminant(d_a)
    return SymConst.monomial(Fraction(8, 3 * d_a * d_a), 4, 0)


def covolume_eisenstein(d_a: int) -> SymConst:
    """Vol = (D/2) * (zeta_A(2) prod(p-1)/24) / residue."""
    ps = check_discriminant(d_a)
    cusp_sum = zeta_a(d_a, 2) * (_rat(ps, lambda p: p - 1) / 24)
    return cusp_sum * Fraction(d_a, 2) / eisenstein_residue(d_a)


@dataclass(frozen=True)
class LocalFactor:
    p: int
    split: bool
    dim_m: int
    order_m: int


def local_factor(p: int, split: bool) -> LocalFactor:
    """Reductive quotient at p: split case SL_4(F_p), dim 15; ramified case, dim 7."""
    if split:
        return LocalFactor(p, True, 15, p ** 6 * (p ** 2 - 1) * (p ** 3 - 1) * (p ** 4 - 1))
    return LocalFactor(p, False, 7, p ** 2 * (p ** 4 - 1) * (p + 1))


EXPONENTS = (1, 2, 3)  # exponents of the split form SL_4 (rank 3)


def exponents() -> tuple[int, ...]:
    return EXPONENTS


def split_euler_factor_matches(p: int) -> bool:
    """p^dim / |M(F_p)| = prod_i 1/(1 - p^-(m_i+1)) for the split factor."""
    lf = local_factor(p, True)
    lhs = Fraction(lf.order_m, p ** lf.dim_m)
    rhs = math.prod((1 - Fraction(1, p ** (m + 1)) for m in EXPONENTS), start=Fraction(1))
    return lhs == rhs


def prasad_mu(d_a: int) -> SymConst:
    ps = check_discriminant(d_a)
    mu = ONE
    for m in EXPONENTS:
        mu = mu * Fraction(math.factorial(m)) / (SymConst.monomial(2 ** (m + 1), m + 1, 0))
    for m in EXPONENTS:
        mu = mu * zeta_int(m + 1)
    for p in ps:
        sp, ram = local_factor(p, True), local_factor(p, False)
        # p^((dim_ram - dim_split)/2) is an integer power since both dims are odd
        shift = (ram.dim_m - sp.dim_m) // 2
        mu = mu * (Fraction(sp.order_m, ram.order_m) * Fraction(p) ** shift)
    return mu


def covolume_prasad(d_a: int) -> SymConst:
    """Riemannian covolume 2 Vol(S^5) mu (curvature -1 normalisation)."""
    return 2 * sphere_volume(5) * prasad_mu(d_a)


def sp1_covolume(d_a: int) -> SymConst:
    """Covolume of the norm-one group of the order in hyperbolic 4-space: pi^2/1080 prod (p^2+1)(p-1)."""
    ps = check_discriminant(d_a)
    return SymConst.monomial(Fraction(1, 1080), 2, 0) * _rat(ps, lambda p: (p * p + 1) * (p - 1))


def deuring_mass(d_a: int) -> Fraction:
    """sum over left ideal classes of 1/|O_r^x| = prod(p-1)/24."""
    ps = check_discriminant(d_a)
    return _rat(ps, lambda p: p - 1) / 24


# ---------------------------------------------------------------------------
# counting constants

def counting_constant_main(d_a: int, delta: int, covol_su) -> SymConst:
    """45 D Covol / (2 pi^2 zeta(3) Delta^2 prod(p^3-1))."""
    ps = check_discriminant(d_a)
    if delta <= 0:
        raise ValueError("delta must be positive")
    covol_su = SymConst._lift(covol_su)
    den = SymConst.monomial(2 * delta * delta * _rat(ps, lambda p: p ** 3 - 1), 2, 1)
    return 45 * d_a * covol_su / den


def counting_constant_general(d_a: int, delta: int, covol, iota_g: int, idx_stab: int,
                              idx_total: int, unit_count_left_order: int) -> SymConst:
    """540 iota [stab index] Covol / (pi^2 zeta(3) |O_l^x| Delta^2 [total index] prod(p^3-1)(1-1/p))."""
    ps = check_discriminant(d_a)
    if iota_g not in (1, 2):
        raise ValueError("iota_g is 1 or 2")
    if delta <= 0 or idx_stab < 1 or idx_total < 1 or unit_count_left_order < 1:
        raise ValueError("delta, indices and unit count must be positive")
    covol = SymConst._lift(covol)
    den = SymConst.monomial(
        unit_count_left_order * delta * delta * idx_total
        * _rat(ps, lambda p: (p ** 3 - 1) * (1 - Fraction(1, p))), 2, 1)
    return 540 * iota_g * idx_stab * covol / den


def counting_constant_cor12(d_a: int, delta: int, covol, unit_count_right_order: int) -> SymConst:
    """Constant for a single ideal class with the whole group: iota = 1, both indices 1."""
    return counting_constant_general(d_a, delta, covol, 1, 1, 1, unit_count_right_order)


def counting_constant_via_classes(d_a: int, delta: int, covol, class_unit_counts) -> SymConst:
    """Sum of the single-class constant over the ideal classes (unit counts of their right orders)."""
    total = SymConst()
    for u in class_unit_counts:
        total = total + counting_constant_cor12(d_a, delta, covol, u)
    return total


def counting_constant_geometric(d_a: int, delta: int, covol_su, unit_count: int, tau=1) -> SymConst:
    """Assembly from the equidistribution count of common perpendiculars.

    N(t) ~ Vol(S^0) Vol(cusp) Vol(C) / (Vol(S^4) Vol(M)) e^(4t), where the cusp
    neighbourhood at height tau has volume tau^4 (D/4) / (4 |O^x|), Vol(C) is the
    covolume of the stabiliser and t = ln(s / (tau sqrt(Delta))). tau cancels.
    """
    check_discriminant(d_a)
    tau = to_frac(tau)
    covol_su = SymConst._lift(covol_su)
    vol_cusp = Fraction(d_a, 4) * tau ** 4 / (4 * unit_count)
    n_t = sphere_volume(0) * vol_cusp * covol_su / (sphere_volume(4) * covolume_eisenstein(d_a))
    # e^(4t) = s^4 / (tau^4 Delta^2)
    return n_t / (tau ** 4 * delta * delta)


def cor12_closed_form(d_a: int) -> SymConst:
    """D / (48 zeta(3)) prod (p^2+1)/(p^2+p+1)."""
    ps = check_discriminant(d_a)
    return SymConst.monomial(Fraction(d_a, 48), 0, -1) * _rat(ps, lambda p: Fraction(p * p + 1, p * p + p + 1))


# ---------------------------------------------------------------------------
# Eisenstein series probe (float)

def _order_points(algebra, max_norm: int) -> np.ndarray:
    """Float structure coordinates of all order points with 0 < n(x) <= max_norm."""
    import itertools
    basis = np.array([[float(x) for x in b] for b in algebra.basis_coords])
    w = np.array([1.0, -float(algebra.alpha), -float(algebra.beta), float(algebra.alpha * algebra.beta)])
    G = (basis * w) @ basis.T
    ginv = np.linalg.inv(G)
    bounds = [int(math.isqrt(int(max_norm * ginv[i, i])) + 1) for i in range(4)]
    grids = np.array(list(itertools.product(*(range(-b, b + 1) for b in bounds))), dtype=np.float64)
    pts = grids @ basis
    nn = (pts * pts) @ w
    keep = (nn > 0.5) & (nn <= max_norm + 1e-9)
    return pts[keep]


def eisenstein_partial(d_a: int, x, s: float, radius: int) -> float:
    """Truncated E-hat(x, s): pairs (c, d) of order points, not both 0, with n(c), n(d) <= radius^2."""
    from .quat_algebra import make_algebra
    A = make_algebra(d_a)
    if s <= 4:
        raise ValueError("the series converges for s > 4")
    pts = _order_points(A, radius * radius)
    zero = np.zeros((1, 4))
    cs = np.vstack([zero, pts])
    ds = np.vstack([zero, pts])
    z = np.array([float(c) for c in x.z.coords])
    return _kernels.eisenstein_pairs(cs, ds, z, float(x.rsq), float(A.alpha), float(A.beta), s)


def eisenstein_probe_series(d_a: int, max_norm: int) -> np.ndarray:
    """r8[m] = #{(c, d) in O^2 : n(c) + n(d) = m}, so E-hat((0,1), s) = sum_m r8[m] m^-s."""
    from . import zlattice as zl
    from .oracles import shell_array
    from .quat_algebra import make_algebra
    r4 = shell_array(zl.order_lattice(make_algebra(d_a)), max_norm).astype(np.float64)
    return np.convolve(r4, r4)[: max_norm + 1]


def eisenstein_residue_fit(d_a: int, s_values=(4.05, 4.1, 4.2, 4.4), max_norm: int = 4000) -> dict:
    """Least-squares fit of c/(s-4) + e to the truncated series at x = (0, 1).

    'raw' fits the truncated sums directly; 'tail_corrected' fits
    c (1 - M^(4-s))/(s-4) + e, which models the missing tail m > M.
    """
    r8 = eisenstein_probe_series(d_a, max_norm)
    m = np.arange(1, max_norm + 1, dtype=np.float64)
    s_arr = np.array(s_values, dtype=np.float64)
    vals = np.array([np.sum(r8[1:] * m ** (-s)) for s in s_arr])
    last = np.array([r8[max_norm] * max_norm ** (-s) for s in s_arr]) / vals
    X_raw = np.stack([1 / (s_arr - 4), np.ones_like(s_arr)], axis=1)
    c_raw, e_raw = np.linalg.lstsq(X_raw, vals, rcond=None)[0]
    X_tc = np.stack([(1 - max_norm ** (4 - s_arr)) / (s_arr - 4), np.ones_like(s_arr)], axis=1)
    c_tc, e_tc = np.linalg.lstsq(X_tc, vals, rcond=None)[0]
    target = float(eisenstein_residue(d_a))
    return {"target": target, "raw": float(c_raw), "tail_corrected": float(c_tc),
            "raw_rel_err": abs(c_raw - target) / target, "tail_corrected_rel_err": abs(c_tc - target) / target,
            "last_shell_rel": float(last.max()), "values": vals.tolist(), "max_norm": max_norm}
