"""Small exact-arithmetic helpers shared across modules."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm


def to_frac(x) -> Fraction:
    """Accept int, Fraction or a "p/q" string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def fmt_frac(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def frac_gcd(values) -> Fraction:
    """gcd of rationals: the largest g with every value in gZ."""
    vals = [Fraction(v) for v in values if v != 0]
    if not vals:
        return Fraction(0)
    den = reduce(lcm, (v.denominator for v in vals), 1)
    num = reduce(gcd, (abs(v.numerator) * (den // v.denominator) for v in vals), 0)
    return Fraction(num, den)


def prime_factors(n: int) -> list[int]:
    """Distinct primes dividing n, ascending. Trial division (inputs are small)."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    prod = 1
    for p in prime_factors(n):
        prod *= p
    return prod == n


def mat_inv(m):
    """Exact inverse of a square Fraction matrix (lists of lists). None if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_det(m) -> Fraction:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        pv = a[col][col]
        det *= pv
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / pv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def mat_mul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]
