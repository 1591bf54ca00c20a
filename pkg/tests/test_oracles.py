import math
from fractions import Fraction

import pytest

from hamforms import constants as C
from hamforms import oracles
from hamforms import zlattice as zl
from hamforms.quat_algebra import SUPPORTED, make_algebra

H = Fraction(1, 2)


def test_shell_examples(hurwitz):
    o = zl.order_lattice(hurwitz)
    shells = oracles.enumerate_by_norm(o, 2)
    assert [(s.m, s.count) for s in shells] == [(1, 24), (2, 24)]
    lip = zl.standard_lattice(hurwitz)
    assert oracles.enumerate_by_norm(lip, 1)[0].count == 8
    with pytest.raises(ValueError):
        oracles.enumerate_by_norm(o, 0)


@pytest.mark.parametrize("d", SUPPORTED)
def test_shells_divisible_by_units(d):
    A = make_algebra(d)
    shells = oracles.enumerate_by_norm(zl.order_lattice(A), 100)
    assert shells[0].count == A.unit_count
    assert all(s.count % A.unit_count == 0 for s in shells)


def test_zeta_partial(hurwitz):
    o = zl.order_lattice(hurwitz)
    target = 24 * float(C.zeta_a(2, 2))
    p100 = oracles.zeta_partial(o, 2.0, 100)
    p200 = oracles.zeta_partial(o, 2.0, 200)
    assert p100 <= p200 <= target
    assert target - p200 <= oracles.zeta_tail_bound(o, 200)
    two = zl.scale_left(2, o)
    assert oracles.zeta_partial(two, 2.0, 800) == pytest.approx(p200, rel=1e-12)
    with pytest.raises(ValueError):
        oracles.zeta_partial(o, 1.0, 10)


def test_ideal_norm_oracles(hurwitz):
    L = zl.scale_right(zl.order_lattice(hurwitz), hurwitz.element(1, 1, 0, 0))
    assert oracles.ideal_norm_bruteforce(L, 20) == 2 == oracles.ideal_norm_by_pairs(L, 1)


def test_relatively_prime_examples(hurwitz):
    A = hurwitz
    assert oracles.relatively_prime(A.one, A.zero)
    assert oracles.relatively_prime(A.element(1, 1, 0, 0), A.one)
    assert not oracles.relatively_prime(A.scalar(2), A.element(0, 2, 0, 0))
    with pytest.raises(ValueError):
        oracles.relatively_prime(A.zero, A.zero)


def test_witness_examples(hurwitz):
    A = hurwitz
    up, vp = oracles.search_witness_ii(A.one, A.zero, 1)
    assert oracles._witness_expr(A.one, A.zero, up, vp) == 1
    w = oracles.search_witness_ii(A.element(1, 1, 0, 0), A.one, 2)
    assert w is not None
    assert oracles.search_witness_ii(A.scalar(2), A.element(0, 2, 0, 0), 1) is None


def test_witness_implies_relatively_prime():
    import random
    rng = random.Random(6)
    for d in (2, 3):
        A = make_algebra(d)
        for _ in range(4):
            u = A.from_order_coords([rng.randint(-2, 2) for _ in range(4)])
            v = A.from_order_coords([rng.randint(-2, 2) for _ in range(4)])
            if not (u or v):
                continue
            if oracles.search_witness_ii(u, v, 1) is not None:
                assert oracles.relatively_prime(u, v)


def test_tail_bound_decreases(hurwitz):
    o = zl.order_lattice(hurwitz)
    b = [oracles.zeta_tail_bound(o, m) for m in (50, 100, 200, 400)]
    assert all(x > y > 0 for x, y in zip(b, b[1:]))
    assert b[2] < 2e-3
