import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hamforms import oracles, reduction
from hamforms.errors import NotDefinite, NotIndefinite, ReductionOverflow, UnsupportedAlgebra
from hamforms.forms import FormClass, HermForm, act, classify, discriminant, is_integral, phi_map
from hamforms.mat2_geometry import HPoint, Mat2, is_sl2o, poincare_ext, sample_sl2o
from hamforms.quat_algebra import make_algebra

from conftest import rand_order

A = make_algebra(2)
H = Fraction(1, 2)
OMEGA = A.element(H, H, H, H)


def test_domain_data():
    assert len(reduction.DOMAIN.vertices) == 16
    assert all((OMEGA - A.element(*s)).norm() == 1 for s in reduction.DOMAIN.vertices)


def test_in_domain_examples():
    assert reduction.in_domain(HPoint(A.zero, 1))
    assert reduction.in_domain(HPoint(OMEGA, Fraction(1, 100)))
    assert not reduction.in_domain(HPoint(A.zero, Fraction(1, 4)))
    assert not reduction.in_domain(HPoint(A.element(2, 0, 0, 0), 5))
    with pytest.raises(UnsupportedAlgebra):
        reduction.in_domain(HPoint(make_algebra(3).zero, 1))


def test_reduce_point_examples():
    x = HPoint(A.element(H, 0, H, 0), 1)
    y, tr = reduction.reduce_point(x)
    assert y == x and tr.steps == 0 and tr.word == []
    y, tr = reduction.reduce_point(HPoint(A.zero, Fraction(1, 4)))
    assert tr.steps >= 1 and y.rsq >= 4 and reduction.in_domain(y)
    assert poincare_ext(tr.word[0], HPoint(A.zero, Fraction(1, 4))).rsq == 4


def test_step_cap():
    with pytest.raises(ReductionOverflow):
        reduction.reduce_point(HPoint(A.element(Fraction(1, 3), 0, 0, 0), Fraction(1, 10 ** 6)), step_cap=1)


@given(st.lists(st.fractions(-30, 30, max_denominator=50), min_size=4, max_size=4),
       st.fractions(Fraction(1, 10 ** 4), 3, max_denominator=10 ** 4))
def test_reduce_point_properties(z, rsq):
    x = HPoint(A.element(*z), rsq)
    y, tr = reduction.reduce_point(x)
    assert reduction.in_domain(y)
    assert tr.replay(x) == y == poincare_ext(tr.gamma, x)
    assert is_sl2o(tr.gamma)
    heights, p = [], x
    for g in tr.word:
        q = poincare_ext(g, p)
        if g.c:  # inversion: height strictly increases
            assert q.rsq > p.rsq
        heights.append(q.rsq)
        p = q


@given(st.lists(st.fractions(-5, 5, max_denominator=60), min_size=4, max_size=4),
       st.fractions(Fraction(1, 10 ** 4), 2, max_denominator=10 ** 4))
def test_cusp_pinching_constant(z, rsq):
    """Every point of F satisfies |z - omega| <= 2 r^2 (points of F produced by reduction)."""
    y, _ = reduction.reduce_point(HPoint(A.element(*z), rsq))
    assert (y.z - OMEGA).norm() <= 4 * y.rsq * y.rsq


def test_cusp_pinching_near_omega():
    for k in range(1, 40):
        t = Fraction(1, 2 ** k)
        # points approaching the cusp omega along the diagonal, at the lowest height allowed by F
        z = A.element(H - t, H - t, H - t, H - t)
        rsq = max(1 - (z - A.element(*s)).norm() for s in reduction.DOMAIN.vertices)
        x = HPoint(z, rsq)
        assert reduction.in_domain(x)
        assert (z - OMEGA).norm() <= 4 * rsq * rsq


def test_is_reduced_definite_examples():
    assert reduction.is_reduced_definite(HermForm(1, A.zero, 1))
    assert reduction.is_reduced_definite(HermForm(-1, A.zero, -1))
    f = HermForm(1, -A.J, 2)
    assert discriminant(f) == -1
    assert reduction.is_reduced_definite(f) == reduction.in_domain(phi_map(f))
    assert reduction.is_reduced_definite(f)
    assert not reduction.is_reduced_definite(HermForm(1, A.J, 2))
    with pytest.raises(NotDefinite):
        reduction.is_reduced_definite(HermForm(0, A.one, 0))


def test_is_reduced_indefinite_examples():
    f = HermForm(0, A.one, 0)
    assert reduction.is_reduced_indefinite(f)
    g = HermForm(1, A.zero, -1)
    assert reduction.is_reduced_indefinite(g) == oracles.reduced_indefinite_bruteforce(g)
    far = act(g, Mat2(A.one, A.scalar(10), A.zero, A.one))
    assert not reduction.is_reduced_indefinite(far)
    assert not reduction.is_reduced_indefinite(act(f, Mat2(A.one, A.scalar(10), A.zero, A.one)))
    with pytest.raises(NotIndefinite):
        reduction.is_reduced_indefinite(HermForm(1, A.zero, 1))


def test_indefinite_test_matches_bruteforce():
    rng = random.Random(8)
    forms = []
    while len(forms) < 8:
        f = HermForm(rng.randint(-4, 4), rand_order(rng, A, 3), rng.randint(-4, 4))
        if discriminant(f) > 0 and f.a != 0:
            forms.append(f)
    forms += [f for f in reduction.enumerate_reduced(2)[:: 127] if f.a != 0]
    for f in forms:
        assert reduction.is_reduced_indefinite(f) == oracles.reduced_indefinite_bruteforce(f)


def test_reduce_form_examples():
    f = HermForm(1, A.zero, 1)
    out, g = reduction.reduce_form(f)
    assert out == f and g == Mat2.identity(A)
    f = HermForm(5, -5 * OMEGA, 6)
    assert discriminant(f) == -5
    out, g = reduction.reduce_form(f)
    assert out == act(f, g) and is_sl2o(g) and reduction.is_reduced(out)
    assert out in reduction.enumerate_reduced(-5)


def test_reduce_form_round_trip():
    rng = random.Random(1)
    for delta in (-3, -7, 2, 5):
        reduced = reduction.enumerate_reduced(delta)
        for _ in range(6):
            f = rng.choice(reduced)
            g = sample_sl2o(A, rng.randrange(2 ** 30), rng.randint(1, 12))
            h = act(f, g)
            out, k = reduction.reduce_form(h)
            assert discriminant(out) == delta and is_integral(out)
            assert act(h, k) == out and is_sl2o(k)
            assert reduction.is_reduced(out)
            if delta < 0:
                assert (out if out.a > 0 else -out) in reduced


def test_reduce_form_negative_definite_and_a_zero():
    rng = random.Random(3)
    f = act(HermForm(-2, A.element(-1, 0, -1, 0), -3), sample_sl2o(A, 77, 10))
    out, g = reduction.reduce_form(f)
    assert classify(out) is FormClass.NEGATIVE_DEFINITE and reduction.is_reduced(out)
    for _ in range(5):
        f = act(HermForm(0, A.element(1, 1, 0, 0), 0), sample_sl2o(A, rng.randrange(999), 9))
        out, g = reduction.reduce_form(f)
        assert act(f, g) == out and reduction.is_reduced_indefinite(out)
    with pytest.raises(NotDefinite):
        reduction.reduce_form(HermForm(2, A.I + A.J, 1))


def test_enumeration_examples():
    neg1 = reduction.enumerate_reduced(-1)
    assert HermForm(1, A.zero, 1) in neg1
    pos1 = reduction.enumerate_reduced(1)
    assert HermForm(0, A.one, 0) in pos1
    assert all(reduction.is_reduced(f) and is_integral(f) for f in neg1 + pos1)
    assert neg1 == sorted(neg1, key=HermForm.key)
    assert neg1 == reduction.enumerate_reduced(-1, 2)
    assert pos1 == reduction.enumerate_reduced(1, 2)
    with pytest.raises(ValueError):
        reduction.enumerate_reduced(0)


@pytest.mark.parametrize("delta", [-6, -2, 3])
def test_enumeration_respects_certified_bound(delta):
    forms = reduction.enumerate_reduced(delta)
    assert all(abs(f.a) <= reduction.certified_bound(delta) for f in forms)
    assert reduction.certified_bound(delta) <= reduction.enumeration_bound(delta)
    assert all(discriminant(f) == delta for f in forms)


def test_enumeration_parallel_matches_serial():
    assert reduction.enumerate_reduced(3, jobs=2) == reduction.enumerate_reduced(3)


def test_enumeration_bound_formula():
    # max(ceil(sqrt(|D|)/eps0), ceil(2 kappa0 |D|), 4|D|) with eps0 = 1/4, kappa0 = 8
    assert reduction.enumeration_bound(-1) == 16
    assert reduction.enumeration_bound(10) == 160
    assert reduction.enumeration_bound(10, Fraction(3, 2)) == 240
