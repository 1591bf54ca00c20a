import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hamforms.quat_algebra import SUPPORTED, make_algebra

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ALGEBRAS = [make_algebra(d) for d in SUPPORTED]

small_frac = st.fractions(min_value=-20, max_value=20, max_denominator=20)
algebra_st = st.sampled_from(ALGEBRAS)


@st.composite
def quaternions(draw, algebra=None, nonzero=False):
    A = algebra or draw(algebra_st)
    x = A.element(*[draw(small_frac) for _ in range(4)])
    if nonzero and not x:
        x = A.one
    return x


@st.composite
def quaternion_pairs(draw):
    A = draw(algebra_st)
    return draw(quaternions(A)), draw(quaternions(A))


@st.composite
def order_elements(draw, algebra=None, box=6):
    A = algebra or draw(algebra_st)
    return A.from_order_coords([draw(st.integers(-box, box)) for _ in range(4)])


def rand_frac(rng, lim=20):
    return Fraction(rng.randint(-lim, lim), rng.randint(1, lim))


def rand_quat(rng, A, lim=20):
    return A.element(*[rand_frac(rng, lim) for _ in range(4)])


def rand_order(rng, A, box=5):
    return A.from_order_coords([rng.randint(-box, box) for _ in range(4)])


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture
def hurwitz():
    return make_algebra(2)


def locus_points(f, rng, n=10):
    """n rational points of C(f): z near the centre with r^2 = -f(z,1)/a, or any z on the hyperplane."""
    from hamforms.forms import discriminant, evaluate
    from hamforms.mat2_geometry import HPoint
    A = f.algebra
    pts = []
    if f.a != 0:
        center = -(f.b / f.a)
        rho = discriminant(f) / (f.a * f.a)
        while len(pts) < n:
            u = A.element(*[rng.randint(-5, 5) for _ in range(4)])
            m = rng.randint(1, 6)
            while u.norm() / (m * m) >= rho:
                m *= 2
            z = center + u / m
            rsq = -evaluate(f, z, A.one) / f.a
            pts.append(HPoint(z, rsq))
    else:
        nb = f.b.norm()
        while len(pts) < n:
            w = rand_quat(rng, A, 6)
            # shift w along b onto tr(conj(z) b) + c = 0
            z = w - f.b * (((w.conj() * f.b).trace() + f.c) / (2 * nb))
            pts.append(HPoint(z, Fraction(rng.randint(1, 9), rng.randint(1, 9))))
    return pts


def rand_form(rng, A, box=4, lim=6):
    from hamforms.forms import HermForm
    return HermForm(rng.randint(-lim, lim), rand_order(rng, A, box), rng.randint(-lim, lim))
