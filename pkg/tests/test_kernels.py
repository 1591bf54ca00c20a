import math
import os
import subprocess
import sys

import numpy as np
import pytest

from hamforms import _kernels
from hamforms import zlattice as zl
from hamforms.oracles import _integer_gram
from hamforms.quat_algebra import SUPPORTED, make_algebra

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


def _sigma_odd(m):
    return sum(d for d in range(1, m + 1) if m % d == 0 and d % 2)


def test_hurwitz_shells_are_24_sigma_odd():
    H = _integer_gram(zl.order_lattice(make_algebra(2)))
    counts = _kernels.shell_counts(H, 300)
    assert counts[0] == 1
    assert all(counts[m] == 24 * _sigma_odd(m) for m in range(1, 301))


def test_lipschitz_shells_jacobi():
    # r_4(m) = 8 * sum of divisors of m not divisible by 4
    H = 2 * np.eye(4, dtype=np.int64)
    counts = _kernels.shell_counts(H, 100, use_numba=False)
    for m in range(1, 101):
        assert counts[m] == 8 * sum(d for d in range(1, m + 1) if m % d == 0 and d % 4)


@needs_numba
@pytest.mark.parametrize("d", SUPPORTED)
def test_shell_parity(d):
    H = _integer_gram(zl.order_lattice(make_algebra(d)))
    a = _kernels.shell_counts(H, 400, use_numba=True)
    b = _kernels.shell_counts(H, 400, use_numba=False)
    assert np.array_equal(a, b)


@needs_numba
def test_eisenstein_parity():
    rng = np.random.default_rng(0)
    cs = rng.integers(-3, 4, size=(40, 4)).astype(float)
    ds = rng.integers(-3, 4, size=(40, 4)).astype(float)
    z = np.array([0.25, -0.5, 0.1, 0.0])
    a = _kernels.eisenstein_pairs(cs, ds, z, 0.7, -1.0, -3.0, 5.0, use_numba=True)
    b = _kernels.eisenstein_pairs(cs, ds, z, 0.7, -1.0, -3.0, 5.0, use_numba=False)
    assert a == pytest.approx(b, rel=1e-12)


@needs_numba
@pytest.mark.parametrize("a, delta", [(1, 1), (3, 2), (7, 5), (12, 3), (25, 10)])
def test_candidate_parity(a, delta):
    s = math.sqrt(delta)
    span = math.ceil(2 * s) + 1
    lo, hi = [-2 * a - span] * 4, [span] * 4
    r2 = math.ceil(4 * (s + 2 * delta / a) ** 2) + 2
    x = _kernels.indefinite_candidates(a, delta, lo, hi, r2, use_numba=True)
    y = _kernels.indefinite_candidates(a, delta, lo, hi, r2, use_numba=False)
    assert np.array_equal(x, y)
    for B in x:
        assert len({int(v) % 2 for v in B}) == 1
        assert (int(np.sum(B * B)) - 4 * delta) % (4 * a) == 0


def test_env_flag_selects_numpy_backend():
    code = "from hamforms import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, HAMFORMS_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
