"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both paths are called in-process through the use_numba switch, so the
HAMFORMS_NUMBA variable does not matter here. The first numba call pays the
JIT (or cache load) cost and is excluded.
"""
import argparse
import math
import time

import numpy as np

from hamforms import _kernels
from hamforms import zlattice as zl
from hamforms.constants import _order_points
from hamforms.oracles import _integer_gram
from hamforms.quat_algebra import make_algebra


def best_of(fn, repeat):
    ts = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t)
    return min(ts)


def cases():
    A = make_algebra(2)
    H = _integer_gram(zl.order_lattice(A))
    yield "shell_counts (Hurwitz, norm <= 3000)", lambda nb: _kernels.shell_counts(H, 3000, use_numba=nb)

    pts = np.vstack([np.zeros((1, 4)), _order_points(A, 9)])
    z = np.array([0.1, 0.2, -0.3, 0.05])
    yield (f"eisenstein_pairs ({len(pts)}^2 pairs)",
           lambda nb: _kernels.eisenstein_pairs(pts, pts, z, 0.8, -1.0, -1.0, 6.0, use_numba=nb))

    a, delta = 60, 9
    s = math.sqrt(delta)
    span = math.ceil(2 * s) + 1
    lo, hi = [-2 * a - span] * 4, [span] * 4
    r2 = math.ceil(4 * (s + 2 * delta / a) ** 2) + 2
    yield (f"indefinite_candidates (a={a}, delta={delta})",
           lambda nb: _kernels.indefinite_candidates(a, delta, lo, hi, r2, use_numba=nb))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba is not available; only the numpy path can run")
    print(f"{'kernel':48s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name, fn in cases():
        t_np = best_of(lambda: fn(False), args.repeat)
        if _kernels.HAVE_NUMBA:
            fn(True)  # compile / load cache
            t_nb = best_of(lambda: fn(True), args.repeat)
            print(f"{name:48s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")
        else:
            print(f"{name:48s} {t_np:10.4f} {'-':>10s}")


if __name__ == "__main__":
    main()
