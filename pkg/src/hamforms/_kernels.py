"""Hot integer/float loops, each with a numba version and a numpy fallback.

HAMFORMS_NUMBA=0 selects the numpy path (numba is also skipped if it fails to
import). Both paths return identical results; benchmarks/bench_kernels.py
times them against each other.
"""
from __future__ import annotations

import math
import os

import numpy as np

_want = os.environ.get("HAMFORMS_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")
try:
    if not _want:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# lattice shells: counts of t in Z^4 with t^T H t / 2 = m for m <= max_norm
# q holds the Fincke-Pohst decomposition q(t) = sum_i q[i,i] (t_i + sum_{j>i} q[i,j] t_j)^2

def _fp_range(center, budget, qii):
    if budget < 0:
        return 1, 0
    w = math.sqrt(budget / qii) + 1e-9
    return math.ceil(center - w), math.floor(center + w)


def _shell_counts_py(H, q, max_norm):
    counts = np.zeros(max_norm + 1, dtype=np.int64)
    top = 2 * max_norm
    budget0 = max_norm * (1 + 1e-12) + 1e-9
    lo3, hi3 = _fp_range(0.0, budget0, q[3, 3])
    for t3 in range(lo3, hi3 + 1):
        r3 = budget0 - q[3, 3] * t3 * t3
        c2 = -q[2, 3] * t3
        lo2, hi2 = _fp_range(c2, r3, q[2, 2])
        for t2 in range(lo2, hi2 + 1):
            r2 = r3 - q[2, 2] * (t2 - c2) ** 2
            c1 = -(q[1, 2] * t2 + q[1, 3] * t3)
            lo1, hi1 = _fp_range(c1, r2, q[1, 1])
            if lo1 > hi1:
                continue
            t1 = np.arange(lo1, hi1 + 1, dtype=np.int64)
            r1 = r2 - q[1, 1] * (t1 - c1) ** 2
            c0 = -(q[0, 1] * t1 + q[0, 2] * t2 + q[0, 3] * t3)
            w = np.sqrt(np.maximum(r1, 0.0) / q[0, 0]) + 1e-9
            lo0 = np.ceil(c0 - w).astype(np.int64)
            hi0 = np.floor(c0 + w).astype(np.int64)
            ok = r1 >= 0
            if not ok.any():
                continue
            span = int((hi0 - lo0)[ok].max()) + 1
            if span <= 0:
                continue
            t0 = lo0[:, None] + np.arange(span, dtype=np.int64)[None, :]
            valid = ok[:, None] & (t0 <= hi0[:, None])
            tt1 = np.broadcast_to(t1[:, None], t0.shape)
            v = (H[0, 0] * t0 * t0 + H[1, 1] * tt1 * tt1 + H[2, 2] * t2 * t2 + H[3, 3] * t3 * t3
                 + 2 * (H[0, 1] * t0 * tt1 + H[0, 2] * t0 * t2 + H[0, 3] * t0 * t3
                        + H[1, 2] * tt1 * t2 + H[1, 3] * tt1 * t3 + H[2, 3] * t2 * t3))
            sel = v[valid & (v <= top)]
            counts += np.bincount(sel // 2, minlength=max_norm + 1)[: max_norm + 1]
    return counts


if HAVE_NUMBA:
    @njit(cache=True)
    def _shell_counts_nb(H, q, max_norm):
        counts = np.zeros(max_norm + 1, dtype=np.int64)
        top = 2 * max_norm
        budget0 = max_norm * (1 + 1e-12) + 1e-9
        w3 = math.sqrt(budget0 / q[3, 3]) + 1e-9
        for t3 in range(math.ceil(-w3), math.floor(w3) + 1):
            r3 = budget0 - q[3, 3] * t3 * t3
            if r3 < 0:
                continue
            c2 = -q[2, 3] * t3
            w2 = math.sqrt(r3 / q[2, 2]) + 1e-9
            for t2 in range(math.ceil(c2 - w2), math.floor(c2 + w2) + 1):
                r2 = r3 - q[2, 2] * (t2 - c2) ** 2
                if r2 < 0:
                    continue
                c1 = -(q[1, 2] * t2 + q[1, 3] * t3)
                w1 = math.sqrt(r2 / q[1, 1]) + 1e-9
                for t1 in range(math.ceil(c1 - w1), math.floor(c1 + w1) + 1):
                    r1 = r2 - q[1, 1] * (t1 - c1) ** 2
                    if r1 < 0:
                        continue
                    c0 = -(q[0, 1] * t1 + q[0, 2] * t2 + q[0, 3] * t3)
                    w0 = math.sqrt(r1 / q[0, 0]) + 1e-9
                    rest = (H[1, 1] * t1 * t1 + H[2, 2] * t2 * t2 + H[3, 3] * t3 * t3
                            + 2 * (H[1, 2] * t1 * t2 + H[1, 3] * t1 * t3 + H[2, 3] * t2 * t3))
                    lin = 2 * (H[0, 1] * t1 + H[0, 2] * t2 + H[0, 3] * t3)
                    for t0 in range(math.ceil(c0 - w0), math.floor(c0 + w0) + 1):
                        v = H[0, 0] * t0 * t0 + lin * t0 + rest
                        if v <= top:
                            counts[v // 2] += 1
        return counts


def fincke_pohst_q(G) -> np.ndarray:
    """Float decomposition of a positive definite Gram matrix for the enumeration loops."""
    n = len(G)
    q = np.array(G, dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            q[j, i] = q[i, j]
            q[i, j] = q[i, j] / q[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k, l] -= q[k, i] * q[i, l]
    for i in range(n):
        for j in range(i):
            q[i, j] = 0.0
    return q


def shell_counts(H, max_norm: int, use_numba: bool | None = None) -> np.ndarray:
    """counts[m] = #{t in Z^4 : t^T H t = 2m}, m = 0..max_norm. H = 2*Gram, integer."""
    H = np.asarray(H, dtype=np.int64)
    q = fincke_pohst_q(H / 2.0)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        return _shell_counts_nb(H, q, int(max_norm))
    return _shell_counts_py(H, q, int(max_norm))


# ---------------------------------------------------------------------------
# truncated Eisenstein sum over pairs (c, d) of order points (float coordinates)

def _qmul(x, y, al, be):
    return np.stack([
        x[..., 0] * y[..., 0] + al * x[..., 1] * y[..., 1] + be * x[..., 2] * y[..., 2] - al * be * x[..., 3] * y[..., 3],
        x[..., 0] * y[..., 1] + x[..., 1] * y[..., 0] - be * x[..., 2] * y[..., 3] + be * x[..., 3] * y[..., 2],
        x[..., 0] * y[..., 2] + x[..., 2] * y[..., 0] + al * x[..., 1] * y[..., 3] - al * x[..., 3] * y[..., 1],
        x[..., 0] * y[..., 3] + x[..., 3] * y[..., 0] + x[..., 1] * y[..., 2] - x[..., 2] * y[..., 1],
    ], axis=-1)


def _eis_py(cs, ds, z, rsq, al, be, s):
    w = np.array([1.0, -al, -be, al * be])
    r = math.sqrt(rsq)
    cz = _qmul(cs, np.broadcast_to(z, cs.shape), al, be)
    nc = (cs * cs) @ w
    total = 0.0
    for i in range(len(cs)):
        v = cz[i][None, :] + ds
        den = (v * v) @ w + rsq * nc[i]
        den = den[den > 0]
        total += float(np.sum((r / den) ** s))
    return total


if HAVE_NUMBA:
    @njit(cache=True)
    def _eis_nb(cs, ds, z, rsq, al, be, s):
        r = math.sqrt(rsq)
        total = 0.0
        for i in range(cs.shape[0]):
            c0, c1, c2, c3 = cs[i, 0], cs[i, 1], cs[i, 2], cs[i, 3]
            w0 = c0 * z[0] + al * c1 * z[1] + be * c2 * z[2] - al * be * c3 * z[3]
            w1 = c0 * z[1] + c1 * z[0] - be * c2 * z[3] + be * c3 * z[2]
            w2 = c0 * z[2] + c2 * z[0] + al * c1 * z[3] - al * c3 * z[1]
            w3 = c0 * z[3] + c3 * z[0] + c1 * z[2] - c2 * z[1]
            nc = c0 * c0 - al * c1 * c1 - be * c2 * c2 + al * be * c3 * c3
            for j in range(ds.shape[0]):
                v0 = w0 + ds[j, 0]
                v1 = w1 + ds[j, 1]
                v2 = w2 + ds[j, 2]
                v3 = w3 + ds[j, 3]
                den = v0 * v0 - al * v1 * v1 - be * v2 * v2 + al * be * v3 * v3 + rsq * nc
                if den > 0:
                    total += (r / den) ** s
        return total


def eisenstein_pairs(cs, ds, z, rsq, alpha, beta, s, use_numba: bool | None = None) -> float:
    """Sum of (r / (n(cz+d) + r^2 n(c)))^s over all rows c of cs and d of ds, skipping zero denominators."""
    cs = np.ascontiguousarray(cs, dtype=np.float64)
    ds = np.ascontiguousarray(ds, dtype=np.float64)
    z = np.ascontiguousarray(z, dtype=np.float64)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        return float(_eis_nb(cs, ds, z, float(rsq), float(alpha), float(beta), float(s)))
    return _eis_py(cs, ds, z, float(rsq), float(alpha), float(beta), float(s))


# ---------------------------------------------------------------------------
# candidate middle coefficients for indefinite enumeration (d_a = 2)
# B = 2b in Z^4, all coordinates of one parity, lo <= B <= hi coordinatewise,
# sum (B_l + a)^2 <= r2 and (sum B^2 - 4 delta) divisible by 4a.
# Two exact necessary conditions for the locus of (a, b, c) to meet the domain,
# written for x = -B = 2a w (w the sphere centre):
#   sum dist(x_l, [0, 2a])^2 < 4 delta            (ball meets the cube)
#   sum psi(x_l) >= 4a^2 - 4 delta                (sphere constraints can hold)
# with psi(x) = 2a x - x^2 on [0, 2a], -x^2 below, -(x - 2a)^2 above.


def _psi_dist(x, a):
    if x < 0:
        return -x * x, x * x
    if x > 2 * a:
        return -(x - 2 * a) ** 2, (x - 2 * a) ** 2
    return 2 * a * x - x * x, 0

def _cand_py(a, delta, lo, hi, r2):
    out = []
    for par in (0, 1):
        axes = []
        for k in range(4):
            start = lo[k] + ((lo[k] - par) % 2)
            axes.append(np.arange(start, hi[k] + 1, 2, dtype=np.int64))
        if any(len(x) == 0 for x in axes):
            continue
        g0, g1 = np.meshgrid(axes[0], axes[1], indexing="ij")
        g0 = g0.ravel()
        g1 = g1.ravel()
        p01 = (g0 + a) ** 2 + (g1 + a) ** 2
        keep = p01 <= r2
        g0, g1, p01 = g0[keep], g1[keep], p01[keep]
        for b2 in axes[2]:
            p2 = p01 + (b2 + a) ** 2
            k2 = p2 <= r2
            if not k2.any():
                continue
            x0, x1, p2 = g0[k2], g1[k2], p2[k2]
            b3 = axes[3]
            tot = p2[:, None] + (b3[None, :] + a) ** 2
            nb = (x0 * x0 + x1 * x1 + b2 * b2)[:, None] + b3[None, :] ** 2
            m = (tot <= r2) & ((nb - 4 * delta) % (4 * a) == 0)
            ii, jj = np.nonzero(m)
            if len(ii):
                out.append(np.stack([x0[ii], x1[ii], np.full(len(ii), b2, dtype=np.int64), b3[jj]], axis=1))
    if not out:
        return np.zeros((0, 4), dtype=np.int64)
    res = np.concatenate(out)
    x = -res
    below = np.minimum(x, 0)
    above = np.maximum(x - 2 * a, 0)
    dist = (below ** 2 + above ** 2).sum(axis=1)
    psi = np.where(x < 0, -x * x, np.where(x > 2 * a, -(x - 2 * a) ** 2, 2 * a * x - x * x)).sum(axis=1)
    keep = (dist < 4 * delta) & (psi >= 4 * a * a - 4 * delta)
    return res[keep]


if HAVE_NUMBA:
    _psi_dist_nb = njit(cache=True)(_psi_dist)

    @njit(cache=True)
    def _cand_nb_pass(a, delta, lo, hi, r2, out, fill):
        n = 0
        for par in range(2):
            s0 = lo[0] + ((lo[0] - par) % 2)
            for b0 in range(s0, hi[0] + 1, 2):
                p0 = (b0 + a) ** 2
                if p0 > r2:
                    continue
                s1 = lo[1] + ((lo[1] - par) % 2)
                for b1 in range(s1, hi[1] + 1, 2):
                    p1 = p0 + (b1 + a) ** 2
                    if p1 > r2:
                        continue
                    s2 = lo[2] + ((lo[2] - par) % 2)
                    for b2 in range(s2, hi[2] + 1, 2):
                        p2 = p1 + (b2 + a) ** 2
                        if p2 > r2:
                            continue
                        s3 = lo[3] + ((lo[3] - par) % 2)
                        for b3 in range(s3, hi[3] + 1, 2):
                            p3 = p2 + (b3 + a) ** 2
                            if p3 > r2:
                                continue
                            nb = b0 * b0 + b1 * b1 + b2 * b2 + b3 * b3
                            if (nb - 4 * delta) % (4 * a) != 0:
                                continue
                            dist = 0
                            psi = 0
                            for x in (-b0, -b1, -b2, -b3):
                                ps, ds = _psi_dist_nb(x, a)
                                psi += ps
                                dist += ds
                            if dist >= 4 * delta or psi < 4 * a * a - 4 * delta:
                                continue
                            if fill:
                                out[n, 0] = b0
                                out[n, 1] = b1
                                out[n, 2] = b2
                                out[n, 3] = b3
                            n += 1
        return n

    def _cand_nb(a, delta, lo, hi, r2):
        dummy = np.zeros((0, 4), dtype=np.int64)
        n = _cand_nb_pass(a, delta, lo, hi, r2, dummy, False)
        out = np.zeros((n, 4), dtype=np.int64)
        _cand_nb_pass(a, delta, lo, hi, r2, out, True)
        return out


def indefinite_candidates(a: int, delta: int, lo, hi, r2: int, use_numba: bool | None = None) -> np.ndarray:
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        res = _cand_nb(int(a), int(delta), lo, hi, int(r2))
    else:
        res = _cand_py(int(a), int(delta), lo, hi, int(r2))
    # canonical row order so both paths agree exactly
    if len(res):
        res = res[np.lexsort(res.T[::-1])]
    return res
