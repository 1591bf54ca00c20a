"""Command-line frontend. Every subcommand prints JSON (one document, or JSON
lines for enumerations) to stdout or --out.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from fractions import Fraction

from . import constants as C
from . import oracles, reduction
from . import zlattice as zl
from ._util import fmt_frac, to_frac
from .errors import HamformsError
from .forms import HermForm, act, classify, discriminant
from .mat2_geometry import HPoint, Mat2, dieudonne_det_sq, is_sl2o, sample_sl2o
from .quat_algebra import make_algebra

log = logging.getLogger("hamforms")

CONFIG_KEYS = ("da", "delta", "bound_scale", "seed", "jobs", "out", "step_cap")
DEFAULTS = {"da": 2, "seed": 0, "jobs": 1, "bound_scale": "1", "step_cap": reduction.DEFAULT_STEP_CAP}


class UsageError(Exception):
    pass


def _load_toml(path):
    try:
        import tomllib
    except ImportError:  # python < 3.11
        import tomli as tomllib
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _json_arg(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{what}: invalid JSON ({e})")


def _quat(A, x):
    if isinstance(x, list):
        if len(x) != 4:
            raise UsageError("quaternions are lists of 4 rationals")
        return A.element(*[to_frac(str(v)) for v in x])
    return A.scalar(to_frac(str(x)))


def _matrix(A, text) -> Mat2:
    m = _json_arg(text, "--matrix")
    if not (isinstance(m, list) and len(m) == 2 and all(isinstance(r, list) and len(r) == 2 for r in m)):
        raise UsageError("--matrix must be [[a, b], [c, d]]")
    return Mat2(_quat(A, m[0][0]), _quat(A, m[0][1]), _quat(A, m[1][0]), _quat(A, m[1][1]))


def _form(A, text) -> HermForm:
    obj = _json_arg(text, "--form")
    if isinstance(obj, list) and len(obj) == 3:
        obj = {"a": obj[0], "b": obj[1], "c": obj[2]}
    if not isinstance(obj, dict) or not {"a", "b", "c"} <= set(obj):
        raise UsageError("--form must be {a, b, c} or [a, b, c]")
    A = make_algebra(int(obj.get("d_a", A.d_a)))
    return HermForm(to_frac(str(obj["a"])), _quat(A, obj["b"]), to_frac(str(obj["c"])))


# ---------------------------------------------------------------------------
# subcommands

def cmd_volume(args):
    out = {"d_a": args.da}
    if args.route in ("eisenstein", "both"):
        out["eisenstein"] = str(C.covolume_eisenstein(args.da))
    if args.route in ("prasad", "both"):
        out["prasad"] = str(C.covolume_prasad(args.da))
    v = C.covolume_eisenstein(args.da) if args.route != "prasad" else C.covolume_prasad(args.da)
    if args.route == "both":
        out["equal"] = C.covolume_eisenstein(args.da) == C.covolume_prasad(args.da)
    out.update({"terms": v.to_json()["terms"], "float": v.to_json()["float"]})
    return out


def cmd_zeta(args):
    s = to_frac(args.s)
    out = {"d_a": args.da, "s": fmt_frac(s), "float": C.zeta_a_float(args.da, float(s))}
    try:
        out["exact"] = C.zeta_a(args.da, s).to_json()
    except HamformsError as e:
        out["exact"] = None
        out["note"] = str(e)
    return out


def cmd_constant(args):
    d = args.da
    delta = args.delta if args.delta is not None else 1
    covol = C.sp1_covolume(d) if args.covol is None else C.SymConst.rational(to_frac(args.covol))
    units = args.units
    if units is None and d in (2, 3, 5, 7, 13):
        units = make_algebra(d).unit_count
    if args.theorem == "main":
        val = C.counting_constant_main(d, delta, covol)
    elif args.theorem == "cor12":
        if not units:
            raise UsageError("--units is required outside the supported algebras")
        val = C.counting_constant_cor12(d, delta, covol, units)
    elif args.theorem == "general":
        if not units:
            raise UsageError("--units is required outside the supported algebras")
        val = C.counting_constant_general(d, delta, covol, args.iota, args.idx_stab, args.idx_total, units)
    else:
        val = C.cor12_closed_form(d)
    return {"theorem": args.theorem, "d_a": d, "delta": delta, "covol": str(covol), **val.to_json()}


def cmd_det(args):
    A = make_algebra(args.da)
    g = _matrix(A, args.matrix)
    return {"det_sq": fmt_frac(dieudonne_det_sq(g)), "in_sl2o": is_sl2o(g)}


def cmd_act(args):
    A = make_algebra(args.da)
    f = _form(A, args.form)
    g = _matrix(f.algebra, args.matrix)
    h = act(f, g)
    return {"form": h.to_json(), "delta": fmt_frac(discriminant(h)), "class": classify(h).value}


def cmd_reduce(args):
    A = make_algebra(args.da)
    if args.point:
        obj = _json_arg(args.point, "--point")
        x = HPoint(_quat(A, obj["z"]), to_frac(str(obj["rsq"])))
        y, tr = reduction.reduce_point(x, args.step_cap)
        return {"point": y.to_json(), "word": [m.to_json() for m in tr.word], "steps": tr.steps}
    if not args.form:
        raise UsageError("reduce needs --form or --point")
    f = _form(A, args.form)
    h, g = reduction.reduce_form(f, args.step_cap)
    return {"form": h.to_json(), "matrix": g.to_json(), "delta": fmt_frac(discriminant(h))}


def cmd_enumerate(args):
    if args.delta is None:
        raise UsageError("enumerate-reduced needs --delta")
    if args.da != 2:
        raise UsageError("enumeration is implemented for --da 2 only")
    scale = to_frac(str(args.bound_scale))
    forms = reduction.enumerate_reduced(args.delta, scale, jobs=args.jobs)
    meta = {"meta": {"delta": args.delta, "bound_scale": fmt_frac(scale),
                     "a_max": reduction.enumeration_bound(args.delta, scale),
                     "certified_a_bound": reduction.certified_bound(args.delta),
                     "count": len(forms)}}
    lines = [json.dumps(meta)] + [json.dumps({k: v for k, v in f.to_json().items()}) for f in forms]
    return lines


def cmd_verify(args):
    rng = random.Random(args.seed)
    n = args.samples
    report = {}
    algebras = [make_algebra(d) for d in (2, 3, 5, 7, 13)]
    ok = 0
    for i in range(n):
        A = algebras[i % 5]
        g = sample_sl2o(A, rng.randrange(2 ** 31), rng.randint(0, 12))
        h = sample_sl2o(A, rng.randrange(2 ** 31), rng.randint(0, 12))
        ok += dieudonne_det_sq(g * h) == dieudonne_det_sq(g) * dieudonne_det_sq(h) == 1
    report["det_multiplicativity"] = {"checked": n, "passed": ok}
    ok = 0
    for i in range(n):
        A = algebras[i % 5]
        z = A.element(*[Fraction(rng.randint(-20, 20), rng.randint(1, 20)) for _ in range(4)])
        ok += (not z) or zl.chenevier_product(z) == 1
    report["chenevier"] = {"checked": n, "passed": ok}
    ok = 0
    for i in range(n):
        A = algebras[i % 5]
        f = HermForm(rng.randint(-5, 5), A.from_order_coords([rng.randint(-3, 3) for _ in range(4)]),
                     rng.randint(-5, 5))
        g = sample_sl2o(A, rng.randrange(2 ** 31), rng.randint(0, 8))
        ok += discriminant(act(f, g)) == discriminant(f)
    report["discriminant_invariance"] = {"checked": n, "passed": ok}
    report["covolume_routes"] = {d: C.covolume_eisenstein(d) == C.covolume_prasad(d) for d in (2, 3, 5, 7, 13, 30)}
    report["ok"] = all(v["checked"] == v["passed"] for k, v in report.items() if isinstance(v, dict) and "checked" in v) \
        and all(report["covolume_routes"].values())
    return report


def cmd_oracle(args):
    A = make_algebra(args.da)
    O = zl.order_lattice(A)
    if args.which == "units":
        return {"d_a": args.da, "unit_count": oracles.enumerate_by_norm(O, 1)[0].count,
                "expected": 24 // (args.da - 1)}
    if args.which == "shells":
        return {"shells": [{"m": s.m, "count": s.count} for s in oracles.enumerate_by_norm(O, args.bound)]}
    if args.which == "zeta-partial":
        val = oracles.zeta_partial(O, float(args.s), args.bound)
        exact = A.unit_count * C.zeta_a(args.da, to_frac(args.s)) if to_frac(args.s) == 2 else None
        return {"partial": val, "target": float(exact) if exact is not None else None,
                "tail_bound": oracles.zeta_tail_bound(O, args.bound) if exact is not None else None}
    if args.which == "relprime":
        u, v = _quat(A, _json_arg(args.u, "--u")), _quat(A, _json_arg(args.v, "--v"))
        return {"relatively_prime": oracles.relatively_prime(u, v)}
    if args.which == "witness":
        u, v = _quat(A, _json_arg(args.u, "--u")), _quat(A, _json_arg(args.v, "--v"))
        w = oracles.search_witness_ii(u, v, args.box)
        return {"witness": None if w is None else [w[0].to_json(), w[1].to_json()]}
    if args.which == "chenevier":
        z = _quat(A, _json_arg(args.z, "--z"))
        return {"value": fmt_frac(zl.chenevier_product(z))}
    raise UsageError(f"unknown oracle {args.which}")


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--da", type=int, default=None, help="reduced discriminant of the algebra (default 2)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=None)
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")
    common.add_argument("--step-cap", dest="step_cap", type=int, default=None)
    common.add_argument("--config", default=None, help="TOML file with the same keys as the flags")

    p = argparse.ArgumentParser(prog="hamforms", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("volume", parents=[common], help="covolume of PSL_2(O)")
    s.add_argument("--route", choices=("eisenstein", "prasad", "both"), default="both")
    s.set_defaults(func=cmd_volume)

    s = sub.add_parser("zeta", parents=[common], help="zeta function of the algebra")
    s.add_argument("--s", default="2")
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("constant", parents=[common], help="counting constants")
    s.add_argument("--theorem", choices=("main", "general", "cor12", "closed"), default="main")
    s.add_argument("--delta", type=int, default=None)
    s.add_argument("--covol", default=None, help="rational covolume; default is the norm-one group covolume")
    s.add_argument("--iota", type=int, default=1)
    s.add_argument("--idx-stab", dest="idx_stab", type=int, default=1)
    s.add_argument("--idx-total", dest="idx_total", type=int, default=1)
    s.add_argument("--units", type=int, default=None)
    s.set_defaults(func=cmd_constant)

    s = sub.add_parser("det", parents=[common], help="squared Dieudonne determinant")
    s.add_argument("--matrix", required=True, help="JSON [[a,b],[c,d]], entries rationals or 4-lists")
    s.set_defaults(func=cmd_det)

    s = sub.add_parser("act", parents=[common], help="f o g")
    s.add_argument("--form", required=True)
    s.add_argument("--matrix", required=True)
    s.set_defaults(func=cmd_act)

    s = sub.add_parser("reduce", parents=[common], help="reduce a form or a point (d_a = 2)")
    s.add_argument("--form", default=None)
    s.add_argument("--point", default=None, help='JSON {"z": [..4..], "rsq": "p/q"}')
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("enumerate-reduced", parents=[common], help="reduced forms of a discriminant")
    s.add_argument("--delta", type=int, default=None)
    s.add_argument("--bound-scale", dest="bound_scale", default=None)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("verify", parents=[common], help="run sampled invariant checks")
    s.add_argument("--samples", type=int, default=50)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("oracle", parents=[common], help="brute-force cross-checks")
    s.add_argument("which", choices=("units", "shells", "zeta-partial", "relprime", "witness", "chenevier"))
    s.add_argument("--bound", type=int, default=20)
    s.add_argument("--s", default="2")
    s.add_argument("--u", default="1")
    s.add_argument("--v", default="0")
    s.add_argument("--z", default="1")
    s.add_argument("--box", type=int, default=2)
    s.set_defaults(func=cmd_oracle)
    return p


def _apply_config(args):
    cfg = {}
    if args.config:
        cfg = _load_toml(args.config)
        unknown = set(cfg) - set(CONFIG_KEYS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for key in CONFIG_KEYS:
        if getattr(args, key, None) is None and hasattr(args, key):
            if key in cfg:
                setattr(args, key, cfg[key])
            elif key in DEFAULTS:
                setattr(args, key, DEFAULTS[key])


def _emit(result, out):
    if isinstance(result, list):
        text = "\n".join(result) + "\n"
    else:
        text = json.dumps(result, indent=2, default=str) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    level = os.environ.get("HAMFORMS_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    try:
        _apply_config(args)
        result = args.func(args)
    except UsageError as e:
        print(f"hamforms: usage error: {e}", file=sys.stderr)
        return 2
    except (HamformsError, ValueError, ZeroDivisionError) as e:
        print(f"hamforms: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    _emit(result, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
