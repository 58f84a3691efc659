"""Command-line surface and machine-readable reporting.

Every subcommand assembles a deterministic report: stable key order,
rationals rendered as "p/q" strings, no timing data.  Exit status is 0
when every check passes, 1 when any check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from gmpy2 import mpq

from .errors import GuardViolation, PoleError, SingularPivot, TruncationExhausted
from .gauss import currents_for, gauss_decompose, reconstruction_residual
from .graded import GradedDims, GradedMatrix, permutation_op
from .hopf import (
    check_antipode,
    check_coassociativity,
    check_counit,
    check_delta_homomorphism,
)
from .lax import EvalModule, LaxOperator, check_rll
from .rational import Poly, RatFun, rat_str
from .relations import (
    check_all_relations,
    check_anticommutator_sign_control,
    relation_catalog,
)
from .rmatrix import (
    check_graded_ybe,
    r21,
    rmatrix_compact,
    weight_violations,
)

SCHEMA_VERSION = 1
TOOL = {"name": "superyang", "version": "0.1.0"}

_CHECK_ERRORS = (GuardViolation, PoleError, SingularPivot, TruncationExhausted)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if x == float("inf"):
            return "inf"
        if x == float("-inf"):
            return "-inf"
        return x
    if isinstance(x, type(mpq(0))):
        return rat_str(x)
    return str(x)


def _report(config, checks):
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for c in checks:
        s = c.get("status")
        if s == "pass":
            counts["pass"] += 1
        elif s == "skipped":
            counts["skipped"] += 1
        else:
            counts["fail"] += 1
    return {
        "schema": SCHEMA_VERSION,
        "tool": TOOL,
        "config": _jsonable(config),
        "checks": _jsonable(checks),
        "summary": counts,
    }


def _emit(report, path):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["summary"]["fail"] == 0 else 1


# ---- suites ------------------------------------------------------------------


def _matrix_check(name, ok, detail=None):
    rec = {"check": name, "status": "pass" if ok else "fail"}
    if detail is not None:
        rec["witness"] = detail
    return rec


def suite_ybe(dims, hbar, mode="symbolic", samples=20):
    checks = [check_graded_ybe(dims, hbar, mode=mode, samples=samples)]
    u = Poly.var("u")
    r = rmatrix_compact(dims, hbar, u)
    rneg = rmatrix_compact(dims, hbar, -u)
    ident = GradedMatrix.identity(r.parities, one=RatFun(Poly.const(1)))
    checks.append(_matrix_check("unitarity R(u)R(-u) = 1", r * rneg == ident))
    p = permutation_op(dims).transform(lambda v: RatFun(Poly.const(v)))
    r21m = r21(dims, hbar, u)
    checks.append(_matrix_check("pt-symmetry P R P = R21", p * r * p == r21m))
    at0 = r.transform(lambda f: f.eval({"u": mpq(0)}))
    checks.append(_matrix_check("R(0) = P", at0 == permutation_op(dims)))
    checks.append(_matrix_check("weight conservation",
                                weight_violations(r) == []))
    return checks


def suite_rll(dims, a, b, hbar, order):
    modA = EvalModule(dims, hbar, (a,))
    modB = None if b is None else EvalModule(dims, hbar, (b,))
    results = check_rll(modA, modB, form="all", order=order)
    return [{"check": f"rll {name}", **res}
            for name, res in sorted(results.items())]


def suite_gauss(dims, a, hbar, order, dump=False):
    module = EvalModule(dims, hbar, (a,))
    checks = []
    dumped = {}
    for sign in "+-":
        lax = LaxOperator(module, sign, order)
        gd = gauss_decompose(lax)
        res = reconstruction_residual(gd, lax)
        checks.append(_matrix_check(
            f"gauss reconstruction sign {sign}", res is None, res))
        if dump:
            fams = {"e": gd.e, "k": gd.k, "f": gd.f}
            dumped[sign] = {
                fam: {str(key): {"window": list(s.windows[0]),
                                 "terms": len(s.coeffs)}
                      for key, s in sorted(d.items(), key=lambda kv: str(kv[0]))}
                for fam, d in fams.items()
            }
    return checks, dumped


def suite_relations(dims, a, hbar, order, only=None):
    cs = currents_for(EvalModule(dims, hbar, (a,)), order)
    catalog = relation_catalog(dims)
    if only:
        catalog = [r for r in catalog if r.name == only]
    checks = check_all_relations(cs, catalog)
    if not only:
        ctl = check_anticommutator_sign_control(cs)
        checks.append(_matrix_check(
            "negative control: flipped bracket sign must fail",
            ctl["status"] == "fail"))
    return checks


def suite_hopf(dims, points, hbar, order):
    mods = [EvalModule(dims, hbar, (p,)) for p in points]
    checks = []
    checks += check_delta_homomorphism(mods[0], mods[1], order)
    checks += check_counit(mods[0], order)
    checks += check_antipode(mods[0], order)
    if len(mods) >= 3:
        checks += check_coassociativity(mods[0], mods[1], mods[2], order)
    return checks


# ---- argument plumbing ---------------------------------------------------------


def _rat(text):
    try:
        return mpq(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _points(text):
    try:
        pts = tuple(mpq(p) for p in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad point list: {text!r}") from exc
    if len(pts) not in (2, 3):
        raise argparse.ArgumentTypeError("expected 2 or 3 points")
    if len(set(pts)) != len(pts):
        raise argparse.ArgumentTypeError("points must be pairwise distinct")
    return pts


def _common(sp, order_default=8):
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--hbar", type=_rat, required=True)
    sp.add_argument("--json", dest="json_path", default=None)
    sp.add_argument("--order", type=int, default=order_default)


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="superyang",
        description="Exact verification suites for the super Yangian double",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("ybe-check", help="graded Yang-Baxter and R-matrix laws")
    _common(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--symbolic", action="store_true", default=True)
    g.add_argument("--samples", type=int, default=None)

    sp = sub.add_parser("rll-check", help="exchange relations of the Lax pair")
    _common(sp)
    sp.add_argument("--a", type=_rat, required=True)
    sp.add_argument("--b", type=_rat, default=None)

    sp = sub.add_parser("gauss", help="triangular decomposition checks")
    _common(sp)
    sp.add_argument("--a", type=_rat, required=True)
    sp.add_argument("--dump", action="store_true")

    sp = sub.add_parser("relations", help="defining current relations")
    _common(sp)
    sp.add_argument("--a", type=_rat, required=True)
    sp.add_argument("--only", default=None)

    sp = sub.add_parser("hopf-check", help="coproduct/counit/antipode axioms")
    _common(sp, order_default=6)
    sp.add_argument("--points", type=_points, required=True)

    sp = sub.add_parser("all", help="every suite feasible for (m, n)")
    _common(sp, order_default=6)
    sp.add_argument("--points", type=_points, default=(mpq(3), mpq(5), mpq(7)))
    return ap


def _validate_dims(parser, args, need_currents):
    if args.m < 0 or args.n < 0 or args.m + args.n < 2:
        parser.error("need m, n >= 0 with m + n >= 2")
    if need_currents and (args.m < 1 or args.n < 1):
        parser.error("current suites need m >= 1 and n >= 1")
    return GradedDims(args.m, args.n)


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    cmd = args.command
    config = {"command": cmd, "m": args.m, "n": args.n,
              "hbar": args.hbar, "order": args.order}
    try:
        if cmd == "ybe-check":
            dims = _validate_dims(parser, args, need_currents=False)
            mode = "sampled" if args.samples is not None else "symbolic"
            config["mode"] = mode
            checks = suite_ybe(dims, args.hbar, mode, args.samples or 20)
        elif cmd == "rll-check":
            dims = _validate_dims(parser, args, need_currents=True)
            config.update({"a": args.a, "b": args.b})
            checks = suite_rll(dims, args.a, args.b, args.hbar, args.order)
        elif cmd == "gauss":
            dims = _validate_dims(parser, args, need_currents=True)
            config["a"] = args.a
            checks, dumped = suite_gauss(dims, args.a, args.hbar,
                                         args.order, args.dump)
            report = _report(config, checks)
            if args.dump:
                report["series"] = _jsonable(dumped)
            return _emit(report, args.json_path)
        elif cmd == "relations":
            dims = _validate_dims(parser, args, need_currents=True)
            config.update({"a": args.a, "only": args.only})
            checks = suite_relations(dims, args.a, args.hbar,
                                     args.order, args.only)
        elif cmd == "hopf-check":
            dims = _validate_dims(parser, args, need_currents=True)
            config["points"] = list(args.points)
            checks = suite_hopf(dims, args.points, args.hbar, args.order)
        else:  # all
            dims = _validate_dims(parser, args, need_currents=True)
            pts = args.points
            config["points"] = list(pts)
            workers = int(os.environ.get("SUPERYANG_WORKERS", "1"))
            jobs = [
                ("ybe", lambda: suite_ybe(dims, args.hbar)),
                ("rll", lambda: suite_rll(dims, pts[0], pts[1],
                                          args.hbar, args.order)),
                ("gauss", lambda: suite_gauss(dims, pts[0], args.hbar,
                                              args.order)[0]),
                ("relations", lambda: suite_relations(dims, pts[0],
                                                      args.hbar, args.order)),
                ("hopf", lambda: suite_hopf(dims, pts, args.hbar, args.order)),
            ]
            if workers > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    futs = [(name, pool.submit(fn)) for name, fn in jobs]
                    results = [(name, f.result()) for name, f in futs]
            else:
                results = [(name, fn()) for name, fn in jobs]
            checks = []
            for name, sub_checks in results:
                for c in sub_checks:
                    checks.append({"suite": name, **c})
    except _CHECK_ERRORS as exc:
        checks = [{"check": "suite execution",
                   "status": "error", "detail": str(exc)}]
    return _emit(_report(config, checks), args.json_path)


if __name__ == "__main__":
    sys.exit(main())
