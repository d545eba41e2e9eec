"""Command-line front end. Every result is one JSON line (or a CSV row)."""

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import divisor_asymptotics, lattice_zoom, pell, quadratic, y4, zoom_p1

FIELDS = ["command", "parameters", "count", "main_term", "ratio", "elapsed_ms", "result"]


class UsageError(Exception):
    pass


def rational(text):
    """'p/q' or an integer; decimals are refused."""
    if any(c in text for c in ".eE") and not text.lstrip("-").isdigit():
        raise argparse.ArgumentTypeError("use p/q instead of %r" % text)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a rational: %r" % text)


def int_list(n):
    def parse(text):
        try:
            vals = [int(x) for x in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError("expected %d comma-separated integers" % n)
        if len(vals) != n:
            raise argparse.ArgumentTypeError("expected %d comma-separated integers" % n)
        return vals
    return parse


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _target(text):
    if text == "rational":
        return None
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError("target must be 'rational' or 'a,b' for sqrt(b/a)")
    return quadratic.QuadraticTarget(a, b)


def cmd_zoom_p1(args):
    w = zoom_p1.ZoomWindow(args.eps, args.eps_inner, args.B, args.r)
    t = _target(args.target)
    if t is None:
        zc = zoom_p1.count_zoom_rational(w, args.threads)
        return zc.count, zc.main_term, None
    zc = zoom_p1.count_zoom_surd(t, w, args.threads)
    if w.r == zoom_p1.HALF:
        return zc.count, None, {"critical_upper_bound": zoom_p1.critical_upper_bound(t, w.eps_outer)}
    return zc.count, zc.main_term, None


def cmd_pell(args):
    if args.action == "solve":
        sols = pell.solve_pell(args.D, args.m, args.bound)
        return len(sols), None, {"solutions": sols}
    if args.action == "families":
        sols = pell.solve_pell(args.D, args.m, args.bound)
        fams = pell.decompose_families(args.D, args.m, sols)
        return len(fams), None, {"families": [
            {"base": [f.base.x, f.base.y], "gcd": f.gcd_xy} for f in fams]}
    gen = pell.generalized_generator(args.a, args.b)
    nxt = pell.advance_solution(args.a, args.b, args.c, (args.x, args.y), gen)
    return None, None, {"next": list(nxt), "generator": [gen.x, gen.y]}


def cmd_lattice(args):
    L = lattice_zoom.Lattice2(args.basis[:2], args.basis[2:])
    if args.action == "theta":
        q, c, val = lattice_zoom.theta_lambda(L)
        return None, None, {"theta": val, "psi1_over_det": q}
    t = quadratic.QuadraticTarget(args.a, args.b)
    n = lattice_zoom.count_lattice_zoom(t, args.eps, args.K, L, args.B, args.r, args.threads)
    return n, lattice_zoom.lattice_zoom_main_term(t, args.eps, args.K, L, args.B, args.r), None


def cmd_y4(args):
    if args.action in ("height", "curve"):
        P = y4.Y4Point(*args.point)
        if args.action == "height":
            return None, None, {"height": y4.height(P), "distance": y4.distance(P),
                                "thin": y4.thin_set_member(P)}
        c = y4.curve_of(P)
        return None, None, {"a": c.a, "b": c.b, "square_pair": c.square_pair}
    if args.action == "oracle":
        zc = y4.brute_force_zoom_y4(args.eps, args.B, args.r, args.eps_inner)
        return zc.count, None, None
    region = None
    if args.tau1 is not None or args.tau2 is not None:
        if args.tau1 is None or args.tau2 is None:
            raise UsageError("give both --tau1 and --tau2")
        region = (args.tau1, args.tau2)
    zc, breakdown = y4.count_zoom_y4(args.eps, args.B, args.r, args.eps_inner,
                                     args.eta, region, args.threads)
    extra = {"breakdown": {"%d,%d" % k: v for k, v in breakdown.items()}}
    if args.check_oracle:
        oc = y4.brute_force_zoom_y4(args.eps, args.B, args.r, args.eps_inner)
        extra["oracle"] = oc.count
        extra["equal"] = oc.count == zc.count
    return zc.count, zc.main_term, extra


def cmd_constants(args):
    if args.action == "c1":
        return None, None, {"c1": divisor_asymptotics.c1_constant(args.cutoff)}
    return None, None, {"c2": divisor_asymptotics.c2_constant(args.r, args.eta, args.cutoff)}


def cmd_discrepancy(args):
    t = quadratic.QuadraticTarget(args.a, args.b)
    d = quadratic.empirical_discrepancy(t, args.N)
    M = quadratic.partial_quotient_bound(t)
    return None, None, {"discrepancy": float(d),
                        "upper_bound": quadratic.discrepancy_upper_bound(args.N, M)}


def build_parser():
    p = argparse.ArgumentParser(prog="localzoom", description="Local distribution experiments.")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--threads", type=int, default=1, help="worker processes (ZOOM_THREADS overrides)")
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zoom-p1", help="zoom on the projective line")
    z.add_argument("--target", default="rational", help="'rational' or 'a,b' for sqrt(b/a)")
    z.add_argument("--eps", type=rational, required=True)
    z.add_argument("--eps-inner", type=rational, default=Fraction(0))
    z.add_argument("--B", type=int, required=True)
    z.add_argument("--r", type=rational, required=True)
    z.set_defaults(fn=cmd_zoom_p1)

    pl = sub.add_parser("pell", help="Pell-type equations")
    ps = pl.add_subparsers(dest="action", required=True)
    for name in ("solve", "families"):
        q = ps.add_parser(name)
        q.add_argument("--D", type=int, required=True)
        q.add_argument("--m", type=int, required=True)
        q.add_argument("--bound", type=int, required=True)
    q = ps.add_parser("advance")
    for name in ("a", "b", "c", "x", "y"):
        q.add_argument("--" + name, type=int, required=True)
    pl.set_defaults(fn=cmd_pell)

    la = sub.add_parser("lattice", help="zoom on a sublattice")
    ls = la.add_subparsers(dest="action", required=True)
    q = ls.add_parser("theta")
    q.add_argument("--basis", type=int_list(4), default=[1, 0, 0, 1])
    q = ls.add_parser("count")
    q.add_argument("--basis", type=int_list(4), default=[1, 0, 0, 1])
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--eps", type=rational, required=True)
    q.add_argument("--K", type=rational, default=Fraction(1))
    q.add_argument("--B", type=int, required=True)
    q.add_argument("--r", type=rational, required=True)
    la.set_defaults(fn=cmd_lattice)

    yy = sub.add_parser("y4", help="the surface Y4")
    ys = yy.add_subparsers(dest="action", required=True)
    for name in ("height", "curve"):
        q = ys.add_parser(name)
        q.add_argument("--point", type=int_list(4), required=True, help="x,y,s,t")
    for name in ("count", "oracle"):
        q = ys.add_parser(name)
        q.add_argument("--eps", type=rational, required=True)
        q.add_argument("--eps-inner", type=rational, default=Fraction(0))
        q.add_argument("--B", type=int, required=True)
        q.add_argument("--r", type=rational, required=True)
        if name == "count":
            q.add_argument("--eta", type=rational, default=None)
            q.add_argument("--tau1", type=rational, default=None)
            q.add_argument("--tau2", type=rational, default=None)
            q.add_argument("--check-oracle", action="store_true")
    yy.set_defaults(fn=cmd_y4)

    co = sub.add_parser("constants", help="Euler-product constants")
    cs = co.add_subparsers(dest="action", required=True)
    q = cs.add_parser("c1")
    q.add_argument("--cutoff", type=int, default=10 ** 6)
    q = cs.add_parser("c2")
    q.add_argument("--r", type=rational, required=True)
    q.add_argument("--eta", type=rational, required=True)
    q.add_argument("--cutoff", type=int, default=10 ** 6)
    co.set_defaults(fn=cmd_constants)

    d = sub.add_parser("discrepancy", help="discrepancy of k*sqrt(b/a) mod 1")
    d.add_argument("--a", type=int, required=True)
    d.add_argument("--b", type=int, required=True)
    d.add_argument("--N", type=int, required=True)
    d.set_defaults(fn=cmd_discrepancy)
    return p


def _parameters(args):
    skip = {"fn", "format", "command"}
    return {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(row, fmt, out):
    if fmt == "json":
        out.write(json.dumps(row, sort_keys=True) + "\n")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    w.writerow([json.dumps(row[f], sort_keys=True) if isinstance(row[f], (dict, list)) else
                ("" if row[f] is None else row[f]) for f in FIELDS])
    out.write(buf.getvalue())


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    command = args.command + ("" if not getattr(args, "action", None) else " " + args.action)
    t0 = time.perf_counter()
    try:
        count, main, extra = args.fn(args)
    except y4.TooLarge as e:
        print("error: %s" % e, file=sys.stderr)
        return 3
    except (UsageError, ValueError, TypeError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    elapsed = (time.perf_counter() - t0) * 1000
    ratio = count / main if count is not None and main else None
    row = {"command": command, "parameters": _parameters(args), "count": count,
           "main_term": main, "ratio": ratio, "elapsed_ms": round(elapsed, 3),
           "result": _jsonable(extra)}
    _emit(row, args.format, out)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
