"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import energy, pointset, theta2d, verify
from .errors import MaxThetaError, NotReducedWarning
from .lattice import LatticeParam, parse_param, reduce_to_fundamental
from .series import SeriesBudget

PRECISION_ENV = "MAXTHETA_PRECISION"
DEFAULT_PRECISION = 12


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class OutputSpec:
    format: str = "text"
    path: str | None = None
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.format not in ("json", "csv", "text"):
            raise UsageError(f"unknown format {self.format!r}")
        if not 4 <= self.precision <= 17:
            raise UsageError(f"precision must be in [4, 17], got {self.precision}")

    def num(self, v):
        if isinstance(v, (bool, np.bool_)):
            return bool(v)
        if isinstance(v, (int, np.integer)):
            return int(v)
        v = float(v)
        if not np.isfinite(v):
            return repr(v)
        return float(f"{v:.{self.precision}g}")

    def write(self, text: str):
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None


def _clean(out: OutputSpec, obj):
    if isinstance(obj, dict):
        return {k: _clean(out, v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(out, v) for v in obj]
    if isinstance(obj, (float, int, np.floating, np.integer, np.bool_)) and not isinstance(obj, bool):
        return out.num(obj)
    return obj


def _emit_record(out: OutputSpec, record: dict):
    rec = _clean(out, record)
    if out.format == "json":
        out.write(json.dumps(rec) + "\n")
    elif out.format == "csv":
        flat = {k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in rec.items()}
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
        w.writeheader()
        w.writerow(flat)
        out.write(buf.getvalue())
    else:
        width = max(len(k) for k in rec)
        out.write("".join(f"{k:<{width}}  {v}\n" for k, v in rec.items()))


def _notice(msg: str):
    print(f"notice: {msg}", file=sys.stderr)


def _param(args) -> LatticeParam:
    if getattr(args, "tau", None):
        return parse_param(args.tau)
    if args.x is None or args.y is None:
        raise UsageError("give --x and --y (or --tau)")
    return LatticeParam(args.x, args.y)


def _maybe_reduce(L: LatticeParam, no_reduce: bool) -> LatticeParam:
    if no_reduce or L.reduced:
        return L
    R, word = reduce_to_fundamental(L)
    _notice(f"parameter {L} reduced to {R} by {word}")
    return R


# ---------------------------------------------------------------------------
# commands


def cmd_theta(args, out: OutputSpec) -> int:
    L = _param(args)
    if args.no_reduce and args.flavor == "centered" and not L.reduced:
        raise UsageError("--no-reduce is not available for the centered flavor on an unreduced parameter")
    L = _maybe_reduce(L, args.no_reduce)
    q = theta2d.ThetaQuery(L, args.alpha, args.flavor, (args.xi, args.eta))
    res = theta2d.evaluate(q, SeriesBudget(rel_tol=args.rel_tol))
    _emit_record(out, {
        "flavor": args.flavor, "x": res.L.x, "y": res.L.y, "alpha": args.alpha,
        "xi": q.shift[0], "eta": q.shift[1], "value": res.value,
        "radius_k": res.radius[0], "radius_l": res.radius[1],
    })
    return 0


def cmd_scan(args, out: OutputSpec) -> int:
    spec = verify.ScanSpec((args.alpha,), args.nx, args.ny, args.ymax, args.flavor)
    res = verify.scan_extremum(spec)[0]
    kind = "argmin" if args.flavor == "plain" else "argmax"
    opt = {"x": res.argopt.x, "y": res.argopt.y, "value": res.value}
    if out.format == "json":
        doc = {"flavor": args.flavor, "alpha": args.alpha, "nx": args.nx, "ny": args.ny, "ymax": args.ymax,
               "x": res.X.ravel().tolist(), "y": res.Y.ravel().tolist(), "value": res.V.ravel().tolist(), kind: opt}
        out.write(json.dumps(_clean(out, doc)) + "\n")
        return 0
    buf = io.StringIO()
    if out.format == "csv":
        buf.write("x,y,value\n")
        for x, y, v in zip(res.X.ravel(), res.Y.ravel(), res.V.ravel()):
            buf.write(f"{out.num(x)!r},{out.num(y)!r},{out.num(v)!r}\n")
        buf.write(f"# {kind},{out.num(opt['x'])!r},{out.num(opt['y'])!r},{out.num(opt['value'])!r}\n")
    else:
        buf.write(f"{args.flavor} theta, alpha={args.alpha}, {args.nx}x{args.ny} grid, y <= {args.ymax}\n")
        buf.write(f"{kind}: x={out.num(opt['x'])} y={out.num(opt['y'])} value={out.num(opt['value'])}\n")
    out.write(buf.getvalue())
    return 0


ENERGY_KINDS = ("pm", "c", "epstein-pm", "epstein-c", "epstein", "rocksalt", "madelung3d")


def cmd_energy(args, out: OutputSpec) -> int:
    split = energy.EwaldSplit(args.eta)
    rec = {"kind": args.kind}
    if args.kind == "madelung3d":
        rec.update(s=args.s, eta=args.eta, value=energy.madelung_nacl3d(args.s, split))
        _emit_record(out, rec)
        return 0
    L = _maybe_reduce(_param(args), False)
    rec.update(x=L.x, y=L.y)
    if args.kind in ("pm", "c"):
        if not args.pot:
            raise UsageError("--pot is required for pm and c energies")
        f = energy.parse_potential(args.pot)
        fn = energy.energy_pm if args.kind == "pm" else energy.energy_c
        rec.update(potential=str(f), value=fn(L, f, split))
    elif args.kind == "rocksalt":
        if args.p is None or args.q is None:
            raise UsageError("rocksalt needs --p and --q")
        rec.update(p=args.p, q=args.q, rho=args.rho, value=energy.rocksalt_energy(L, args.p, args.q, args.rho, split))
    else:
        if args.s is None:
            raise UsageError(f"{args.kind} needs --s")
        fn = {"epstein-pm": energy.epstein_pm, "epstein-c": energy.epstein_c, "epstein": energy.epstein_plain}[args.kind]
        rec.update(s=args.s, value=fn(L, args.s, split))
    _emit_record(out, rec)
    return 0


def cmd_verify(args, out: OutputSpec) -> int:
    reports = verify.run_suite(args.suite, quick=args.quick)
    if out.format == "json":
        out.write(verify.report_json(reports) + "\n")
    elif out.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "status", "summary", "seconds"])
        for r in reports:
            w.writerow([r.name, ("PASS" if r.ok else "FAIL") if r.gate else "INFO", r.summary, f"{r.seconds:.3f}"])
        out.write(buf.getvalue())
    else:
        out.write(verify.report_text(reports) + "\n")
    return 0 if verify.suite_ok(reports) else 1


def cmd_reduce(args, out: OutputSpec) -> int:
    L = _param(args)
    R, word = reduce_to_fundamental(L)
    _emit_record(out, {"x": R.x, "y": R.y, "word": list(word.letters), "matrix": [list(r) for r in word.matrix]})
    return 0


def cmd_pointset(args, out: OutputSpec) -> int:
    if args.action == "patch":
        X = pointset.make_patch(args.kind, args.R)
        text = pointset.to_json(X) + "\n" if out.format == "json" else pointset.to_csv(X)
        out.write(text)
        return 0
    if not args.file:
        raise UsageError(f"pointset {args.action} needs --file")
    X = pointset.load(args.file)
    if args.action == "delaunay":
        tri = pointset.delaunay(X.points)
        doc = {"triangles": tri.triangles.tolist(), "cells": [list(c) for c in tri.cells],
               "midpoints": tri.midpoints.tolist()}
        if out.format == "csv":
            buf = io.StringIO()
            buf.write("mx,my\n")
            for mx, my in tri.midpoints:
                buf.write(f"{out.num(mx)!r},{out.num(my)!r}\n")
            out.write(buf.getvalue())
        elif out.format == "json":
            out.write(json.dumps(_clean(out, doc)) + "\n")
        else:
            out.write(f"{len(tri.triangles)} triangles, {len(tri.cells)} cells, {len(tri.midpoints)} midpoints\n")
        return 0
    if not args.pot:
        raise UsageError(f"pointset {args.action} needs --pot")
    f = energy.parse_potential(args.pot)
    if args.action == "charges":
        sched = pointset.AnnealSchedule(seed=args.seed)
        e, phi = pointset.charge_energy(X, f, args.method, sched)
        if out.format == "csv":
            out.write(pointset.to_csv(X.with_charges(phi)))
        else:
            _emit_record(out, {"n": X.n, "method": args.method, "energy": e, "charges": phi.tolist()})
        return 0
    value, m = pointset.center_energy(X, f, within=args.within)
    _emit_record(out, {"n": X.n, "energy": value, "midpoint": m.tolist()})
    return 0


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _lattice_args(p):
    p.add_argument("--x", type=float, help="shearing parameter")
    p.add_argument("--y", type=float, help="dilation parameter")
    p.add_argument("--tau", help='parameter as "x+yi" or {"x":..,"y":..}')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None,
                        help="output format (default: csv for scan, text otherwise)")
    common.add_argument("--out", help="write to this file instead of standard output")
    common.add_argument("--precision", type=int, default=None,
                        help=f"significant digits, 4..17 (default ${PRECISION_ENV} or {DEFAULT_PRECISION})")

    parser = _Parser(prog="maxtheta", description="Centered and alternating lattice theta functions and energies.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("theta", parents=[common], help="evaluate a 2D theta function")
    p.add_argument("--flavor", choices=theta2d.FLAVORS, default="plain")
    _lattice_args(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--rel-tol", type=float, default=1e-13)
    p.add_argument("--no-reduce", action="store_true", help="evaluate the raw series at the given parameter")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("scan", parents=[common], help="grid scan over the right half of the fundamental domain")
    p.add_argument("--flavor", choices=("plain", "centered", "alternating"), default="centered")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--nx", type=int, default=200)
    p.add_argument("--ny", type=int, default=200)
    p.add_argument("--ymax", type=float, default=4.0)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("energy", parents=[common], help="lattice energies and Epstein zetas")
    p.add_argument("kind", choices=ENERGY_KINDS)
    _lattice_args(p)
    p.add_argument("--pot", help='potential: "pow:s=3", "gauss:t=1.5", "measure:[(t,w),...]"')
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=1.0, help="split point of the width integral")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("verify", parents=[common], help="run reproduction checks")
    p.add_argument("suite", choices=verify.SUITES, nargs="?", default="all")
    p.add_argument("--quick", action="store_true", help="coarser grids")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", parents=[common], help="reduce a parameter to the fundamental domain")
    _lattice_args(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("pointset", parents=[common], help="finite configurations")
    p.add_argument("action", choices=("delaunay", "charges", "center", "patch"))
    p.add_argument("--file")
    p.add_argument("--pot")
    p.add_argument("--method", choices=("exhaustive", "anneal"), default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=("hexagonal", "square"), default="hexagonal")
    p.add_argument("--R", type=float, default=6.0)
    p.add_argument("--within", type=float, default=None, help="only midpoints this close to the centre")
    p.set_defaults(func=cmd_pointset)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        precision = args.precision if args.precision is not None else _default_precision()
        fmt = args.format or ("csv" if args.command == "scan" else "text")
        out = OutputSpec(fmt, args.out, precision)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NotReducedWarning)
            return args.func(args, out)
    except (UsageError, MaxThetaError, ValueError) as exc:
        print(f"maxtheta: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
