"""Command-line interface.

Exit codes: 0 success, 1 shape check failed (``check`` only) or an oracle
failed (``oracle-check``), 2 input error (unreadable or malformed files, bad
flags, invalid operator names or orders), 3 operator or model error
(unsupported grid, LP failure, transform domain, invalid band, singular design).
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

import numpy as np

from . import compose, io
from .compose import OrderError, Transform, get_transform, parse_op
from .core import SUP, Band, GridMismatch, Malformed, ShapeError, distance
from .range_op import InvalidBounds

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_OPERATOR = 3

INPUT_ERRORS = (Malformed, InvalidBounds, GridMismatch, OrderError, OSError, KeyError)

OP_HELP = (
    "operator, letters outermost first from {r, m, c, q}, e.g. m, cm, qmr, c-m "
    "(a '-' after a letter selects its mirrored version: concave, decreasing, "
    "quasi-concave); 'original' is the identity"
)


def _transform(text: Optional[str]) -> Transform:
    if text is None:
        return get_transform(None)
    if text.startswith("table:"):
        path = text.split(":", 1)[1]
        try:
            tab = np.loadtxt(path, delimiter=",", ndmin=2)
        except ValueError as e:
            raise Malformed(f"{path}: transform table must be two numeric columns y,h ({e})") from None
        if tab.shape[1] != 2:
            raise Malformed(f"{path}: transform table must have two columns y,h")
        return Transform.tabulated(tab[:, 0], tab[:, 1], name=f"table:{path}")
    return get_transform(text)


def _spec(args, text: Optional[str] = None):
    return parse_op(
        text if text is not None else args.op,
        bounds=args.range,
        choice=args.monotone,
        perms=args.perms,
        seed=args.seed,
        transform=_transform(args.transform),
    )


def _add_op_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    if required:
        p.add_argument("--op", required=True, help=OP_HELP)
    p.add_argument("--range", metavar="LO,HI", help="value range for the r step, e.g. 0.1,0.9 (inf allowed)")
    p.add_argument("--perms", metavar="all|sample:N",
                   help="axis orders averaged by multivariate rearrangement "
                        "(default: all for k <= 4, 24 sampled otherwise)")
    p.add_argument("--monotone", default="rearrange", metavar="KIND",
                   help="monotone operator: rearrange (default), isotonic or mix:LAMBDA (1-D only for the last two)")
    p.add_argument("--transform", metavar="NAME",
                   help="wrap the pipeline as h^-1 . O . h with h = identity, log, logit or table:FILE (CSV y,h)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled permutations (default 0)")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["csv", "json"],
                   help="file format (default: from the extension, .json or else csv)")


def cmd_apply(args) -> int:
    f = io.load_sample(args.input, args.format)
    spec = _spec(args)
    out = compose.apply(spec, f)
    print(f"pipeline: {spec.describe()}")
    print(f"max pointwise change: {distance(f, out, SUP):.6g}")
    if args.out:
        io.save_sample(out, args.out, args.format)
    if args.plot_data:
        io.write_plot_data(args.plot_data, f, out)
    return EXIT_OK


def cmd_band(args) -> int:
    if args.band:
        band = io.load_band(args.band, args.format)
    elif args.lower and args.upper:
        band = Band(io.load_sample(args.lower, args.format), io.load_sample(args.upper, args.format))
    else:
        raise Malformed("give either --band FILE or both --lower and --upper")
    spec = _spec(args)
    from .inference import enforce_band

    out = enforce_band(band, spec)
    w0 = band.width(SUP)
    w1 = out.width(SUP)
    print(f"pipeline: {spec.describe()}")
    print(f"sup-width before {w0:.6g} after {w1:.6g}; "
          f"L1-width before {band.width(1):.6g} after {out.width(1):.6g}")
    if args.out:
        io.save_band(out, args.out, args.format)
    if args.plot_data:
        mid = band.lower.with_values((band.lower.values + band.upper.values) / 2)
        emid = out.lower.with_values((out.lower.values + out.upper.values) / 2)
        io.write_plot_data(args.plot_data, mid, emid, band, out)
    return EXIT_OK


def cmd_check(args) -> int:
    f = io.load_sample(args.input, args.format)
    spec = _spec(args)
    if not spec.transform.name == "identity":
        spec.transform.check_domain(f.values, f.grid.points())
    report = compose.check_shape(spec, f, args.tol)
    print(f"shape {spec}: {'PASS' if report.passed else 'FAIL'}")
    print(report)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _int_list(text: str) -> List[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise Malformed(f"expected comma-separated integers, got {text!r}") from None
    if not out or min(out) < 1:
        raise Malformed(f"sample sizes must be positive, got {text!r}")
    return out


def cmd_simulate(args) -> int:
    from .inference import BootstrapConfig, make_dgp, run_mc_study

    kwargs = {"m": args.grid_size} if args.grid_size else {}
    dgp = make_dgp(args.dgp, **kwargs)
    cfg = BootstrapConfig(reps=args.reps, level=args.level, seed=args.seed)
    specs = [_spec(args, t.strip()) for t in args.ops.split(",") if t.strip()]
    n_list = _int_list(args.n)
    if args.sims < 1:
        raise Malformed("--sims must be positive")

    def progress(n, d):
        if args.verbose:
            print(f"  n={n} draw {d + 1}/{args.sims}", file=sys.stderr)

    study = run_mc_study(dgp, specs, n_list, args.sims, cfg, progress)
    print(study.format())
    bad = study.improvement_failures()
    print(f"per-draw improvement violations: {len(bad)}")
    if args.out:
        study.write_csv(args.out)
    if args.draws:
        import csv

        with open(args.draws, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["n", "draw", "op", "sup_error", "width", "covered"])
            w.writeheader()
            w.writerows(study.draws)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    from .oracles import run_oracles

    only = [t.strip() for t in args.only.split(",")] if args.only else None
    results = run_oracles(args.cases, args.seed, only)
    for r in results:
        print(r)
    ok = all(r.passed for r in results)
    print("all oracles pass" if ok else "ORACLE FAILURE")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="shapeforce",
        description="Enforce shape restrictions on functions sampled on rectangular grids.",
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("apply", help="apply an operator to a sample")
    a.add_argument("input", help="sample file (CSV x1,...,xk,value or JSON)")
    _add_op_flags(a)
    _add_format(a)
    a.add_argument("--out", "-o", help="write the enforced sample here")
    a.add_argument("--plot-data", metavar="FILE", help="write x, original, enforced as CSV")
    a.set_defaults(func=cmd_apply)

    b = sub.add_parser("band", help="apply an operator to both ends of a band")
    b.add_argument("--band", help="band file (CSV x1,...,xk,lower,upper or JSON)")
    b.add_argument("--lower", help="lower end-point sample")
    b.add_argument("--upper", help="upper end-point sample")
    _add_op_flags(b)
    _add_format(b)
    b.add_argument("--out", "-o", help="write the enforced band here")
    b.add_argument("--plot-data", metavar="FILE", help="write x, midpoints and both bands as CSV")
    b.set_defaults(func=cmd_band)

    c = sub.add_parser("check", help="verify that a sample satisfies an operator's shape")
    c.add_argument("input")
    _add_op_flags(c)
    _add_format(c)
    c.add_argument("--tol", type=float, default=compose.CHECK_TOL, help="violation tolerance")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("simulate", help="Monte Carlo comparison of original and enforced bands")
    s.add_argument("--dgp", required=True, help="growth-like or production-like")
    s.add_argument("--n", default="500,1000", help="comma-separated sample sizes")
    s.add_argument("--sims", type=int, default=200, help="Monte Carlo draws per sample size")
    s.add_argument("--reps", type=int, default=200, help="bootstrap repetitions")
    s.add_argument("--level", type=float, default=0.95, help="band coverage level")
    s.add_argument("--ops", default="original,c-m,m,q-m", help="comma-separated operators")
    s.add_argument("--grid-size", type=int, help="points per grid axis (DGP default if omitted)")
    s.add_argument("--out", "-o", help="summary CSV (rows operator, three columns per n)")
    s.add_argument("--draws", help="per-draw log CSV")
    s.add_argument("--verbose", "-v", action="store_true", help="report progress on stderr")
    _add_op_flags(s, required=False)
    s.set_defaults(func=cmd_simulate)

    o = sub.add_parser("oracle-check", help="cross-check operators against reference implementations")
    o.add_argument("--cases", type=int, default=200, help="random cases per oracle")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--only", help="comma-separated subset of gcm, simplex, bisection, hull")
    o.set_defaults(func=cmd_oracle_check)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"input error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except ShapeError as e:
        print(f"operator error: {e}", file=sys.stderr)
        return EXIT_OPERATOR


if __name__ == "__main__":
    sys.exit(main())
