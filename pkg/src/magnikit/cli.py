"""Command-line front end.

Structured results go to stdout as JSON (default) or CSV (--format csv),
diagnostics to stderr.  Exit codes: 0 success, 1 input error, 2 for
undefined or non-convergent results.  Commands producing a magnitude
function accept --sample start:stop:step for curve data and --plot FILE
to render the same curve as a figure next to the delimited output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import closedforms, maghom, rips
from .expsum import ExpSum
from .homology import ChainComplexError, PrimeField, Rationals
from .metric import (
    FiniteMetricSpace,
    MagnitudeUndefined,
    MetricValidationError,
    leinster_magnitude,
)

_INT_SNAP = 1e-6


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad usage; we reserve 2 for undefined
    results and use 1 for input errors."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_grid(spec: str) -> list[float]:
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise ValueError(f"bad grid {spec!r}, expected start:stop:step") from None
    if step <= 0:
        raise ValueError("grid step must be positive")
    if stop < start:
        raise ValueError("grid stop must be >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _snap_int(x: float) -> float:
    return float(round(x)) if abs(x - round(x)) < _INT_SNAP else x


def _expsum_dict(f: ExpSum) -> dict:
    return {"terms": [{"coeff": _snap_int(c), "rate": r} for c, r in f.terms]}


def _parse_field(spec: str):
    if spec in ("rationals", "q", "Q"):
        return Rationals()
    return PrimeField(int(spec))


def _load_space(args) -> FiniteMetricSpace:
    return FiniteMetricSpace.from_csv(args.input, kind=args.metric)


def _emit_rows(rows, header=None):
    if header:
        print(header)
    for row in rows:
        print(",".join(f"{x:.15g}" if isinstance(x, float) else str(x) for x in row))


def _emit_expsum(f: ExpSum, args, label: str) -> None:
    grid = _parse_grid(args.sample) if args.sample else None
    if args.format == "csv":
        if grid is None:
            raise ValueError("--format csv needs --sample start:stop:step")
        _emit_rows([(t, f.eval(t)) for t in grid])
    else:
        out = _expsum_dict(f)
        if grid is not None:
            out["samples"] = [[t, f.eval(t)] for t in grid]
        print(json.dumps(out))
    if args.plot:
        from . import plotting

        ts = grid or _parse_grid("0.01:5:0.05")
        plotting.save_magnitude_plot(args.plot, f, ts, label=label)


# -- subcommands -------------------------------------------------------------


def _cmd_magnitude(args) -> int:
    X = _load_space(args)
    ts = _parse_grid(args.sample) if args.sample else [args.t]
    if any(t <= 0 for t in ts):
        raise ValueError("magnitude is defined for t > 0 only")
    values = [(t, leinster_magnitude(X, t)) for t in ts]
    if args.format == "csv":
        _emit_rows(values)
    elif args.sample:
        print(json.dumps({"samples": [[t, v] for t, v in values]}))
    else:
        print(json.dumps({"t": args.t, "magnitude": values[0][1]}))
    if args.plot:
        from . import plotting

        grid = _parse_grid(args.sample) if args.sample else _parse_grid("0.1:5:0.05")
        curve = [leinster_magnitude(X, t) for t in grid]
        plotting.save_curves(args.plot, grid, {"magnitude": curve},
                             ylabel="magnitude")
    return 0


def _cmd_rips(args) -> int:
    X = _load_space(args)
    fld = _parse_field(args.field)
    if args.method == "barcode":
        gb, f = rips.rips_magnitude_barcode(X, args.max_dim, fld=fld)
    else:
        if args.max_dim is not None:
            raise ValueError("--max-dim applies to the barcode method only")
        f = rips.rips_magnitude(X, method=args.method)
        gb = None
    if args.with_barcode and gb is None:
        raise ValueError("--with-barcode requires --method barcode")
    if args.format == "csv" or not args.with_barcode:
        _emit_expsum(f, args, label=f"Rips magnitude ({args.method})")
    else:
        out = _expsum_dict(f)
        out["barcode"] = gb.to_dict()
        if args.sample:
            out["samples"] = [[t, f.eval(t)] for t in _parse_grid(args.sample)]
        print(json.dumps(out))
        if args.plot:
            from . import plotting

            ts = _parse_grid(args.sample or "0.01:5:0.05")
            plotting.save_magnitude_plot(args.plot, f, ts, label="Rips magnitude")
    if args.euler_curve_out:
        if gb is None:
            raise ValueError("--euler-curve-out requires --method barcode")
        from .barcode import euler_curve

        ec = euler_curve(gb)
        with open(args.euler_curve_out, "w") as fh:
            fh.write("s,chi\n")
            for s, chi in zip(ec.breakpoints, ec.values):
                fh.write(f"{s:.15g},{chi}\n")
    return 0


def _cmd_maghom(args) -> int:
    X = _load_space(args)
    table = maghom.mh_ranks(X, args.kmax, args.lmax, fld=_parse_field(args.field))
    rows = table.rows()
    if args.format == "csv":
        _emit_rows(rows, header="k,l,rank")
    else:
        print(json.dumps({"ranks": [{"k": k, "l": l, "rank": r} for k, l, r in rows]}))
    return 0


def _cmd_bmh(args) -> int:
    X = _load_space(args)
    report = maghom.bmh_reconciliation(X, args.kmax, args.check_t,
                                       fld=_parse_field(args.field))
    print(json.dumps(report))
    return 0


def _cmd_cycle(args) -> int:
    f = closedforms.cycle_magnitude(args.n, args.kind)
    _emit_expsum(f, args, label=f"{args.kind} cycle n={args.n}")
    return 0


def _cmd_limits(args) -> int:
    if args.family == "eucl":
        liminf, partial, tail = closedforms.ec_limits(args.t, args.rmax)
        out = {"liminf": liminf, "limsup_partial": partial, "limsup_tail_bound": tail}
    else:
        out = {
            "liminf": closedforms.geo_liminf(args.t),
            "limsup_partial": closedforms.geo_limsup_partial(args.t, args.rmax),
            "limsup_diverges": True,
        }
    print(json.dumps(out))
    if args.plot:
        from . import plotting

        ts = [0.05 * i for i in range(1, 101)]
        if args.family == "eucl":
            curves = {
                "liminf": [closedforms.ec_limits(t, args.rmax)[0] for t in ts],
                "limsup (partial)": [closedforms.ec_limits(t, args.rmax)[1] for t in ts],
            }
        else:
            curves = {
                "liminf": [closedforms.geo_liminf(t) for t in ts],
                f"partial sum (r<={args.rmax})": [
                    closedforms.geo_limsup_partial(t, args.rmax) for t in ts
                ],
            }
        plotting.save_curves(args.plot, ts, curves, ylabel="magnitude")
    return 0


def _cmd_morse(args) -> int:
    crits = []
    with open(args.crit_csv, newline="") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.lower().startswith("value"):
                continue
            v, i = line.split(",")
            crits.append(closedforms.CriticalPoint(float(v), int(i)))
    f = closedforms.morse_magnitude(crits)
    _emit_expsum(f, args, label="Morse magnitude")
    return 0


def _cmd_sample(args) -> int:
    if args.input:
        with open(args.input) as fh:
            data = json.load(fh)
    else:
        data = json.load(sys.stdin)
    f = ExpSum.from_dict(data)
    grid = _parse_grid(args.grid)
    if not grid:
        raise ValueError("empty sampling grid")
    if args.format == "json":
        print(json.dumps({"samples": [[t, f.eval(t)] for t in grid]}))
    else:
        _emit_rows([(t, f.eval(t)) for t in grid])
    if args.plot:
        from . import plotting

        plotting.save_magnitude_plot(args.plot, f, grid)
    return 0


# -- parser wiring -----------------------------------------------------------


def _add_common(p, metric=False, expsum=False, field=False):
    p.add_argument("--format", choices=["json", "csv"], default="json")
    if metric:
        p.add_argument("--input", required=True, help="CSV file describing the space")
        p.add_argument("--metric", choices=["matrix", "euclidean", "graph"],
                       default="matrix", help="how to interpret the input CSV")
    if expsum:
        p.add_argument("--sample", metavar="START:STOP:STEP",
                       help="evaluate the result on a t-grid")
        p.add_argument("--plot", metavar="FILE",
                       help="render the result to an image file")
    if field:
        p.add_argument("--field", default="rationals", metavar="rationals|P",
                       help="coefficient field (exact rationals or a prime P)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="magnikit",
                     description="Magnitude invariants of barcodes and finite metric spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("magnitude", help="weighting-based magnitude of a space")
    _add_common(p, metric=True)
    p.add_argument("--t", type=float, default=1.0, help="scale parameter")
    p.add_argument("--sample", metavar="START:STOP:STEP")
    p.add_argument("--plot", metavar="FILE")
    p.set_defaults(func=_cmd_magnitude)

    p = sub.add_parser("rips", help="Rips magnitude of a space")
    _add_common(p, metric=True, expsum=True, field=True)
    p.add_argument("--method", choices=["subsets", "euler", "barcode"],
                   default="subsets")
    p.add_argument("--max-dim", type=int, default=None, dest="max_dim",
                   help="truncate the barcode method at this dimension")
    p.add_argument("--with-barcode", action="store_true",
                   help="include the barcode in the JSON output")
    p.add_argument("--euler-curve-out", metavar="FILE",
                   help="write the Euler characteristic curve as CSV s,chi")
    p.set_defaults(func=_cmd_rips)

    p = sub.add_parser("maghom", help="magnitude homology rank table")
    _add_common(p, metric=True, field=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--lmax", type=float, required=True)
    p.set_defaults(func=_cmd_maghom)

    p = sub.add_parser("bmh", help="blurred magnitude homology vs magnitude")
    _add_common(p, metric=True, field=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--check-t", type=float, required=True, dest="check_t")
    p.set_defaults(func=_cmd_bmh)

    p = sub.add_parser("cycle", help="closed-form cycle magnitudes")
    _add_common(p, expsum=True)
    p.add_argument("--kind", choices=["graph", "eucl", "geo"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_cycle)

    p = sub.add_parser("limits", help="circle upper/lower limits")
    _add_common(p)
    p.add_argument("--family", choices=["eucl", "geo"], required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--rmax", type=int, default=999)
    p.add_argument("--plot", metavar="FILE")
    p.set_defaults(func=_cmd_limits)

    p = sub.add_parser("morse", help="signed critical-point magnitude")
    _add_common(p, expsum=True)
    p.add_argument("--crit-csv", required=True, dest="crit_csv",
                   help="CSV of value,index rows")
    p.set_defaults(func=_cmd_morse)

    p = sub.add_parser("sample", help="sample an exponential-sum JSON on a grid")
    p.add_argument("--input", help="ExpSum JSON file (default: stdin)")
    p.add_argument("--grid", required=True, metavar="START:STOP:STEP")
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--plot", metavar="FILE")
    p.set_defaults(func=_cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (MagnitudeUndefined, maghom.ConvergenceError) as e:
        print(json.dumps({"status": "undefined", "reason": str(e)}))
        return 2
    except BrokenPipeError:
        return 0
    except (MetricValidationError, ChainComplexError, rips.EnumerationCapExceeded,
            maghom.TupleCapExceeded, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"magnikit: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
