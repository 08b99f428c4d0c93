"""Command-line front end.

    sharpembed constant --q 4 --r 1 --T 1 --json
    sharpembed integral --q 3 --alpha 0.2 --deriv
    sharpembed count --q 4 --T 3.14159265
    sharpembed profile --q 4 --T 3.14159265 --n 1 --out run/q4
    sharpembed certify --suite all
    sharpembed sweep --quantity integral --q 4 --alpha-range 0.02 0.24 --steps 50

Exit codes: 0 success, 1 invalid input, 2 failed certification,
3 numerical failure (non-convergence, inconsistency, non-finite output).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import certify as cert
from .embedding import DEFAULT_GRID, EmbeddingParams, sharp_constant
from .errors import DomainError, SharpEmbedError
from .quadrature import DEFAULT_TOL, period_integral, period_integral_deriv, period_limit
from .solutions import (band_index, count_periodic_solutions, first_integral_residual,
                        rayleigh_quotient, reconstruct_profile, solvable_modes,
                        solve_alpha_for_period, symmetry_residual, virial_residual)

EXIT_OK, EXIT_INPUT, EXIT_CERT, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _check_finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise SharpEmbedError(f"non-finite value {obj} in report")
    if isinstance(obj, dict):
        for v in obj.values():
            _check_finite(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _check_finite(v)


def _plain(obj):
    """numpy scalars and containers to plain Python for serialisation."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def dumps_json(report):
    report = _plain(report)
    _check_finite(report)
    return json.dumps(report, allow_nan=False, ensure_ascii=False) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        if not math.isfinite(v):
            raise SharpEmbedError(f"non-finite value {v} in report")
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return str(v)


def dumps_csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(_plain(row.get(h))) for h in header])
    return buf.getvalue()


def _emit(text, out_path):
    if out_path:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _format(args, report, header=None):
    if args.format == "csv":
        rows = report if isinstance(report, list) else [report]
        header = header or list(rows[0].keys())
        return dumps_csv(rows, header)
    return dumps_json(report)


# -- commands ---------------------------------------------------------------

def cmd_constant(args):
    res = sharp_constant(EmbeddingParams(args.q, args.r, args.T), tol=args.tol, grid=args.grid)
    report = {"value": res.value, "status": res.status.value}
    if res.candidates:
        report["candidates"] = {str(n): v for n, v in sorted(res.candidates.items())}
    _emit(_format(args, report, ["value", "status"]), args.out)
    return EXIT_OK


def cmd_integral(args):
    r = period_integral(args.q, args.alpha, args.tol)
    report = {"q": args.q, "alpha": args.alpha, "value": r.value,
              "abs_error_estimate": r.abs_error_estimate, "evaluations": r.evaluations,
              "limit": period_limit(args.q)}
    if args.deriv:
        d = period_integral_deriv(args.q, args.alpha, args.tol)
        report.update(derivative=d.value, derivative_error_estimate=d.abs_error_estimate)
    _emit(_format(args, report), args.out)
    return EXIT_OK


def cmd_count(args):
    report = {"k": count_periodic_solutions(args.q, args.T),
              "solvable_n": solvable_modes(args.q, args.T)}
    _emit(_format(args, report), args.out)
    return EXIT_OK


def cmd_profile(args):
    alpha = solve_alpha_for_period(args.q, args.T, args.n, args.tol)
    if alpha is None:
        raise DomainError(f"no {args.n}-fold periodic solution: T/n <= pi/sqrt(q-2)")
    p = reconstruct_profile(args.q, alpha, args.n, args.T, args.grid)
    invariants = {
        "q": p.q, "T": p.T, "n": p.n, "alpha": p.alpha, "mu": p.mu, "c1": p.c1,
        "y_min": float(p.y.min()), "y_max": float(p.y.max()),
        "period_residual": p.period_residual,
        "first_integral_residual": first_integral_residual(p),
        "virial_residual": virial_residual(p),
        "symmetry_residual": symmetry_residual(p),
        "rayleigh_quotient": rayleigh_quotient(p, p.q, p.T),
        "constant_quotient": (2.0 * p.T) ** (0.5 - 1.0 / p.q),
    }
    if args.out:
        base = Path(args.out)
        rows = [{"x": x, "y": y} for x, y in zip(p.x.tolist(), p.y.tolist())]
        _emit(dumps_csv(rows, ["x", "y"]), str(base) + "_samples.csv")
        _emit(dumps_json(invariants), str(base) + "_invariants.json")
    else:
        _emit(_format(args, invariants), None)
    return EXIT_OK


def cmd_certify(args):
    suites = cert.SUITES if args.suite == "all" else (args.suite,)
    reports = cert.certify_all(suites, density=args.density)
    if args.format == "csv":
        rows = [{"name": r.name, "passed": r.passed, "margin": r.margin, "grid_spec": r.grid_spec}
                for r in reports]
        text = dumps_csv(rows, ["name", "passed", "margin", "grid_spec"])
    else:
        text = dumps_json({"passed": all(r.passed for r in reports),
                           "certificates": [r.to_dict() for r in reports]})
    _emit(text, args.out)
    for r in reports:
        print(f"{r.name}: {'PASS' if r.passed else 'FAIL'} margin={r.margin!r}", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CERT


def _span(rng, steps):
    lo, hi = rng
    return np.linspace(lo, hi, steps).tolist() if steps > 1 else [lo]


def sweep(quantity, q_values, alpha_values=None, T_values=None, r=1.0, tol=DEFAULT_TOL,
          grid=DEFAULT_GRID):
    """Tabulate one quantity over a grid; failing cells keep an empty value."""
    rows = []
    second = "T" if quantity in ("count", "constant") else "alpha"
    for q in q_values:
        for v in (T_values if second == "T" else alpha_values):
            row = {"q": q, second: v, "value": None, "error_estimate": None, "diagnostics": ""}
            try:
                if quantity == "integral":
                    res = period_integral(q, v, tol)
                    row.update(value=res.value, error_estimate=res.abs_error_estimate)
                elif quantity == "deriv":
                    res = period_integral_deriv(q, v, tol)
                    row.update(value=res.value, error_estimate=res.abs_error_estimate)
                elif quantity == "count":
                    row.update(value=count_periodic_solutions(q, v),
                               diagnostics=f"band_index={band_index(q, v)}")
                elif quantity == "constant":
                    res = sharp_constant(EmbeddingParams(q, r, v), tol=tol, grid=grid)
                    row.update(value=res.value, diagnostics=res.status.value)
                else:
                    raise DomainError(f"unknown quantity {quantity!r}")
            except SharpEmbedError as exc:
                row["diagnostics"] = f"{type(exc).__name__}: {exc}"
            rows.append(row)
    return rows, ["q", second, "value", "error_estimate", "diagnostics"]


def cmd_sweep(args):
    if args.q_range:
        q_values = _span(args.q_range[:2], int(args.q_range[2]))
    elif args.q is not None:
        q_values = [args.q]
    else:
        raise UsageError("sweep needs --q or --q-range")
    if args.quantity in ("count", "constant"):
        if not args.T_range:
            raise UsageError(f"sweep of {args.quantity} needs --T-range")
        rows, header = sweep(args.quantity, q_values, T_values=_span(args.T_range, args.steps),
                             r=args.r, tol=args.tol, grid=args.grid)
    else:
        if not args.alpha_range:
            raise UsageError(f"sweep of {args.quantity} needs --alpha-range")
        rows, header = sweep(args.quantity, q_values,
                             alpha_values=_span(args.alpha_range, args.steps), tol=args.tol)
    if args.format == "json":
        _emit(dumps_json({"columns": header, "rows": rows}), args.out)
    else:
        _emit(dumps_csv(rows, header), args.out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}")
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return v
    return conv


def _grid(text):
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("grid size must be at least 2")
    return v


def build_parser():
    parser = _Parser(prog="sharpembed", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_format="json"):
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="format", action="store_const", const="json")
        fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
        p.set_defaults(format=default_format)
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--tol", type=_positive(float), default=DEFAULT_TOL)
        p.add_argument("--grid", type=_grid, default=DEFAULT_GRID)

    p = sub.add_parser("constant", help="sharp embedding constant")
    p.add_argument("--q", type=_positive(float), required=True)
    p.add_argument("--r", type=_positive(float), required=True)
    p.add_argument("--T", type=_positive(float), required=True)
    common(p)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("integral", help="period integral I_q(alpha)")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--deriv", action="store_true", help="also report dI/dalpha")
    common(p)
    p.set_defaults(func=cmd_integral)

    p = sub.add_parser("count", help="number of positive 2T-periodic solutions")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--T", type=_positive(float), required=True)
    common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("profile", help="reconstruct an n-fold periodic solution")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--T", type=_positive(float), required=True)
    p.add_argument("--n", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("certify", help="run grid certificates")
    p.add_argument("--suite", choices=("all",) + cert.SUITES, default="all")
    p.add_argument("--density", type=int, default=1, help="grid density multiplier")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="tabulate a quantity over a grid (CSV)")
    p.add_argument("--quantity", choices=("integral", "deriv", "count", "constant"), required=True)
    p.add_argument("--q", type=float)
    p.add_argument("--q-range", type=float, nargs=3, metavar=("QMIN", "QMAX", "QSTEPS"))
    p.add_argument("--alpha-range", type=float, nargs=2, metavar=("AMIN", "AMAX"))
    p.add_argument("--T-range", type=float, nargs=2, metavar=("TMIN", "TMAX"))
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--r", type=_positive(float), default=1.0)
    common(p, default_format="csv")
    p.set_defaults(func=cmd_sweep)
    return parser


def run(argv=None):
    """Parse, dispatch and map failures to exit codes."""
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "n", 1) < 1:
            raise UsageError("--n must be at least 1")
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SharpEmbedError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
