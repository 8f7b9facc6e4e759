"""Command line interface.

Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
Coefficient lists starting with a minus sign need the ``--psi=-0.5,0.3`` form.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys

import numpy as np

from . import formats
from .core import ARModel, MAModel, MarecError, NumericalError, ValidationError, VMAModel
from .estimators import durbin, estimate, suggest_ar_order
from .heatmap import METRICS, render_svg
from .montecarlo import GridSpec, run_grid
from .recursion import ar_to_ma, ma_to_ar
from .simulate import simulate_ar, simulate_ma, simulate_vma

EXIT_USAGE = 1
EXIT_NUMERIC = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_floats(text: str) -> np.ndarray:
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise UsageError(f"cannot parse {text!r} as comma-separated numbers") from None
    if not vals:
        raise UsageError("empty coefficient list")
    return np.array(vals)


def parse_range(text: str) -> tuple:
    vals = parse_floats(text)
    if vals.size != 2:
        raise UsageError(f"range needs two values lo,hi, got {text!r}")
    return float(vals[0]), float(vals[1])


def _open_out(path):
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", newline="")


def _open_in(path):
    return contextlib.nullcontext(sys.stdin) if path == "-" else open(path)


def cmd_recursion(args) -> int:
    if args.direction == "ar-to-ma":
        if args.phi is None:
            raise UsageError("ar-to-ma needs --phi")
        values = ar_to_ma(ARModel(parse_floats(args.phi)), args.n)
    else:
        if args.psi is None:
            raise UsageError("ma-to-ar needs --psi")
        values = ma_to_ar(MAModel(parse_floats(args.psi)), args.n)
    for i, v in enumerate(values, start=1):
        print(f"{i},{float(v)!r}")
    return 0


def cmd_simulate(args) -> int:
    if args.model == "ma":
        series = simulate_ma(MAModel(parse_floats(args.psi or "0"), args.sigma2), args.n, args.seed)
    elif args.model == "ar":
        series = simulate_ar(ARModel(parse_floats(args.phi or "0"), args.sigma2), args.n, args.seed)
    else:
        try:
            psi = json.loads(args.psi)
            sigma = None if args.sigma is None else json.loads(args.sigma)
        except (TypeError, json.JSONDecodeError):
            raise UsageError("vma needs --psi as JSON list of k x k matrices") from None
        series = simulate_vma(VMAModel(psi, sigma), args.n, args.seed)
    with _open_out(args.out) as fh:
        formats.write_series(series, fh)
    return 0


def cmd_estimate(args) -> int:
    with _open_in(args.input) as fh:
        series = formats.read_series(fh)
    if args.l == "auto":
        l = suggest_ar_order(len(series), args.l_cap)
    else:
        try:
            l = int(args.l)
        except ValueError:
            raise UsageError(f"--l must be an integer or 'auto', got {args.l!r}") from None
    if args.method == "durbin" and args.unit_lag:
        report = durbin(series, args.q, l, unit_lag=True)
    else:
        report = estimate(series, args.q, l, args.method)
    out = formats.report_to_json(report) + "\n" if args.format == "json" else formats.report_to_text(report)
    sys.stdout.write(out)
    return 0


def cmd_grid(args) -> int:
    spec = GridSpec(
        psi1_range=parse_range(args.psi1_range),
        psi2_range=parse_range(args.psi2_range),
        points_per_axis=args.points,
        region=args.region,
        T=args.T,
        l=args.l,
        reps=args.reps,
        base_seed=args.seed,
        durbin_unit_lag=args.durbin_unit_lag,
    )
    result = run_grid(spec, workers=args.workers)
    with _open_out(args.out) as fh:
        formats.write_grid(result, fh)
    return 0


def cmd_heatmap(args) -> int:
    with _open_in(args.input) as fh:
        result = formats.read_grid(fh)
    svg = render_svg(result, args.metric)
    with _open_out(args.out) as fh:
        fh.write(svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="marec", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("recursion", help="AR<->MA coefficient recursions")
    r.add_argument("direction", choices=("ar-to-ma", "ma-to-ar"))
    r.add_argument("--phi")
    r.add_argument("--psi")
    r.add_argument("--n", type=int, required=True)
    r.set_defaults(func=cmd_recursion)

    s = sub.add_parser("simulate", help="simulate a zero-start MA/AR/VMA path to CSV")
    s.add_argument("--model", choices=("ma", "ar", "vma"), default="ma")
    s.add_argument("--psi", help="comma list (ma) or JSON list of matrices (vma)")
    s.add_argument("--phi")
    s.add_argument("--sigma2", type=float, default=1.0)
    s.add_argument("--sigma", help="JSON k x k innovation covariance (vma)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("estimate", help="estimate an MA/VMA model from a series CSV")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--q", type=int, required=True)
    e.add_argument("--l", default="auto", help="stage-1 AR order or 'auto'")
    e.add_argument("--l-cap", type=int, default=None)
    e.add_argument("--method", choices=("restricted-ols", "durbin", "unrestricted-ols"),
                   default="restricted-ols")
    e.add_argument("--unit-lag", action="store_true",
                   help="durbin: include the unit lag-polynomial coefficient")
    e.add_argument("--format", choices=("text", "json"), default="text")
    e.set_defaults(func=cmd_estimate)

    g = sub.add_parser("grid", help="MA(2) Monte Carlo grid experiment")
    g.add_argument("--psi1-range", default="-2.2,2.2")
    g.add_argument("--psi2-range", default="-2.2,2.2")
    g.add_argument("--points", type=int, default=23)
    g.add_argument("--region", choices=("invertible", "noninvertible"), default="invertible")
    g.add_argument("--T", type=int, default=400)
    g.add_argument("--l", type=int, default=100)
    g.add_argument("--reps", type=int, default=500)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--durbin-unit-lag", action="store_true")
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_grid)

    h = sub.add_parser("heatmap", help="render a grid result as SVG")
    h.add_argument("--in", dest="input", required=True)
    h.add_argument("--metric", choices=METRICS, default="ratio")
    h.add_argument("--out", default="-")
    h.set_defaults(func=cmd_heatmap)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValidationError, OSError) as exc:
        print(f"marec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, MarecError, np.linalg.LinAlgError) as exc:
        print(f"marec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"marec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
