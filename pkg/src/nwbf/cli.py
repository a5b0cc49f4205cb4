"""Command-line entry point.  Exit codes: 0 pass, 1 fail, 2 configuration or usage error."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import generators
from .analysis import FREQUENCY, TIME, Grid, SampledFunction, fourier, inv_fourier
from .config import load_config
from .errors import ConfigError, NWBFError
from .finite_field import FieldSpec
from .local_field import base_q_digits, k_norm, kappa, u_of_n
from .report import bounds, dumps, run
from .selftest import run_selftest

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _modulus(text: str):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"modulus must be comma-separated integers, got {text!r}") from None


def _add_field_args(parser):
    parser.add_argument("--p", type=int, default=2, help="field characteristic (default 2)")
    parser.add_argument("--c", type=int, default=1, help="extension degree, q = p^c (default 1)")
    parser.add_argument("--modulus", type=_modulus, help="irreducible modulus, low-to-high coefficients, e.g. 1,1,1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nwbf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run every characterization check for a config")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--json", type=Path, help="write the report here instead of stdout")

    p = sub.add_parser("bounds", help="print frame bounds C, D and the ranges as JSON")
    p.add_argument("--config", required=True, type=Path)

    p = sub.add_parser("table", help="tabulate lattice points")
    p.add_argument("what", choices=["u"])
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--format", choices=["text", "csv"], default="text")
    _add_field_args(p)

    p = sub.add_parser("transform", help="transform a cell,re,im function table")
    p.add_argument("--in", dest="inp", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--inverse", action="store_true", help="input is a spectrum; emit the time function")
    p.add_argument("--method", choices=["fast", "naive"], default="fast")
    p.add_argument("--config", type=Path, help="take field and grid from a run config")
    p.add_argument("--M", type=int, default=3)
    p.add_argument("--N", type=int, default=3)
    _add_field_args(p)

    sub.add_parser("selftest", help="run the invariant suites of every module")
    return parser


def _cmd_check(args) -> int:
    report, text = run(load_config(args.config))
    if args.json:
        args.json.write_text(text)
        print(f"{report.status}: report written to {args.json}")
    else:
        sys.stdout.write(text)
    return EXIT_PASS if report.overall else EXIT_FAIL


def _cmd_bounds(args) -> int:
    sys.stdout.write(dumps(bounds(load_config(args.config))))
    return EXIT_PASS


def _u_rows(spec: FieldSpec, count: int):
    for n in range(count):
        digits = base_q_digits(n, spec.q)
        kap = kappa(n, spec.q)
        yield (n, " ".join(map(str, digits)) or "-", k_norm(u_of_n(spec, n))[1],
               "inf" if kap == float("inf") else str(kap))


def _cmd_table(args) -> int:
    if args.count < 0:
        raise ConfigError("--count must be nonnegative")
    spec = FieldSpec(args.p, args.c, args.modulus)
    header = ("n", "digits", "norm", "kappa")
    rows = [(str(n), d, format(norm, "g"), kap) for n, d, norm, kap in _u_rows(spec, args.count)]
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        widths = [max(len(r[i]) for r in [header, *rows]) for i in range(4)]
        print("# digits: indices of the coefficients at p^-1, p^-2, ...")
        for r in [header, *rows]:
            print("  ".join(v.rjust(w) if i != 1 else v.ljust(w) for i, (v, w) in enumerate(zip(r, widths))).rstrip())
    return EXIT_PASS


def _cmd_transform(args) -> int:
    if args.config:
        grid = load_config(args.config).grid
    else:
        grid = Grid(FieldSpec(args.p, args.c, args.modulus), args.M, args.N)
    F = generators.read_spectrum_csv(args.inp, grid)
    if args.inverse:
        out = inv_fourier(F, method=args.method)
    else:
        out = fourier(SampledFunction(grid, TIME, F.values), method=args.method)
    generators.write_function_csv(args.out, out)
    domain = TIME if args.inverse else FREQUENCY
    print(f"wrote {grid.size} {domain} cells to {args.out}")
    return EXIT_PASS


def _cmd_selftest(args) -> int:
    return EXIT_PASS if run_selftest() else EXIT_FAIL


COMMANDS = {"check": _cmd_check, "bounds": _cmd_bounds, "table": _cmd_table,
            "transform": _cmd_transform, "selftest": _cmd_selftest}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        for v in exc.violations:
            print(f"config error: {v}", file=sys.stderr)
        return EXIT_CONFIG
    except NWBFError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
