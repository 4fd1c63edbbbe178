"""Command-line interface.

Subcommands: ``points``, ``covering``, ``table``, ``tradeoff``, ``simulate``.
Exit status is 0 on success, 2 for invalid input, 3 when ``simulate``
detects a cap violation or an inexact reconstruction.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import export
from .errors import RspCoverError
from .pointsets import SOLIDS, berry_grid, platonic, spiral_points
from .protocol import simulate
from .tradeoff import (
    baseline_table,
    build_table,
    r2_grid,
    tradeoff_curve,
)
from .voronoi import covering_radius, covering_radius_sampled

EXIT_INVALID = 2
EXIT_VERIFY = 3
MAX_TABLE_N = 4096
RECONSTRUCTION_TOL = 1e-9


def _add_source(p: argparse.ArgumentParser, algos=("spiral", "berry-grid", "platonic")) -> None:
    p.add_argument("--algo", choices=algos, required=True, help="point generator")
    p.add_argument("--n", type=int, help="number of spiral points")
    p.add_argument("--d", type=int, help="box-grid resolution (d**3 triples)")
    p.add_argument("--dedup", action="store_true", help="merge coincident box-grid points")
    p.add_argument("--solid", choices=SOLIDS, help="Platonic solid")


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, help="output file (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rspcover",
        description="Bloch-sphere coverings and the cbits/ebits trade-off for "
        "remote preparation of a pure qubit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("points", help="write a point set as CSV")
    _add_source(p)
    _add_out(p)

    p = sub.add_parser("covering", help="covering radius of one point set (JSON)")
    _add_source(p)
    p.add_argument("--method", choices=("exact", "sample"), default="exact")
    p.add_argument("--samples", type=int, default=2_000_000)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)

    p = sub.add_parser("table", help="covering radius for every size in a range (CSV)")
    p.add_argument("--algo", choices=("spiral", "berry-grid"), required=True)
    p.add_argument("--n-min", type=int, default=2, help="first size (grid resolution for berry-grid)")
    p.add_argument("--n-max", type=int, default=1024, help="last size (grid resolution for berry-grid)")
    p.add_argument("--workers", type=int, default=1)
    _add_out(p)

    p = sub.add_parser("tradeoff", help="cbits versus ebits curve (CSV)")
    p.add_argument("--table", type=Path, help="covering table CSV written by `table`")
    p.add_argument("--algo", choices=("spiral",), default="spiral")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=1024)
    p.add_argument("--r2-min", type=float, default=0.0025)
    p.add_argument("--r2-max", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--compare", action="store_true", help="add box-grid baseline columns")
    p.add_argument("--d-max", type=int, default=64, help="largest baseline grid resolution")
    p.add_argument("--workers", type=int, default=1)
    _add_out(p)

    p = sub.add_parser("simulate", help="end-to-end protocol check (JSON)")
    _add_source(p)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    _add_out(p)
    return parser


def _point_source(parser, args):
    if args.algo == "spiral":
        if args.n is None:
            parser.error("--n is required with --algo spiral")
        if args.n < 2:
            parser.error(f"--n must be >= 2, got {args.n}")
        return spiral_points(args.n)
    if args.algo == "berry-grid":
        if args.d is None:
            parser.error("--d is required with --algo berry-grid")
        if args.d < 1:
            parser.error(f"--d must be >= 1, got {args.d}")
        return berry_grid(args.d, dedup=args.dedup)
    if args.solid is None:
        parser.error("--solid is required with --algo platonic")
    return platonic(args.solid)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8", newline="")


def _check_range(parser, n_min: int, n_max: int) -> None:
    if n_min < 2:
        parser.error(f"--n-min must be >= 2, got {n_min}")
    if n_max < n_min:
        parser.error(f"--n-max must be >= --n-min, got {n_max} < {n_min}")
    if n_max > MAX_TABLE_N:
        parser.error(f"--n-max must be <= {MAX_TABLE_N}, got {n_max}")


def cmd_points(parser, args) -> int:
    _emit(export.points_csv(_point_source(parser, args)), args.out)
    return 0


def cmd_covering(parser, args) -> int:
    ps = _point_source(parser, args)
    if args.method == "sample":
        if args.samples < 1:
            parser.error(f"--samples must be >= 1, got {args.samples}")
        res = covering_radius_sampled(ps, args.samples, args.seed)
    else:
        res = covering_radius(ps)
    record = {"n": len(ps), "label": ps.label, **res.as_dict()}
    _emit(export.json_record(record), args.out)
    return 0


def cmd_table(parser, args) -> int:
    _check_range(parser, args.n_min, args.n_max)
    if args.workers < 1:
        parser.error(f"--workers must be >= 1, got {args.workers}")
    table = build_table(args.algo, args.n_min, args.n_max, workers=args.workers)
    _emit(export.table_csv(table), args.out)
    return 0


def cmd_tradeoff(parser, args) -> int:
    if args.steps < 1:
        parser.error(f"--steps must be >= 1, got {args.steps}")
    if not 0.0 < args.r2_min <= 0.5:
        parser.error(f"--r2-min must lie in (0, 0.5], got {args.r2_min}")
    if not args.r2_min <= args.r2_max <= 0.5:
        parser.error(f"--r2-max must lie in [--r2-min, 0.5], got {args.r2_max}")
    if args.d_max < 2:
        parser.error(f"--d-max must be >= 2, got {args.d_max}")
    if args.table is not None:
        try:
            text = args.table.read_text(encoding="utf-8")
        except OSError as exc:
            parser.error(f"--table: cannot read {args.table}: {exc.strerror}")
        table = export.read_table_csv(text, label=str(args.table))
    else:
        _check_range(parser, args.n_min, args.n_max)
        table = build_table(args.algo, args.n_min, args.n_max, workers=args.workers)
    grid = r2_grid(args.r2_min, args.r2_max, args.steps)
    curve = tradeoff_curve(table, grid)
    baseline = None
    if args.compare:
        baseline = tradeoff_curve(baseline_table(float(grid[0]), args.d_max), grid)
    for r2 in curve.uncovered:
        print(f"warning: no tabulated point set covers r^2={r2:.9g}", file=sys.stderr)
    if baseline is not None:
        for r2 in baseline.uncovered:
            print(f"warning: baseline grid does not cover r^2={r2:.9g}", file=sys.stderr)
    _emit(export.tradeoff_csv(curve, grid, baseline), args.out)
    return 0


def cmd_simulate(parser, args) -> int:
    if args.trials < 1:
        parser.error(f"--trials must be >= 1, got {args.trials}")
    ps = _point_source(parser, args)
    report = simulate(ps, args.trials, args.seed)
    _emit(export.json_record({"label": ps.label, **report.as_dict()}), args.out)
    ok = report.all_within_cap and report.reconstruction_max_error <= RECONSTRUCTION_TOL
    return 0 if ok else EXIT_VERIFY


COMMANDS = {
    "points": cmd_points,
    "covering": cmd_covering,
    "table": cmd_table,
    "tradeoff": cmd_tradeoff,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](parser, args)
    except (RspCoverError, ValueError) as exc:
        print(f"rspcover {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
