"""``lsqbench`` command line interface.

Exit status is 0 on success, 1 for usage errors (help goes to stderr) and 2
for data or numerical errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings

import numpy as np

from . import bench, plot
from .datagen import ProblemSpec, make_problem
from .dataset import load_csv_dataset
from .errors import LsqbenchError
from .metrics import mse
from .solvers import GdConfig, solve_gd, solve_normal_equations, solve_pinv

COND_HELP = (
    "condition factor sigma_min/sigma_max of X, in (0, 1]; "
    "1.0 is perfectly conditioned, lower values are worse"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _add_problem_flags(p, multi=False):
    nargs = "+" if multi else None
    p.add_argument("--n", type=int, nargs=nargs, default=[1000, 5000] if multi else 1000, help="sample count")
    p.add_argument("--d", type=int, nargs=nargs, default=[10, 50] if multi else 10, help="feature count")
    p.add_argument("--cond", type=float, nargs=nargs, default=[1.0, 0.001] if multi else 1.0, help=COND_HELP)
    p.add_argument("--noise", type=float, default=0.1, help="noise standard deviation (default 0.1)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")


def _add_gd_flags(p):
    p.add_argument("--alpha", type=float, default=0.01, help="GD learning rate (default 0.01)")
    p.add_argument("--tol", type=float, default=1e-6, help="GD stop threshold on ||beta change||_2 (default 1e-6)")
    p.add_argument("--max-iter", type=int, default=10_000, help="GD iteration cap (default 10000)")
    p.add_argument("--unnormalized", action="store_true", help="use the raw 2 X^T(X beta - y) gradient without 1/n")


def _gd_config(args):
    return GdConfig(alpha=args.alpha, tol=args.tol, max_iter=args.max_iter, normalized=not args.unnormalized)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="lsqbench",
        description="Compare pseudoinverse and gradient-descent least squares solvers.",
        epilog="cond convention: " + COND_HELP + ".",
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("generate", help="write a synthetic problem as CSV")
    _add_problem_flags(p)
    p.add_argument("--out", help="output CSV path (default: stdout)")

    p = sub.add_parser("solve", help="fit one dataset (CSV or synthetic)")
    p.add_argument("--csv", help="numeric CSV with a header line; omit to solve a synthetic problem")
    p.add_argument("--target", default="y", help="target column in --csv (default y)")
    p.add_argument("--method", choices=("pinv", "normal", "gd"), default="pinv")
    p.add_argument("--standardize", action="store_true", help="z-score each feature column before fitting")
    _add_problem_flags(p)
    _add_gd_flags(p)
    p.add_argument("--out", help="also write the report to this file")

    p = sub.add_parser("sweep", help="run the (n, d, cond) benchmark grid")
    _add_problem_flags(p, multi=True)
    _add_gd_flags(p)
    p.add_argument("--repeats", type=int, default=1, help="timed repetitions per cell, minimum reported")
    p.add_argument("--out", default="results.csv", help="records CSV path (default results.csv)")
    p.add_argument("--format", choices=("csv", "markdown"), default="csv", help="stdout format")

    p = sub.add_parser("report", help="tabulate, describe or group a records CSV")
    p.add_argument("--in", dest="inp", required=True, help="records CSV")
    p.add_argument("--describe", action="store_true", help="descriptive statistics per column")
    p.add_argument("--group", help="comma-separated grouping keys from n,d,cond")
    p.add_argument("--y", help="comma-separated value columns for --group")
    p.add_argument("--format", choices=("csv", "markdown"), default="markdown")
    p.add_argument("--out", help="write the report to this file as well")

    p = sub.add_parser("plot", help="render SVG plots from a records CSV")
    p.add_argument("--in", dest="inp", required=True, help="records CSV")
    p.add_argument("--x", help="x column; omit --x/--y to write the standard figure set")
    p.add_argument("--y", help="comma-separated y columns, one line each")
    p.add_argument("--filter", action="append", default=[], help="keep records with COL=VALUE (repeatable, comma list)")
    p.add_argument("--out", help="SVG path, or output directory for the standard set (default figures/)")
    return parser


def _emit(text, out_path, stdout):
    stdout.write(text)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)


def _csv_text(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_generate(args, stdout):
    spec = ProblemSpec(n=args.n, d=args.d, cond=args.cond, noise_sigma=args.noise, seed=args.seed)
    prob = make_problem(spec)
    lines = [
        "# beta_star: " + ",".join(format(b, ".17g") for b in prob.beta_star),
        f"# spec: n={spec.n} d={spec.d} cond={spec.cond!r} noise_sigma={spec.noise_sigma!r} seed={spec.seed}",
    ]
    rows = [[f"x_{j + 1}" for j in range(spec.d)] + ["y"]]
    rows += [[format(v, ".17g") for v in xr] + [format(yv, ".17g")] for xr, yv in zip(prob.x, prob.y)]
    text = "\n".join(lines) + "\n" + _csv_text(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def cmd_solve(args, stdout):
    if args.csv:
        data = load_csv_dataset(args.csv, args.target, args.standardize)
        x, y, names = data.x, data.y, data.feature_names
    else:
        prob = make_problem(ProblemSpec(n=args.n, d=args.d, cond=args.cond, noise_sigma=args.noise, seed=args.seed))
        x, y = prob.x, prob.y
        names = [f"x_{j + 1}" for j in range(x.shape[1])]

    if args.method == "pinv":
        fit = solve_pinv(x, y)
    elif args.method == "normal":
        fit = solve_normal_equations(x, y)
    else:
        fit = solve_gd(x, y, _gd_config(args))

    lines = [
        f"method: {fit.method}",
        f"mse: {mse(x, fit.beta_hat, y):.10g}",
        f"wall_seconds: {fit.wall_seconds:.6g}",
        f"iterations: {fit.iterations}",
        f"converged: {str(fit.converged).lower()}",
        "beta_hat:",
    ]
    lines += [f"  {name}: {b:.10g}" for name, b in zip(names, fit.beta_hat)]
    _emit("\n".join(lines) + "\n", args.out, stdout)
    return 0


def cmd_sweep(args, stdout):
    grid = bench.SweepGrid(
        ns=args.n, ds=args.d, conds=args.cond, noise_sigma=args.noise,
        base_seed=args.seed, repeats=args.repeats, gd=_gd_config(args),
    )
    records = bench.run_sweep(grid)
    bench.write_records_csv(records, args.out)
    if args.format == "markdown":
        stdout.write(bench.records_markdown(records, bench.CSV_COLUMNS))
    else:
        stdout.write(f"wrote {len(records)} records to {args.out}\n")
    return 0


def _split(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def cmd_report(args, stdout):
    records = bench.read_records_csv(args.inp)
    md = args.format == "markdown"
    parts = []
    if args.describe:
        summary = bench.describe(records)
        parts.append(bench.describe_markdown(summary) if md else _csv_text(bench.describe_csv_rows(summary)))
    if args.group:
        cols = _split(args.y) if args.y else ["time_pinv", "time_gd", "err_pinv", "err_gd"]
        rows = bench.group_means(records, _split(args.group), cols)
        parts.append(bench.grouped_markdown(rows) if md else _csv_text(bench.grouped_csv_rows(rows)))
    if not parts:
        if md:
            parts.append(bench.records_markdown(records))
        else:
            parts.append(_csv_text([bench.PAPER_COLUMNS] + [[bench.format_cell(r.get(c)) for c in bench.PAPER_COLUMNS] for r in records]))
    _emit("\n".join(parts), args.out, stdout)
    return 0


def _parse_filters(items):
    where = {}
    for item in items:
        for clause in _split(item):
            key, sep, value = clause.partition("=")
            if not sep:
                raise UsageError(f"--filter expects COL=VALUE, got {clause!r}")
            try:
                where[key.strip()] = float(value)
            except ValueError:
                raise UsageError(f"--filter value for {key!r} must be numeric, got {value!r}") from None
    return where


def cmd_plot(args, stdout):
    records = bench.read_records_csv(args.inp)
    where = _parse_filters(args.filter)
    if args.x is None and args.y is None:
        kept = [r for r in records if all(plot._matches(r.get(k), v) for k, v in where.items())]
        paths = plot.standard_figures(kept, args.out or "figures")
        for path in paths:
            stdout.write(f"wrote {path}\n")
        return 0
    if args.x is None or args.y is None:
        raise UsageError("plot needs both --x and --y (or neither for the standard set)")
    series = []
    for col in _split(args.y):
        xs, ys = plot.xy_series(records, args.x, col, where)
        if xs:
            series.append((col, xs, ys))
    if not series:
        raise LsqbenchError("no records match the filter")
    out = args.out or "plot.svg"
    plot.render_plot(series, args.x, ", ".join(_split(args.y)), path=out)
    stdout.write(f"wrote {out}\n")
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "report": cmd_report,
    "plot": cmd_plot,
}


def dispatch(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        print(exc, file=stderr)
        return 1
    except (LsqbenchError, OSError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"lsqbench: error: {exc}", file=stderr)
        return 2


def main(argv=None) -> int:
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        return dispatch(argv)


def entry_point():
    sys.exit(main())
