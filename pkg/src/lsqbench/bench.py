"""Solver benchmark sweep: timing, per-cell records, aggregation and I/O."""

from __future__ import annotations

import csv
import logging
import math
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .datagen import ProblemSpec, make_problem
from .errors import ConfigError, DegenerateInputError, LsqbenchError, ParseError, SchemaError
from .metrics import coef_error, mse
from .solvers import GdConfig, solve_gd, solve_pinv

log = logging.getLogger(__name__)

PAPER_COLUMNS = ("n", "d", "cond", "time_pinv", "err_pinv", "time_gd", "err_gd", "iters_gd")
EXTENSION_COLUMNS = ("coef_err_pinv", "coef_err_gd", "gd_converged")
CSV_COLUMNS = PAPER_COLUMNS + EXTENSION_COLUMNS
NUMERIC_COLUMNS = PAPER_COLUMNS + ("coef_err_pinv", "coef_err_gd")
KEY_COLUMNS = ("n", "d", "cond")
INT_COLUMNS = ("n", "d", "iters_gd")


@dataclass
class BenchRecord:
    n: int
    d: int
    cond: float
    time_pinv: float
    err_pinv: float
    time_gd: float
    err_gd: float
    iters_gd: int
    coef_err_pinv: Optional[float] = None
    coef_err_gd: Optional[float] = None
    gd_converged: Optional[bool] = None
    # set when a solver raised; never written to CSV
    failure: Optional[str] = field(default=None, compare=False)

    def get(self, column: str):
        if column not in CSV_COLUMNS:
            raise ConfigError(f"unknown column {column!r}; expected one of {', '.join(CSV_COLUMNS)}")
        return getattr(self, column)


@dataclass(frozen=True)
class SweepGrid:
    ns: Sequence[int] = (1000, 5000)
    ds: Sequence[int] = (10, 50)
    conds: Sequence[float] = (1.0, 0.001)
    noise_sigma: float = 0.1
    base_seed: int = 0
    repeats: int = 1
    gd: GdConfig = GdConfig()

    def __post_init__(self):
        if not self.ns or not self.ds or not self.conds:
            raise ConfigError("sweep grid lists must be non-empty")
        for n in self.ns:
            for d in self.ds:
                if n < d:
                    raise ConfigError(f"grid pair n={n}, d={d} violates n >= d")
        if self.repeats < 1:
            raise ConfigError(f"repeats must be >= 1, got {self.repeats}")

    def cells(self) -> list[ProblemSpec]:
        """Problem specs in table order: n ascending, d ascending, cond descending."""
        out = []
        for n in sorted(set(self.ns)):
            for d in sorted(set(self.ds)):
                seed = cell_seed(self.base_seed, n, d)
                for cond in sorted(set(self.conds), reverse=True):
                    out.append(ProblemSpec(n=n, d=d, cond=cond, noise_sigma=self.noise_sigma, seed=seed))
        return out


def cell_seed(base_seed: int, n: int, d: int) -> int:
    """Per-(n, d) seed; every cond at the same shape shares the factors and noise."""
    state = np.random.SeedSequence([int(base_seed), int(n), int(d)]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def time_op(work: Callable[[], object], repeats: int = 1, warmup: bool = True):
    """Run ``work`` and return ``(result, seconds)``.

    One untimed warmup call comes first; with ``repeats > 1`` the fastest of
    the timed calls is reported.
    """
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")
    if warmup:
        work()
    best = math.inf
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = work()
        best = min(best, time.perf_counter() - start)
    return result, best


def run_cell(spec: ProblemSpec, gd: GdConfig = GdConfig(), repeats: int = 1) -> BenchRecord:
    problem = make_problem(spec)
    x, y = problem.x, problem.y
    failures = []
    nan = float("nan")

    try:
        fit, t_pinv = time_op(lambda: solve_pinv(x, y), repeats)
        err_pinv, cerr_pinv = mse(x, fit.beta_hat, y), coef_error(fit.beta_hat, problem.beta_star)
    except (LsqbenchError, np.linalg.LinAlgError) as exc:
        failures.append(f"pinv: {exc}")
        t_pinv = err_pinv = cerr_pinv = nan

    try:
        fit, t_gd = time_op(lambda: solve_gd(x, y, gd), repeats)
        err_gd, cerr_gd = mse(x, fit.beta_hat, y), coef_error(fit.beta_hat, problem.beta_star)
        iters, converged = fit.iterations, fit.converged
    except (LsqbenchError, np.linalg.LinAlgError) as exc:
        failures.append(f"gd: {exc}")
        t_gd = err_gd = cerr_gd = nan
        iters, converged = 0, False

    failure = "; ".join(failures) or None
    if failure:
        log.warning("cell n=%d d=%d cond=%g failed: %s", spec.n, spec.d, spec.cond, failure)
    return BenchRecord(
        n=spec.n,
        d=spec.d,
        cond=spec.cond,
        time_pinv=t_pinv,
        err_pinv=err_pinv,
        time_gd=t_gd,
        err_gd=err_gd,
        iters_gd=iters,
        coef_err_pinv=cerr_pinv,
        coef_err_gd=cerr_gd,
        gd_converged=converged,
        failure=failure,
    )


def run_sweep(grid: SweepGrid = SweepGrid(), progress: Optional[Callable[[BenchRecord], None]] = None) -> list[BenchRecord]:
    """Run every grid cell serially so the timings do not disturb each other."""
    records = []
    for spec in grid.cells():
        rec = run_cell(spec, grid.gd, grid.repeats)
        records.append(rec)
        if progress is not None:
            progress(rec)
    return records


# -- aggregation ------------------------------------------------------------


@dataclass(frozen=True)
class StatsSummary:
    count: float
    mean: float
    std: float
    min: float
    q25: float
    median: float
    q75: float
    max: float
    # False when std is reported as 0 only because there was a single value
    std_defined: bool = True

    STAT_NAMES = ("count", "mean", "std", "min", "q25", "median", "q75", "max")

    def as_row(self) -> tuple:
        return tuple(getattr(self, name) for name in self.STAT_NAMES)


def summarize(values: Iterable[float]) -> StatsSummary:
    """Count, mean, sample std (n-1 divisor), extremes and linear-interpolated quartiles."""
    data = [float(v) for v in values]
    if not data:
        raise DegenerateInputError("cannot summarize an empty column")
    q25, median, q75 = np.quantile(data, [0.25, 0.5, 0.75], method="linear")
    single = len(data) == 1
    return StatsSummary(
        count=float(len(data)),
        mean=statistics.fmean(data),
        std=0.0 if single else statistics.stdev(data),
        min=min(data),
        q25=float(q25),
        median=float(median),
        q75=float(q75),
        max=max(data),
        std_defined=not single,
    )


def _check_columns(columns):
    for col in columns:
        if col not in CSV_COLUMNS:
            raise ConfigError(f"unknown column {col!r}; expected one of {', '.join(CSV_COLUMNS)}")


def describe(records: Sequence[BenchRecord], columns: Sequence[str] = PAPER_COLUMNS) -> dict[str, StatsSummary]:
    if not records:
        raise DegenerateInputError("describe needs at least one record")
    _check_columns(columns)
    out = {}
    for col in columns:
        values = [r.get(col) for r in records]
        values = [float(v) for v in values if v is not None]
        if values:
            out[col] = summarize(values)
    return out


def group_means(
    records: Sequence[BenchRecord],
    keys: Sequence[str],
    value_columns: Sequence[str],
) -> list[dict]:
    """Mean of each value column per key combination, sorted by keys ascending.

    Each row is a dict holding the key values followed by the means.
    """
    if not keys:
        raise ConfigError("group_means needs at least one key")
    for key in keys:
        if key not in KEY_COLUMNS:
            raise ConfigError(f"cannot group by {key!r}; keys must come from {KEY_COLUMNS}")
    _check_columns(value_columns)
    groups: dict[tuple, list[BenchRecord]] = {}
    for rec in records:
        groups.setdefault(tuple(rec.get(k) for k in keys), []).append(rec)
    rows = []
    for key_values in sorted(groups):
        members = groups[key_values]
        row = dict(zip(keys, key_values))
        for col in value_columns:
            vals = [float(m.get(col)) for m in members if m.get(col) is not None]
            row[col] = statistics.fmean(vals) if vals else None
        rows.append(row)
    return rows


# -- CSV ----------------------------------------------------------------------


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_records_csv(records: Iterable[BenchRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow([format_cell(rec.get(col)) for col in CSV_COLUMNS])


def _parse_bool(text, line, column):
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise ParseError(f"expected a boolean, got {text!r}", line=line, column=column)


def _parse_number(text, line, column, integer):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"expected a number, got {text!r}", line=line, column=column) from None
    if integer:
        if value != int(value):
            raise ParseError(f"expected an integer, got {text!r}", line=line, column=column)
        return int(value)
    return value


def read_records_csv(path) -> list[BenchRecord]:
    """Inverse of :func:`write_records_csv`.

    The extension columns are optional so a file holding only the eight
    table columns parses too.  Blank lines and ``#`` comments are skipped.
    """
    with open(path, newline="") as fh:
        lines = list(enumerate(fh, start=1))
    content = [(no, text) for no, text in lines if text.strip() and not text.lstrip().startswith("#")]
    if not content:
        raise SchemaError(f"{path}: no header line")
    rows = list(csv.reader([text for _, text in content]))
    header = [h.strip() for h in rows[0]]
    missing = [c for c in PAPER_COLUMNS if c not in header]
    if missing:
        raise SchemaError(f"{path}: missing required columns {', '.join(missing)}")
    unknown = [c for c in header if c not in CSV_COLUMNS]
    if unknown:
        raise SchemaError(f"{path}: unknown columns {', '.join(unknown)}")

    records = []
    for (line_no, _), row in zip(content[1:], rows[1:]):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(row)}", line=line_no)
        values = {}
        for col, text in zip(header, row):
            text = text.strip()
            if col in EXTENSION_COLUMNS and text == "":
                values[col] = None
            elif col == "gd_converged":
                values[col] = _parse_bool(text, line_no, col)
            else:
                values[col] = _parse_number(text, line_no, col, col in INT_COLUMNS)
        records.append(BenchRecord(**values))
    return records


def fixture_path() -> Path:
    """Path of the bundled CSV holding the published synthetic-experiment table."""
    return Path(__file__).with_name("data") / "table1.csv"


def load_fixture() -> list[BenchRecord]:
    return read_records_csv(fixture_path())


# -- Markdown -----------------------------------------------------------------

_RECORD_DECIMALS = {"n": 0, "d": 0, "cond": 3, "iters_gd": 0}
_STATS_DECIMALS = {"n": 1, "d": 1, "cond": 4, "iters_gd": 1}
_STAT_LABELS = {"q25": "25%", "median": "50%", "q75": "75%"}


def _decimals(table, column):
    return table.get(column, 5)


def _fmt(value, places):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return f"{float(value):.{places}f}"


def _markdown(header, rows, right_from=0):
    align = ["---:" if i >= right_from else ":---" for i in range(len(header))]
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join(align) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def records_markdown(records: Sequence[BenchRecord], columns: Sequence[str] = PAPER_COLUMNS) -> str:
    _check_columns(columns)
    rows = [[_fmt(r.get(c), _decimals(_RECORD_DECIMALS, c)) for c in columns] for r in records]
    return _markdown(list(columns), rows)


def describe_markdown(summary: dict[str, StatsSummary]) -> str:
    header = ["Statistic"] + list(summary)
    rows = []
    for i, stat in enumerate(StatsSummary.STAT_NAMES):
        row = [_STAT_LABELS.get(stat, stat)]
        for col, s in summary.items():
            row.append(_fmt(s.as_row()[i], _decimals(_STATS_DECIMALS, col)))
        rows.append(row)
    return _markdown(header, rows, right_from=1)


def grouped_markdown(rows: Sequence[dict]) -> str:
    if not rows:
        return ""
    header = list(rows[0])
    body = [[_fmt(row[c], _decimals(_RECORD_DECIMALS, c)) for c in header] for row in rows]
    return _markdown(header, body)


def describe_csv_rows(summary: dict[str, StatsSummary]) -> list[list[str]]:
    out = [["statistic"] + list(summary)]
    for i, stat in enumerate(StatsSummary.STAT_NAMES):
        out.append([stat] + [format(s.as_row()[i], ".17g") for s in summary.values()])
    return out


def grouped_csv_rows(rows: Sequence[dict]) -> list[list[str]]:
    if not rows:
        return []
    header = list(rows[0])
    return [header] + [[format_cell(row[c]) for c in header] for row in rows]
