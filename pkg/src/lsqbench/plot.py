"""Dependency-free SVG line charts for sweep results."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .errors import ConfigError

WIDTH, HEIGHT = 640, 420
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 170, 40, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


def _nice_step(span, target=5):
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 2.5, 5, 10):
        if raw <= mult * mag:
            return mult * mag
    return 10 * mag


def _linear_ticks(lo, hi):
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    v = first
    while v <= hi + step * 1e-9:
        ticks.append(0.0 if abs(v) < step * 1e-9 else v)
        v += step
    return ticks


def _padded(lo, hi):
    if lo == hi:
        pad = abs(lo) * 0.1 or 1.0
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def _label(v):
    return f"{v:.6g}"


def render_plot(
    series: Sequence[tuple],
    xlabel: str,
    ylabel: str,
    log_y: bool = False,
    path=None,
    title: Optional[str] = None,
) -> str:
    """Draw one polyline per ``(label, xs, ys)`` series and return the SVG text.

    The output depends only on the arguments, so identical calls give
    byte-identical documents.  When ``path`` is given the SVG is also written
    there.
    """
    if not series:
        raise ConfigError("render_plot needs at least one series")
    for label, xs, ys in series:
        if len(xs) == 0 or len(xs) != len(ys):
            raise ConfigError(f"series {label!r} must be non-empty with equal-length x and y")
        if log_y and any(not y > 0 for y in ys):
            raise ConfigError(f"series {label!r} has non-positive values on a log axis")

    fy = (lambda v: math.log10(v)) if log_y else float
    all_x = [float(x) for _, xs, _ in series for x in xs]
    all_y = [fy(y) for _, _, ys in series for y in ys]
    x_lo, x_hi = _padded(min(all_x), max(all_x))
    if log_y:
        y_lo, y_hi = math.floor(min(all_y)), math.ceil(max(all_y))
        if y_lo == y_hi:
            y_lo, y_hi = y_lo - 1, y_hi + 1
    else:
        y_lo, y_hi = _padded(min(all_y), max(all_y))

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(v):
        return MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v):
        return MARGIN_TOP + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')

    x0, y0 = MARGIN_LEFT, MARGIN_TOP + plot_h
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black"/>')

    for t in _linear_ticks(x_lo, x_hi):
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{y0}" x2="{x:.2f}" y2="{y0 + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{y0 + 18}" text-anchor="middle">{_label(t)}</text>')
    y_ticks = range(int(y_lo), int(y_hi) + 1) if log_y else _linear_ticks(y_lo, y_hi)
    for t in y_ticks:
        y = py(t)
        text = f"1e{int(t)}" if log_y else _label(t)
        out.append(f'<line x1="{x0 - 5}" y1="{y:.2f}" x2="{x0}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<line x1="{x0}" y1="{y:.2f}" x2="{x0 + plot_w}" y2="{y:.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{x0 - 8}" y="{y + 4:.2f}" text-anchor="end">{text}</text>')

    out.append(
        f'<text x="{x0 + plot_w / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    ylab = ylabel + (" (log scale)" if log_y else "")
    cy = MARGIN_TOP + plot_h / 2
    out.append(
        f'<text x="18" y="{cy:.2f}" text-anchor="middle" transform="rotate(-90 18 {cy:.2f})">{escape(ylab)}</text>'
    )

    for i, (label, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = sorted(zip((float(x) for x in xs), (fy(y) for y in ys)))
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        for x, y in pts:
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="{color}"/>')
        ly = MARGIN_TOP + 10 + 20 * i
        lx = WIDTH - MARGIN_RIGHT + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(str(label))}</text>')

    out.append("</svg>")
    doc = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(doc)
    return doc


def xy_series(records, x: str, y: str, where: Optional[dict] = None):
    """Points ``(x, mean y)`` from records matching ``where``, averaged over
    records that share an x value."""
    where = where or {}
    buckets: dict[float, list[float]] = {}
    for rec in records:
        if all(_matches(rec.get(k), v) for k, v in where.items()):
            buckets.setdefault(float(rec.get(x)), []).append(float(rec.get(y)))
    xs = sorted(buckets)
    return xs, [sum(buckets[k]) / len(buckets[k]) for k in xs]


def _matches(value, wanted):
    return math.isclose(float(value), float(wanted), rel_tol=1e-9, abs_tol=0.0)


# (file stem, x column, y column, filter, x label, y label, title)
STANDARD_FIGURES = (
    ("runtime_vs_d_pinv", "d", "time_pinv", {"n": 1000, "cond": 1.0},
     "number of features d", "runtime (s)", "Pseudoinverse runtime vs d (n=1000, cond=1.0)"),
    ("runtime_vs_d_gd", "d", "time_gd", {"n": 1000, "cond": 1.0},
     "number of features d", "runtime (s)", "Gradient descent runtime vs d (n=1000, cond=1.0)"),
    ("runtime_vs_n_pinv", "n", "time_pinv", {"d": 10, "cond": 1.0},
     "number of samples n", "runtime (s)", "Pseudoinverse runtime vs n (d=10, cond=1.0)"),
    ("runtime_vs_n_gd", "n", "time_gd", {"d": 10, "cond": 1.0},
     "number of samples n", "runtime (s)", "Gradient descent runtime vs n (d=10, cond=1.0)"),
    ("mse_vs_d_pinv", "d", "err_pinv", {"n": 1000, "cond": 1.0},
     "number of features d", "MSE", "Pseudoinverse MSE vs d (n=1000, cond=1.0)"),
    ("mse_vs_d_gd", "d", "err_gd", {"n": 1000, "cond": 1.0},
     "number of features d", "MSE", "Gradient descent MSE vs d (n=1000, cond=1.0)"),
    ("iterations_vs_cond_gd", "cond", "iters_gd", {"d": 10},
     "condition factor (sigma_min / sigma_max)", "GD iterations", "Gradient descent iterations vs cond (d=10)"),
)


def standard_figures(records, outdir) -> list[Path]:
    """Write the seven standard sweep plots into ``outdir``; figures whose
    filter matches no record are skipped."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, x, y, where, xlabel, ylabel, title in STANDARD_FIGURES:
        xs, ys = xy_series(records, x, y, where)
        if not xs:
            continue
        path = outdir / f"{stem}.svg"
        render_plot([(y, xs, ys)], xlabel, ylabel, path=path, title=title)
        written.append(path)
    return written
