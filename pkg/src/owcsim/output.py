"""Result tables, deterministic CSV emission, and standalone SVG line plots.

Plots are rendered directly from the same table object that the CSV writer
serialises, so every plot is a view of emitted data, never a recomputation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

CSV_HEADER = "sweep_var,variant,sum_rate_bps,user_rates_bps"

_PALETTE = ("#0072b2", "#d55e00", "#009e73", "#cc79a7", "#56b4e9", "#e69f00")

_PLOT_WIDTH = 720.0
_PLOT_HEIGHT = 480.0
_MARGIN_LEFT = 90.0
_MARGIN_RIGHT = 150.0
_MARGIN_TOP = 42.0
_MARGIN_BOTTOM = 58.0


@dataclass(frozen=True)
class ResultRow:
    """One sweep point for one variant, with the per-user rate breakdown."""

    sweep_var: float
    variant: str
    sum_rate_bps: float
    user_rates_bps: tuple[float, ...]

    def __post_init__(self) -> None:
        if not math.isfinite(self.sum_rate_bps) or self.sum_rate_bps < 0.0:
            raise ValueError(f"sum_rate_bps must be finite and nonnegative, got {self.sum_rate_bps}")
        for rate in self.user_rates_bps:
            if not math.isfinite(rate) or rate < 0.0:
                raise ValueError(f"user rate must be finite and nonnegative, got {rate}")


@dataclass(frozen=True)
class ResultTable:
    """Rows sorted by (variant, sweep_var); constructed via from_rows."""

    rows: tuple[ResultRow, ...]

    @classmethod
    def from_rows(cls, rows: Iterable[ResultRow]) -> "ResultTable":
        ordered = tuple(sorted(rows, key=lambda r: (r.variant, r.sweep_var)))
        return cls(ordered)

    def variants(self) -> tuple[str, ...]:
        seen: list[str] = []
        for row in self.rows:
            if row.variant not in seen:
                seen.append(row.variant)
        return tuple(seen)

    def series(self, variant: str) -> tuple[tuple[float, float], ...]:
        return tuple(
            (row.sweep_var, row.sum_rate_bps) for row in self.rows if row.variant == variant
        )


def format_rate(value: float) -> str:
    return f"{value:.9e}"


def write_csv(table: ResultTable, path: str | Path) -> None:
    """Emit the table as UTF-8 CSV with LF endings, byte-deterministic."""
    lines = [CSV_HEADER]
    for row in table.rows:
        rates = ";".join(format_rate(r) for r in row.user_rates_bps)
        lines.append(
            f"{row.sweep_var:.10g},{row.variant},{format_rate(row.sum_rate_bps)},{rates}"
        )
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def read_result_csv(path: str | Path) -> ResultTable:
    """Parse a CSV produced by write_csv back into a ResultTable."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.split("\n") if line]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected CSV header in {path}")
    rows = []
    for line in lines[1:]:
        sweep_var, variant, sum_rate, rates = line.split(",")
        user_rates = tuple(float(r) for r in rates.split(";")) if rates else ()
        rows.append(ResultRow(float(sweep_var), variant, float(sum_rate), user_rates))
    return ResultTable.from_rows(rows)


def render_line_plot(
    table: ResultTable,
    title: str,
    x_label: str,
    y_label: str,
    path: str | Path,
) -> None:
    """Write a standalone SVG line chart of sum rate per variant."""
    if not table.rows:
        raise ValueError("cannot plot an empty table")
    xs = [row.sweep_var for row in table.rows]
    ys = [row.sum_rate_bps for row in table.rows]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = 0.0, max(ys)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    inner_w = _PLOT_WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    inner_h = _PLOT_HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def to_px(x: float, y: float) -> tuple[float, float]:
        px = _MARGIN_LEFT + (x - x_lo) / x_span * inner_w
        py = _MARGIN_TOP + inner_h - (y - y_lo) / y_span * inner_h
        return px, py

    parts: list[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_PLOT_WIDTH:.0f}" '
        f'height="{_PLOT_HEIGHT:.0f}" viewBox="0 0 {_PLOT_WIDTH:.0f} {_PLOT_HEIGHT:.0f}">'
    )
    parts.append('<rect width="100%" height="100%" fill="white"/>')
    parts.append(
        f'<text x="{_PLOT_WIDTH / 2:.2f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>'
    )

    axis_color = "#333333"
    x0, y0 = _MARGIN_LEFT, _MARGIN_TOP + inner_h
    parts.append(
        f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0 + inner_w:.2f}" y2="{y0:.2f}" '
        f'stroke="{axis_color}" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0:.2f}" y2="{_MARGIN_TOP:.2f}" '
        f'stroke="{axis_color}" stroke-width="1"/>'
    )

    n_ticks = 6
    for i in range(n_ticks):
        frac = i / (n_ticks - 1)
        x_val = x_lo + frac * x_span
        px, _ = to_px(x_val, y_lo)
        parts.append(
            f'<line x1="{px:.2f}" y1="{y0:.2f}" x2="{px:.2f}" y2="{y0 + 5:.2f}" '
            f'stroke="{axis_color}" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{y0 + 20:.2f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{x_val:.4g}</text>'
        )
        y_val = y_lo + frac * y_span
        _, py = to_px(x_lo, y_val)
        parts.append(
            f'<line x1="{x0 - 5:.2f}" y1="{py:.2f}" x2="{x0:.2f}" y2="{py:.2f}" '
            f'stroke="{axis_color}" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x0 - 8:.2f}" y="{py + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{y_val:.3g}</text>'
        )

    parts.append(
        f'<text x="{x0 + inner_w / 2:.2f}" y="{_PLOT_HEIGHT - 14:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{x_label}</text>'
    )
    parts.append(
        f'<text x="20" y="{_MARGIN_TOP + inner_h / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 20 {_MARGIN_TOP + inner_h / 2:.2f})">{y_label}</text>'
    )

    for idx, variant in enumerate(table.variants()):
        color = _PALETTE[idx % len(_PALETTE)]
        points = table.series(variant)
        coords = " ".join(
            "{:.2f},{:.2f}".format(*to_px(x, y)) for x, y in points
        )
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        for x, y in points:
            px, py = to_px(x, y)
            parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="{color}"/>')
        legend_y = _MARGIN_TOP + 16 + 20 * idx
        legend_x = _MARGIN_LEFT + inner_w + 14
        parts.append(
            f'<line x1="{legend_x:.2f}" y1="{legend_y:.2f}" x2="{legend_x + 24:.2f}" '
            f'y2="{legend_y:.2f}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{legend_x + 30:.2f}" y="{legend_y + 4:.2f}" '
            f'font-family="sans-serif" font-size="12">{variant}</text>'
        )

    parts.append("</svg>")
    Path(path).write_bytes(("\n".join(parts) + "\n").encode("utf-8"))
