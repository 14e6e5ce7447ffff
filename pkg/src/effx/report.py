"""Serializable report tables with fixed display rounding.

Numeric cells round half away from zero to a per-column decimal spec
(2 places for efficiency scores, 3 for regression coefficients); internal
values stay full precision. Rendering is deterministic byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .dataset import SummaryStats
from .dea import FrontierReport
from .tobit import InferenceReport

__all__ = [
    "ReportTable",
    "frontier_table",
    "regression_table",
    "render_table",
    "round_half_away",
    "summary_table",
]


def round_half_away(value: float, decimals: int) -> float:
    """Round on the shortest decimal representation, ties away from zero."""
    quantum = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ReportTable:
    """Rectangular table: headers, typed rows, per-column decimal spec."""

    title: str
    headers: tuple[str, ...]
    rows: tuple[tuple, ...]
    decimals: tuple[int | None, ...]
    footnotes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "headers", tuple(self.headers))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        object.__setattr__(self, "decimals", tuple(self.decimals))
        object.__setattr__(self, "footnotes", tuple(self.footnotes))
        if len(self.decimals) != len(self.headers):
            raise ValueError("one decimal spec required per column")
        for row in self.rows:
            if len(row) != len(self.headers):
                raise ValueError("ragged row in report table")


def _cell_value(value, decimals: int | None):
    if value is None:
        return ""
    if decimals is not None and isinstance(value, (int, float)):
        return round_half_away(float(value), decimals)
    return value


def _cell_text(value, decimals: int | None) -> str:
    if value is None:
        return ""
    if decimals is not None and isinstance(value, (int, float)):
        return f"{round_half_away(float(value), decimals):.{decimals}f}"
    return str(value)


def render_table(table: ReportTable, fmt: str) -> str:
    """Render to 'csv' or 'json' text; identical inputs give identical bytes."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.headers)
        for row in table.rows:
            writer.writerow([_cell_text(v, d) for v, d in zip(row, table.decimals)])
        for note in table.footnotes:
            buf.write(f"# {note}\n")
        return buf.getvalue()
    if fmt == "json":
        payload = {
            "title": table.title,
            "rows": [
                {h: _cell_value(v, d) for h, v, d in zip(table.headers, row, table.decimals)}
                for row in table.rows
            ],
            "footnotes": list(table.footnotes),
        }
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def frontier_table(report: FrontierReport, rts: str = "both") -> ReportTable:
    """Per-unit efficiency table; columns follow the rts selection."""
    if rts == "crs":
        headers = ("id", "ote")
        decimals: tuple[int | None, ...] = (None, 2)
        rows = tuple((r.dmu_id, r.ote) for r in report.results)
    elif rts == "vrs":
        headers = ("id", "pte")
        decimals = (None, 2)
        rows = tuple((r.dmu_id, r.pte) for r in report.results)
    else:
        headers = ("id", "ote", "pte", "se", "rts")
        decimals = (None, 2, 2, 2, None)
        rows = tuple(
            (r.dmu_id, r.ote, r.pte, r.se, r.rts.value) for r in report.results
        )
    return ReportTable(
        title="efficiency frontier",
        headers=headers,
        rows=rows,
        decimals=decimals,
        footnotes=(
            f"efficient units: crs={report.efficient_crs} vrs={report.efficient_vrs}",
            f"mean scores: ote={report.mean_ote:.4f} pte={report.mean_pte:.4f}",
        ),
    )


def summary_table(stats: SummaryStats) -> ReportTable:
    headers = ("variable", "min", "q1", "median", "mean", "q3", "max", "stdev")
    rows = tuple(
        (c.name, c.minimum, c.q1, c.median, c.mean, c.q3, c.maximum, c.stdev)
        for c in stats.columns
    )
    notes = () if stats.stdev_defined else ("single-row dataset: stdev reported as 0",)
    return ReportTable(
        title="summary statistics",
        headers=headers,
        rows=rows,
        decimals=(None,) + (1,) * 7,
        footnotes=notes,
    )


def regression_table(reports: dict[str, InferenceReport]) -> ReportTable:
    """Censored-regression results, one column group per response.

    Rows cover every coefficient (estimate, robust SE, z, p, stars,
    average marginal effect), then the whole-model statistics.
    """
    labels = list(reports)
    first = reports[labels[0]]
    headers = ["variable"]
    for label in labels:
        headers += [
            f"estimate_{label}",
            f"robust_se_{label}",
            f"z_{label}",
            f"p_{label}",
            f"stars_{label}",
            f"marginal_effect_{label}",
        ]
    decimals: list[int | None] = [None]
    for _ in labels:
        decimals += [3, 3, 3, 3, None, 3]

    rows: list[tuple] = []
    for i, name in enumerate(first.names):
        row: list = [name]
        for label in labels:
            rep = reports[label]
            row += [
                rep.estimates[i],
                rep.robust_se[i],
                rep.z_stats[i],
                rep.p_values[i],
                rep.stars[i],
                rep.marginal_effects[i],
            ]
        rows.append(tuple(row))

    def stat_row(name: str, values: list) -> tuple:
        row: list = [name]
        for v in values:
            row += [v, None, None, None, None, None]
        return tuple(row)

    rows.append(stat_row("observations", [float(reports[la].n_obs) for la in labels]))
    rows.append(stat_row("log_likelihood", [reports[la].loglik for la in labels]))
    rows.append(
        stat_row(
            f"wald_stat_df{first.wald.df}",
            [reports[la].wald.stat for la in labels],
        )
    )
    rows.append(stat_row("wald_p", [reports[la].wald.p_value for la in labels]))
    rows.append(stat_row("lr_stat", [reports[la].lr.stat for la in labels]))
    rows.append(stat_row("lr_p", [reports[la].lr.p_value for la in labels]))
    rows.append(stat_row("pseudo_r2", [reports[la].pseudo_r2.value for la in labels]))
    rows.append(stat_row("sigma", [reports[la].sigma for la in labels]))

    variants = ", ".join(f"{la}: {reports[la].pseudo_r2.variant}" for la in labels)
    return ReportTable(
        title="censored regression",
        headers=tuple(headers),
        rows=tuple(rows),
        decimals=tuple(decimals),
        footnotes=(
            "* p < 0.1; ** p < 0.05; *** p < 0.01 (robust z tests)",
            f"pseudo_r2 variant: {variants}",
        ),
    )
