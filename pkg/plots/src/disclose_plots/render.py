"""Deterministic figure rendering.

Each figure kind extracts (x, y) series from the CSV without any
aggregation or rescaling, so the plotted arrays equal the file's values
exactly and can be diffed structurally. Styling is pinned (size, dpi,
color order) to keep output stable across runs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .spec import REQUIRED_COLUMNS, FigureSpec, SchemaMismatch

COLOR_ORDER = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
)
FIGSIZE = (6.4, 4.2)
DPI = 120

# rows whose K column is blank carry the budget-free reference welfare
REFERENCE_ALGOS = {"full": "no budget limit", "empty": "nothing revealed"}

X_COLUMN = {
    "welfare_compare": "K",
    "intervention_gains": "K",
    "learning_perf": "K",
    "coverage_curve": "R",
}
Y_COLUMN = {
    "welfare_compare": "welfare",
    "intervention_gains": "gain",
    "learning_perf": "value",
    "coverage_curve": "welfare",
}
Y_LABEL = {
    "welfare_compare": "social welfare",
    "intervention_gains": "intervention gain",
    "learning_perf": "performance (%)",
    "coverage_curve": "agents covered",
}


@dataclass(frozen=True)
class Series:
    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]


@dataclass(frozen=True)
class RenderedFigure:
    kind: str
    series: tuple[Series, ...]
    reference_lines: dict
    outputs: tuple[Path, ...]


def _read_rows(spec: FigureSpec) -> list[dict]:
    try:
        with open(spec.input, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise SchemaMismatch(f"cannot read {spec.input}: {exc}") from exc
    if not rows:
        raise SchemaMismatch(f"{spec.input}: no data rows")
    missing = [c for c in REQUIRED_COLUMNS[spec.kind] if c not in rows[0]]
    if missing:
        raise SchemaMismatch(f"{spec.input}: missing columns {missing}")
    return rows


def _extract(spec: FigureSpec, rows: list[dict]):
    x_col = X_COLUMN[spec.kind]
    y_col = Y_COLUMN[spec.kind]
    group_cols = spec.effective_group_by
    reference = {}
    groups: dict[tuple, list[tuple[float, float]]] = {}
    for row in rows:
        if spec.kind == "welfare_compare" and row.get("algorithm") in REFERENCE_ALGOS:
            reference[row["algorithm"]] = float(row[y_col])
            continue
        if spec.kind == "learning_perf" and row.get("trial") != "mean":
            continue
        if row.get(x_col, "") == "" or row.get(y_col, "") == "":
            continue
        key = tuple(row.get(c, "") for c in group_cols)
        groups.setdefault(key, []).append((float(row[x_col]), float(row[y_col])))
    series = []
    for key in sorted(groups):
        label = ", ".join(f"{c}={v}" for c, v in zip(group_cols, key))
        points = groups[key]  # file order; x may repeat across seeds
        series.append(
            Series(
                label=label,
                x=tuple(p[0] for p in points),
                y=tuple(p[1] for p in points),
            )
        )
    if not series:
        raise SchemaMismatch(f"{spec.input}: no plottable rows for {spec.kind}")
    return tuple(series), reference


def render(spec: FigureSpec) -> RenderedFigure:
    """Draw one figure; writes PNG and SVG next to ``spec.output``.

    Rendering is read-only with respect to the input CSV.
    """
    rows = _read_rows(spec)
    series, reference = _extract(spec, rows)

    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    for i, s in enumerate(series):
        color = COLOR_ORDER[i % len(COLOR_ORDER)]
        ax.plot(s.x, s.y, marker="o", color=color, label=s.label)
    for name, value in sorted(reference.items()):
        ax.axhline(value, color="black",
                   linestyle="--" if name == "empty" else "-",
                   linewidth=1.0, label=f"{REFERENCE_ALGOS[name]} ({value:g})")
    ax.set_xlabel(X_COLUMN[spec.kind])
    ax.set_ylabel(Y_LABEL[spec.kind])
    ax.set_title(spec.kind.replace("_", " "))
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)

    spec.output.parent.mkdir(parents=True, exist_ok=True)
    png = spec.output.with_suffix(".png")
    svg = spec.output.with_suffix(".svg")
    fig.savefig(png)
    fig.savefig(svg)
    plt.close(fig)
    return RenderedFigure(spec.kind, series, reference, (png, svg))
