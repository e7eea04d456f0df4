"""Render figures from sparsedensity CSV outputs.

The renderer is a pure view of the CSVs: it never recomputes statistics.
Boxplot panels are drawn from the precomputed five-number summaries via
``Axes.bxp`` so the drawn medians equal the CSV medians exactly.
"""

from dataclasses import dataclass, field

import matplotlib.pyplot as plt
import pandas as pd

from .style import BOX_COLORS, ESTIMATE_COLOR, TRUTH_COLOR, rc_context

KINDS = ("calibration-curves", "density-overlay", "boxplot-panel")

REQUIRED_COLUMNS = {
    "calibration-curves": ("gamma", "J", "n", "mean_risk", "log2_mean_risk"),
    "density-overlay": ("x", "estimate", "truth"),
    "boxplot-panel": ("comparison", "density", "method", "whisker_lo", "q1",
                      "median", "q3", "whisker_hi"),
}


class SchemaError(ValueError):
    """Input CSV does not match the documented schema."""


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple
    kind: str
    output: str
    labels: tuple = field(default=())

    def validate(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; "
                              f"expected one of {KINDS}")
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")
        if self.kind != "boxplot-panel" and len(self.inputs) != 1:
            raise SchemaError(f"{self.kind} takes exactly one input CSV")
        return self


def load_table(path, kind):
    """Read one CSV, skipping '#' header comments, and check its schema."""
    table = pd.read_csv(path, comment="#")
    missing = [c for c in REQUIRED_COLUMNS[kind] if c not in table.columns]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing}")
    if table.empty:
        raise SchemaError(f"{path}: no data rows")
    return table


def _stable_unique(values):
    return list(dict.fromkeys(values))


def _draw_calibration(fig, table, labels):
    ax = fig.add_subplot(111)
    js = sorted(table["J"].unique())
    for idx, j in enumerate(js):
        part = table[table["J"] == j].sort_values("gamma")
        label = labels[idx] if idx < len(labels) else f"J = {int(j)}"
        ax.plot(part["gamma"], part["log2_mean_risk"], marker=".",
                label=label)
    ax.set_xlabel("gamma")
    ax.set_ylabel("log2 mean risk")
    ax.legend(loc="upper right")
    return {"curves": len(js)}


def _draw_overlay(fig, table, labels):
    ax = fig.add_subplot(111)
    table = table.sort_values("x")
    truth_label = labels[0] if len(labels) > 0 else "true density"
    est_label = labels[1] if len(labels) > 1 else "estimate"
    ax.plot(table["x"], table["truth"], color=TRUTH_COLOR, label=truth_label)
    ax.plot(table["x"], table["estimate"], color=ESTIMATE_COLOR,
            label=est_label)
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.legend(loc="upper right")
    return {"curves": 2}


def _draw_boxplots(fig, tables, labels):
    densities = _stable_unique(
        [d for t in tables for d in t["density"]])
    nrows, ncols = len(densities), len(tables)
    medians = []
    for col, table in enumerate(tables):
        comparison = str(table["comparison"].iloc[0])
        title = labels[col] if col < len(labels) else comparison
        for row, density in enumerate(densities):
            part = table[table["density"] == density]
            ax = fig.add_subplot(nrows, ncols, row * ncols + col + 1)
            if part.empty:
                ax.set_axis_off()
                continue
            stats, names = [], []
            for _, rec in part.iterrows():
                stats.append({"med": rec["median"], "q1": rec["q1"],
                              "q3": rec["q3"], "whislo": rec["whisker_lo"],
                              "whishi": rec["whisker_hi"], "fliers": [],
                              "label": str(rec["method"])})
                names.append(str(rec["method"]))
            drawn = ax.bxp(stats, showfliers=False)
            for box, color in zip(drawn["boxes"], BOX_COLORS):
                box.set_color(color)
            for line, rec_median, name in zip(drawn["medians"],
                                              part["median"], names):
                medians.append({"comparison": comparison, "density": density,
                                "method": name,
                                "drawn": float(line.get_ydata()[0]),
                                "csv": float(rec_median)})
            if row == 0:
                ax.set_title(title)
            if col == 0:
                ax.set_ylabel(str(density))
    fig.tight_layout()
    return {"medians": medians}


def build_figure(spec):
    """Build the matplotlib figure for a spec; returns (fig, info).

    ``info`` reports what was drawn (curve counts; for boxplots the drawn
    and CSV median of every box) so callers can verify the rendering is a
    pure view of the input.
    """
    spec.validate()
    with rc_context():
        fig = plt.figure()
        try:
            if spec.kind == "calibration-curves":
                info = _draw_calibration(
                    fig, load_table(spec.inputs[0], spec.kind), spec.labels)
            elif spec.kind == "density-overlay":
                info = _draw_overlay(
                    fig, load_table(spec.inputs[0], spec.kind), spec.labels)
            else:
                tables = [load_table(p, spec.kind) for p in spec.inputs]
                info = _draw_boxplots(fig, tables, spec.labels)
        except Exception:
            plt.close(fig)
            raise
    return fig, info


def render(spec):
    """Render the spec to its output image path; returns the path."""
    fig, info = build_figure(spec)
    try:
        fig.savefig(spec.output)
    finally:
        plt.close(fig)
    return spec.output, info
