import os

import pytest

from sdfigures import FigureSpec, SchemaError, build_figure, load_table
from sdfigures.cli import main as cli_main

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def golden(name):
    return os.path.join(GOLDEN, name)


def test_spec_validation():
    with pytest.raises(SchemaError):
        FigureSpec(inputs=(), kind="calibration-curves", output="x.png").validate()
    with pytest.raises(SchemaError):
        FigureSpec(inputs=("a",), kind="pie-chart", output="x.png").validate()
    with pytest.raises(SchemaError):
        FigureSpec(inputs=("a", "b"), kind="density-overlay",
                   output="x.png").validate()


def test_missing_column_fails_fast(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("gamma,J\n0.5,4\n")
    with pytest.raises(SchemaError, match="missing columns"):
        load_table(str(bad), "calibration-curves")


def test_empty_input_fails(tmp_path):
    bad = tmp_path / "empty.csv"
    bad.write_text("x,estimate,truth\n")
    with pytest.raises(SchemaError, match="no data rows"):
        load_table(str(bad), "density-overlay")


def test_calibration_one_curve_per_j():
    spec = FigureSpec(inputs=(golden("calibration.csv"),),
                      kind="calibration-curves", output="unused.png")
    fig, info = build_figure(spec)
    try:
        assert info["curves"] == 7  # J in 4..10
        ax = fig.axes[0]
        labels = [t.get_text() for t in ax.get_legend().get_texts()]
        assert labels == [f"J = {j}" for j in range(4, 11)]
    finally:
        import matplotlib.pyplot as plt
        plt.close(fig)


def test_overlay_two_curves():
    spec = FigureSpec(inputs=(golden("density-curve.csv"),),
                      kind="density-overlay", output="unused.png")
    fig, info = build_figure(spec)
    try:
        assert info["curves"] == 2
        assert len(fig.axes[0].lines) == 2
    finally:
        import matplotlib.pyplot as plt
        plt.close(fig)


def test_boxplot_layout_rows_and_columns():
    inputs = tuple(golden(f"{p}.csv") for p in
                   ("dantzig-vs-lasso", "dantzig-vs-refit"))
    spec = FigureSpec(inputs=inputs, kind="boxplot-panel", output="unused.png")
    fig, info = build_figure(spec)
    try:
        assert len(fig.axes) == 8  # 4 density rows x 2 comparison columns
        assert len(info["medians"]) == 16  # 2 methods per subplot
    finally:
        import matplotlib.pyplot as plt
        plt.close(fig)


def test_cli_renders(tmp_path):
    out = tmp_path / "cal.png"
    code = cli_main(["--input", golden("calibration.csv"),
                     "--kind", "calibration-curves", "--output", str(out)])
    assert code == 0 and out.exists() and out.stat().st_size > 0


def test_cli_schema_error_exit_code(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    code = cli_main(["--input", str(bad), "--kind", "density-overlay",
                     "--output", str(tmp_path / "x.png")])
    assert code == 2


def test_render_deterministic(tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    from sdfigures import render
    for out in (a, b):
        render(FigureSpec(inputs=(golden("density-curve.csv"),),
                          kind="density-overlay", output=str(out)))
    assert a.read_bytes() == b.read_bytes()
