"""Single stylesheet for all rendered figures.

Everything that affects pixel output is pinned here so the images are
reproducible across machines: figure geometry, fonts, line styling, and the
two-color convention (true densities in blue, estimates in black).
"""

import matplotlib

matplotlib.use("Agg")

TRUTH_COLOR = "tab:blue"
ESTIMATE_COLOR = "black"
BOX_COLORS = ("tab:blue", "black", "tab:gray")

RC_PARAMS = {
    "figure.figsize": (8.0, 5.0),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.family": "DejaVu Sans",
    "font.size": 9.0,
    "axes.titlesize": 9.0,
    "axes.labelsize": 9.0,
    "legend.fontsize": 8.0,
    "lines.linewidth": 1.2,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "sparsedensity-figures",
}


def rc_context():
    """Return a matplotlib rc_context manager with the pinned style."""
    return matplotlib.rc_context(RC_PARAMS)
