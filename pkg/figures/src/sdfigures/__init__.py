"""Batch figure renderer for sparsedensity CSV outputs."""

__version__ = "0.1.0"

from .render import (KINDS, FigureSpec, SchemaError, build_figure,  # noqa: F401
                     load_table, render)
