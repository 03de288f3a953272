"""Plot renderers for darwinium experiment artifacts.

This package consumes only the documented CSV/JSON files; it never imports
the simulation code or recomputes physics.
"""
from .errors import FigvizError, SchemaError
from .loaders import Table, load_payload, load_table, require
from .renderers import FIGURES, figure_ids, render

__version__ = "0.1.0"

__all__ = [
    "FIGURES",
    "FigvizError",
    "SchemaError",
    "Table",
    "figure_ids",
    "load_payload",
    "load_table",
    "render",
    "require",
    "__version__",
]
