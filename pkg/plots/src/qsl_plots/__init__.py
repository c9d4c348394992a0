"""Figure renderer for the qsl-dephasing CSV sweeps."""

from .render import RENDERERS, render
from .schemas import FIGURE_INPUTS, SchemaError, Table, load_table

__version__ = "0.1.0"

__all__ = [
    "RENDERERS",
    "render",
    "FIGURE_INPUTS",
    "SchemaError",
    "Table",
    "load_table",
    "__version__",
]
