"""Rendering of xiladder CSV outputs into the standard figure set."""

from .render import REGISTRY, FigureSpec, build_figure, render
from .tables import SCHEMAS, SchemaError, read_table

__version__ = "0.1.0"
