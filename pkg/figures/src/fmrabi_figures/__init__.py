"""Render publication-style figures from fmrabi CSV artifacts.

Stateless and schema-driven: every figure is produced from the documented CSV
columns alone, with no recomputation of any physics.
"""

__version__ = "0.1.0"

from .io import CsvTable, EmptyInputError, SchemaError, read_table
from .render import FIGURE_IDS, FigureSpec, render
