"""Paper-style comparison figures from disclose experiment CSV files."""

from .spec import FIGURE_KINDS, FigureSpec, SchemaMismatch, load_spec
from .render import RenderedFigure, Series, render

__version__ = "0.1.0"
