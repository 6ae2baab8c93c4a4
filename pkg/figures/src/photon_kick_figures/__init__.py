"""Figure renderer for photon-kick CSV output.

Consumes the simulator's CSV files (never its Python API) and renders two
vector figures: the energy comparison (interaction-model energy plateauing
at 1.5 while the relativistic energy diverges) and the inertia comparison
(virtual inertia factor overlaid on the Lorentz factor with a residual
subplot).
"""

from .render import FigureSpec, FormatError, RenderResult, read_rows, render

__version__ = "0.1.0"

__all__ = ["FigureSpec", "FormatError", "RenderResult", "read_rows", "render"]
