"""Phase-diagram heatmaps from Floquet-Lindbladian sweep CSV files."""

__version__ = "0.1.0"

from .heatmap import FigureSpec, load_grid, render_heatmap

__all__ = ["FigureSpec", "load_grid", "render_heatmap"]
