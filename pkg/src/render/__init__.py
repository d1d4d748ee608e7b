"""Grid rendering."""

from src.render.grid import GridFormat, GridSpec, render_grid, write_grid

__all__ = ["GridFormat", "GridSpec", "render_grid", "write_grid"]
