"""
Grid rendering of the tilting pattern.

Cell (r, s) records whether the tensor product of the induced module of
weight r and the Weyl module of weight s is tilting. Rows are r, columns are
s, both starting at 0 in the top left corner. All formats are deterministic:
identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.decide import tilting_grid
from src.core.padic import require_prime
from src.utils.config import get_settings
from src.utils.logging import get_logger

logger = get_logger(__name__)

CELL_PX = 16
MARGIN_PX = 40
TILTING_FILL = "#2a2"
OTHER_FILL = "#ddd"
LINE_STROKE = "#333"


class GridFormat(str, Enum):
    ASCII = "ascii"
    TSV = "tsv"
    SVG = "svg"
    JSON = "json"


class GridSpec(BaseModel):
    """What to draw: characteristic, largest weight, output format."""

    model_config = ConfigDict(frozen=True)

    p: int
    max_weight: int = Field(ge=0)
    format: GridFormat = GridFormat.TSV

    @field_validator("p")
    @classmethod
    def _check_prime(cls, value: int) -> int:
        return require_prime(value)

    @model_validator(mode="after")
    def _check_size(self) -> GridSpec:
        limit = get_settings().max_grid_weight
        if self.max_weight > limit:
            raise ValueError(f"grid max {self.max_weight} exceeds the limit {limit}")
        return self

    @property
    def size(self) -> int:
        return self.max_weight + 1


def grid_lines(p: int, max_weight: int) -> list[int]:
    """The weights p^n - 1 (n >= 0) that do not exceed max_weight."""
    require_prime(p)
    lines = []
    power = 1
    while power - 1 <= max_weight:
        lines.append(power - 1)
        power *= p
    return lines


def render_tsv(grid: npt.NDArray[np.bool_]) -> str:
    """Header-less rows of tab-separated 1/0 cells, LF line endings."""
    cells = np.where(grid, "1", "0").tolist()
    return "".join("\t".join(row) + "\n" for row in cells)


def render_ascii(grid: npt.NDArray[np.bool_]) -> str:
    """'#' for tilting, '.' otherwise."""
    cells = np.where(grid, "#", ".").tolist()
    return "".join("".join(row) + "\n" for row in cells)


def render_json(p: int, grid: npt.NDArray[np.bool_]) -> str:
    pairs = np.argwhere(grid).tolist()
    return json.dumps({"p": p, "max": int(grid.shape[0]) - 1, "tilting": pairs}) + "\n"


def render_svg(p: int, grid: npt.NDArray[np.bool_]) -> str:
    size = grid.shape[0]
    extent = MARGIN_PX + size * CELL_PX
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{extent}" height="{extent}" '
        f'viewBox="0 0 {extent} {extent}">',
        f"<title>p={p}, 0 &lt;= r, s &lt;= {size - 1}</title>",
    ]
    for r in range(size):
        y = MARGIN_PX + r * CELL_PX
        for s in range(size):
            fill = TILTING_FILL if grid[r, s] else OTHER_FILL
            out.append(
                f'<rect x="{MARGIN_PX + s * CELL_PX}" y="{y}" width="{CELL_PX}" '
                f'height="{CELL_PX}" fill="{fill}"/>'
            )
    for weight in grid_lines(p, size - 1):
        edge = MARGIN_PX + (weight + 1) * CELL_PX
        centre = MARGIN_PX + weight * CELL_PX + CELL_PX // 2
        out.append(
            f'<line x1="{edge}" y1="{MARGIN_PX}" x2="{edge}" y2="{extent}" '
            f'stroke="{LINE_STROKE}" stroke-width="1"/>'
        )
        out.append(
            f'<line x1="{MARGIN_PX}" y1="{edge}" x2="{extent}" y2="{edge}" '
            f'stroke="{LINE_STROKE}" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{centre}" y="{MARGIN_PX - 6}" font-size="10" '
            f'text-anchor="middle">{weight}</text>'
        )
        out.append(
            f'<text x="{MARGIN_PX - 6}" y="{centre + 4}" font-size="10" '
            f'text-anchor="end">{weight}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_grid(spec: GridSpec) -> str:
    """Compute the grid and render it in the requested format."""
    grid = tilting_grid(spec.p, spec.max_weight)
    if spec.format is GridFormat.TSV:
        text = render_tsv(grid)
    elif spec.format is GridFormat.ASCII:
        text = render_ascii(grid)
    elif spec.format is GridFormat.JSON:
        text = render_json(spec.p, grid)
    else:
        text = render_svg(spec.p, grid)
    logger.info(
        "grid_rendered",
        p=spec.p,
        max_weight=spec.max_weight,
        format=spec.format.value,
        tilting_cells=int(grid.sum()),
    )
    return text


def write_grid(spec: GridSpec, output: Path | None = None) -> str:
    """
    Render a grid and write it to `output` when given.

    Raises:
        OSError: the output path cannot be written
    """
    text = render_grid(spec)
    if output is not None:
        output.write_text(text, encoding="utf-8", newline="\n")
        logger.info("grid_written", path=str(output), bytes=len(text))
    return text
