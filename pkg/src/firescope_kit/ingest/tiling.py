# ingest/tiling.py
"""Grid tiling of parent rasters and 2x2 supertile crops for augmentation."""
from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from firescope_kit.constants import DEFAULT_TILE_SIZE
from firescope_kit.errors import DimensionMismatchError, ValidationError
from firescope_kit.raster import Raster


class TileGeometry(BaseModel):
    """Placement of one tile inside its parent raster (pixel units)."""

    model_config = ConfigDict(frozen=True)

    origin_row: int = Field(..., ge=0, description="top row of the tile in the parent")
    origin_col: int = Field(..., ge=0, description="left column of the tile in the parent")
    size: int = Field(DEFAULT_TILE_SIZE, gt=0, description="tile edge length in pixels")
    parent_id: str = Field(..., description="identifier of the parent raster")

    @property
    def grid_index(self) -> Tuple[int, int]:
        return self.origin_row // self.size, self.origin_col // self.size

    @property
    def tile_id(self) -> str:
        row, col = self.grid_index
        return f"{self.parent_id}_r{row:04d}_c{col:04d}"


def _window(r: Raster, row: int, col: int, size: int) -> Raster:
    mask = None if r.nodata_mask is None else r.nodata_mask[row:row + size, col:col + size]
    return Raster(values=r.values[row:row + size, col:col + size], nodata_mask=mask)


def tile_raster(
    parent: Raster,
    size: int = DEFAULT_TILE_SIZE,
    parent_id: str = "parent",
) -> List[Tuple[TileGeometry, Raster]]:
    """Cut ``parent`` into non-overlapping ``size`` x ``size`` tiles, row-major.

    Partial tiles along the right and bottom edges are dropped.
    """
    if size <= 0:
        raise ValidationError(f"tile size must be positive, got {size}", field="size")
    if size > min(parent.width, parent.height):
        raise ValidationError(
            f"tile size {size} exceeds parent {parent.width}x{parent.height}", field="size"
        )
    tiles: List[Tuple[TileGeometry, Raster]] = []
    for row in range(0, parent.height - size + 1, size):
        for col in range(0, parent.width - size + 1, size):
            geom = TileGeometry(origin_row=row, origin_col=col, size=size, parent_id=parent_id)
            tiles.append((geom, _window(parent, row, col, size)))
    return tiles


def crop_from_supertile(
    supertile: Raster,
    offset_row: int,
    offset_col: int,
    size: int = DEFAULT_TILE_SIZE,
) -> Raster:
    """Return the ``size`` x ``size`` window of a 2x2 supertile at an offset.

    Offsets (0, 0), (0, size), (size, 0) and (size, size) reproduce the four
    original tiles.
    """
    if supertile.shape != (2 * size, 2 * size):
        raise DimensionMismatchError(
            f"supertile must be {2 * size}x{2 * size}, got {supertile.width}x{supertile.height}",
            field="supertile",
        )
    for name, offset in (("offset_row", offset_row), ("offset_col", offset_col)):
        if not 0 <= offset <= size:
            raise ValidationError(f"{offset} outside [0, {size}]", field=name)
    return _window(supertile, offset_row, offset_col, size)


def assemble_supertile(tiles: Sequence[Raster]) -> Raster:
    """Stitch four equally sized tiles (row-major: TL, TR, BL, BR) into a supertile."""
    if len(tiles) != 4:
        raise ValidationError(f"need 4 tiles, got {len(tiles)}", field="tiles")
    shape = tiles[0].shape
    if shape[0] != shape[1] or any(t.shape != shape for t in tiles):
        raise DimensionMismatchError("supertile tiles must be equal squares", field="tiles")
    values = np.block([[tiles[0].values, tiles[1].values], [tiles[2].values, tiles[3].values]])
    if all(t.nodata_mask is None for t in tiles):
        return Raster(values=values)
    masks = [t.nodata_mask if t.nodata_mask is not None else np.zeros(shape, dtype=bool) for t in tiles]
    return Raster(values=values, nodata_mask=np.block([[masks[0], masks[1]], [masks[2], masks[3]]]))


def group_supertiles(
    geometries: Sequence[TileGeometry],
) -> List[Tuple[TileGeometry, TileGeometry, TileGeometry, TileGeometry]]:
    """Group tiles into complete 2x2 blocks on the even-aligned tile grid.

    Tiles whose block is incomplete are left out. Output is ordered by
    parent id, then block row, then block column.
    """
    by_cell: Dict[Tuple[str, int, int], TileGeometry] = {}
    for geom in geometries:
        by_cell[(geom.parent_id, *geom.grid_index)] = geom
    groups = []
    for parent_id, row, col in sorted(by_cell):
        if row % 2 or col % 2:
            continue
        keys = [(parent_id, row + dr, col + dc) for dr in (0, 1) for dc in (0, 1)]
        if all(k in by_cell for k in keys):
            groups.append(tuple(by_cell[k] for k in keys))
    return groups  # type: ignore[return-value]


def sample_crop_offsets(size: int, count: int, seed: int) -> List[Tuple[int, int]]:
    """Seeded translational offsets in [0, size]^2 for supertile crops."""
    if count < 0:
        raise ValidationError("count must be non-negative", field="count")
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, size + 1, size=(count, 2))
    return [(int(r), int(c)) for r, c in draws]
