"""Pixel populations for out-of-distribution discrimination.

Ignition is stochastic, so non-burnt pixels inside a wildfire tile are
background, not negatives: positives are burnt pixels, negatives are every
pixel of a control tile.
"""
from __future__ import annotations

from typing import List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from firescope_kit.errors import DimensionMismatchError, ValidationError
from firescope_kit.raster import BinaryMask, Raster


class EvaluatedTile(BaseModel):
    """A predicted OOD tile with its role and, for events, its burn mask."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    tile_id: str
    role: Literal["ood_event", "ood_control"]
    prediction: Raster
    mask: Optional[BinaryMask] = None


class PixelEvalSet(BaseModel):
    """Scores split into positives, negatives and excluded background."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    positive_scores: np.ndarray = Field(..., description="scores at burnt pixels")
    negative_scores: np.ndarray = Field(..., description="scores at control-tile pixels")
    background_scores: np.ndarray = Field(..., description="non-burnt pixels inside event tiles")

    @property
    def total(self) -> int:
        return int(self.positive_scores.size + self.negative_scores.size + self.background_scores.size)


def assemble_pixel_eval(tiles: Sequence[EvaluatedTile]) -> PixelEvalSet:
    """Partition the valid pixels of OOD tiles, visiting tiles in tile-id order."""
    positives: List[np.ndarray] = []
    negatives: List[np.ndarray] = []
    background: List[np.ndarray] = []
    for tile in sorted(tiles, key=lambda t: t.tile_id):
        valid = tile.prediction.valid
        values = tile.prediction.values
        if tile.role == "ood_event":
            if tile.mask is None:
                raise ValidationError(f"event tile {tile.tile_id!r} has no mask", field="mask")
            if tile.mask.shape != tile.prediction.shape:
                raise DimensionMismatchError(
                    f"mask {tile.mask.shape} != prediction {tile.prediction.shape} for {tile.tile_id!r}",
                    field="mask",
                )
            positives.append(values[valid & tile.mask.bits])
            background.append(values[valid & ~tile.mask.bits])
        else:
            if tile.mask is not None:
                raise ValidationError(f"control tile {tile.tile_id!r} must not carry a mask", field="mask")
            negatives.append(values[valid])

    def _join(parts: List[np.ndarray]) -> np.ndarray:
        return np.concatenate(parts) if parts else np.empty(0, dtype=np.float64)

    return PixelEvalSet(
        positive_scores=_join(positives),
        negative_scores=_join(negatives),
        background_scores=_join(background),
    )
