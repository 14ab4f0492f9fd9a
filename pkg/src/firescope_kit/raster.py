"""firescope_kit.raster
=======================
Shared numeric substrate for **firescope-kit**.

Goals
-----
* One immutable ``Raster`` type for every piece of pixel math (risk rasters,
  predictions, per-pixel probabilities).
* Rank-based normalization of a value population into ``[0, 1]``.
* Range matching, first-order finite differences and the ten-level ordinal
  discretization used to label whole tiles.

Models are built with **Pydantic v2**; pixel data lives in read-only
``numpy`` arrays of shape ``(height, width)`` in row-major order. Pixels
flagged in ``nodata_mask`` are excluded from every mean, rank and sum.
"""
from __future__ import annotations

import math
from typing import Any, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator
from scipy.stats import rankdata

from firescope_kit.constants import ORDINAL_LEVELS
from firescope_kit.errors import (
    DegeneratePopulationError,
    DimensionMismatchError,
    EmptyInputError,
    ValidationError,
)


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


# -----------------------------------------------------------------------------
# === Domain types =============================================================
# -----------------------------------------------------------------------------


class Raster(BaseModel):
    """2-D grid of continuous values with an optional nodata mask."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray = Field(
        ..., description="float64 grid of shape (height, width), row-major"
    )
    nodata_mask: Optional[np.ndarray] = Field(
        None, description="bool grid, True = pixel excluded from all statistics"
    )

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"values must be 2-D, got {arr.ndim}-D")
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError("width and height must be positive")
        return _readonly(arr)

    @field_validator("nodata_mask", mode="before")
    @classmethod
    def _coerce_mask(cls, v: Any) -> Optional[np.ndarray]:
        if v is None:
            return None
        return _readonly(np.array(v, dtype=bool))

    @model_validator(mode="after")
    def _check_consistency(self) -> "Raster":
        if self.nodata_mask is not None and self.nodata_mask.shape != self.values.shape:
            raise ValueError(
                f"nodata_mask shape {self.nodata_mask.shape} != values shape {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values[self.valid])):
            raise ValueError("non-masked values must be finite")
        return self

    @computed_field
    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @computed_field
    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    @property
    def valid(self) -> np.ndarray:
        """bool grid, True where the pixel takes part in statistics."""
        if self.nodata_mask is None:
            return np.ones(self.values.shape, dtype=bool)
        return ~self.nodata_mask

    @property
    def valid_count(self) -> int:
        return int(self.valid.sum())

    def valid_values(self) -> np.ndarray:
        """1-D array of non-masked values in row-major order."""
        return self.values[self.valid]

    def with_values(self, values: np.ndarray) -> "Raster":
        """New raster over ``values`` keeping this raster's nodata mask."""
        return Raster(values=values, nodata_mask=self.nodata_mask)

    @classmethod
    def from_sequence(
        cls,
        width: int,
        height: int,
        values: Sequence[float],
        nodata_mask: Optional[Sequence[bool]] = None,
    ) -> "Raster":
        """Build a raster from a flat row-major sequence."""
        if width <= 0 or height <= 0:
            raise ValidationError("width and height must be positive", field="width" if width <= 0 else "height")
        flat = np.asarray(values, dtype=np.float64)
        if flat.size != width * height:
            raise DimensionMismatchError(
                f"expected {width * height} values, got {flat.size}", field="values"
            )
        mask = None
        if nodata_mask is not None:
            mask = np.asarray(nodata_mask, dtype=bool)
            if mask.size != flat.size:
                raise DimensionMismatchError(
                    f"expected {flat.size} mask bits, got {mask.size}", field="nodata_mask"
                )
            mask = mask.reshape(height, width)
        return cls(values=flat.reshape(height, width), nodata_mask=mask)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Raster):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if not np.array_equal(self.valid, other.valid):
            return False
        return bool(np.array_equal(self.valid_values(), other.valid_values()))

    __hash__ = None  # type: ignore[assignment]


class BinaryMask(BaseModel):
    """Per-pixel burn mask, True = burnt / positive."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    bits: np.ndarray = Field(..., description="bool grid of shape (height, width)")

    @field_validator("bits", mode="before")
    @classmethod
    def _coerce_bits(cls, v: Any) -> np.ndarray:
        arr = np.array(v)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError("bits must be a non-empty 2-D grid")
        return _readonly(arr.astype(bool))

    @computed_field
    @property
    def width(self) -> int:
        return int(self.bits.shape[1])

    @computed_field
    @property
    def height(self) -> int:
        return int(self.bits.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    @classmethod
    def from_raster(cls, raster: Raster, threshold: float = 0.5) -> "BinaryMask":
        """Binarize a raster with ``>= threshold``; nodata pixels become False."""
        return cls(bits=(raster.values >= threshold) & raster.valid)


class QuintileTransform(BaseModel):
    """Rank transform fitted on a reference value population."""

    model_config = ConfigDict(frozen=True)

    reference_quantiles: List[float] = Field(
        ..., description="distinct reference values in increasing order (breakpoints)"
    )
    positions: List[float] = Field(
        ..., description="rank position (r - 0.5) / n of each breakpoint, average rank for ties"
    )
    population_size: int = Field(..., gt=1, description="number of reference values n")
    tie_rule: Literal["average"] = Field("average", description="tie handling when ranking")

    @model_validator(mode="after")
    def _check_breakpoints(self) -> "QuintileTransform":
        q = np.asarray(self.reference_quantiles)
        p = np.asarray(self.positions)
        if q.size < 2 or q.size != p.size:
            raise ValueError("need at least two breakpoints with one position each")
        if np.any(np.diff(q) <= 0):
            raise ValueError("reference_quantiles must be strictly increasing")
        if np.any(np.diff(p) < 0) or p[0] < 0 or p[-1] > 1:
            raise ValueError("positions must be nondecreasing within [0, 1]")
        return self


# -----------------------------------------------------------------------------
# === Operations ===============================================================
# -----------------------------------------------------------------------------


def require_same_shape(a: Any, b: Any, field: str = "raster") -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape {a.shape} != {b.shape}", field=field)


def fit_quintile(reference_values: Any) -> QuintileTransform:
    """Fit the rank transform on a population (a sequence or a Raster).

    A value maps to (r - 0.5) / n with r its rank in the population; tied
    values share their average rank. So [5, 5, 5, 5, 9] sends 5 to
    (2.5 - 0.5) / 5 = 0.4, not the 0.5 a midpoint-of-the-tie reading would
    suggest.
    """
    if isinstance(reference_values, Raster):
        values = reference_values.valid_values()
    else:
        values = np.asarray(reference_values, dtype=np.float64).ravel()
    if not np.all(np.isfinite(values)):
        raise ValidationError("reference values must be finite", field="reference_values")
    distinct, first_index = np.unique(values, return_index=True)
    if distinct.size < 2:
        raise DegeneratePopulationError(
            f"need at least 2 distinct values, got {distinct.size}", field="reference_values"
        )
    n = values.size
    positions = (rankdata(values, method="average") - 0.5) / n
    return QuintileTransform(
        reference_quantiles=distinct.tolist(),
        positions=positions[first_index].tolist(),
        population_size=n,
    )


def apply_quintile(t: QuintileTransform, r: Raster) -> Raster:
    """Map every pixel to its interpolated rank position; out-of-range values clamp."""
    out = np.interp(r.values, t.reference_quantiles, t.positions, left=0.0, right=1.0)
    out = np.where(r.valid, out, 0.0)
    return r.with_values(out)


def match_range(r: Raster) -> Raster:
    """Affine min-max map into [0, 1]; a constant raster maps to zeros."""
    return _min_max(r, *_value_range(r.valid_values()))


def match_range_pair(a: Raster, b: Raster) -> Tuple[Raster, Raster]:
    """Min-max map both rasters into [0, 1] using their shared range."""
    require_same_shape(a, b)
    lo, hi = _value_range(np.concatenate([a.valid_values(), b.valid_values()]))
    return _min_max(a, lo, hi), _min_max(b, lo, hi)


def _value_range(values: np.ndarray) -> Tuple[float, float]:
    if values.size == 0:
        raise EmptyInputError("all pixels are masked", field="raster")
    return float(values.min()), float(values.max())


def _min_max(r: Raster, lo: float, hi: float) -> Raster:
    if hi == lo:
        return r.with_values(np.zeros(r.shape))
    out = (r.values - lo) / (hi - lo)
    return r.with_values(np.where(r.valid, out, 0.0))


def finite_diff(r: Raster) -> Tuple[Raster, Raster]:
    """Forward differences: dx is (h, w-1), dy is (h-1, w)."""
    if r.width < 2 or r.height < 2:
        raise ValidationError(
            f"finite differences need width and height >= 2, got {r.width}x{r.height}",
            field="raster",
        )
    v = np.where(r.valid, r.values, 0.0)
    dx = v[:, 1:] - v[:, :-1]
    dy = v[1:, :] - v[:-1, :]
    if r.nodata_mask is None:
        return Raster(values=dx), Raster(values=dy)
    m = r.nodata_mask
    return (
        Raster(values=dx, nodata_mask=m[:, 1:] | m[:, :-1]),
        Raster(values=dy, nodata_mask=m[1:, :] | m[:-1, :]),
    )


def raster_mean(r: Raster) -> float:
    """Correctly rounded mean of the non-masked pixels."""
    values = r.valid_values()
    if values.size == 0:
        raise EmptyInputError("all pixels are masked", field="raster")
    return math.fsum(values.tolist()) / values.size


def discretize_mean_risk(r: Raster) -> int:
    """Ordinal label 0..9 of a [0, 1] risk raster: floor(mean * 10), capped at 9."""
    values = r.valid_values()
    if values.size and (values.min() < 0.0 or values.max() > 1.0):
        raise ValidationError("risk values must lie in [0, 1]", field="raster")
    mean = raster_mean(r)
    return min(int(math.floor(mean * ORDINAL_LEVELS)), ORDINAL_LEVELS - 1)


__all__ = [
    "Raster",
    "BinaryMask",
    "QuintileTransform",
    "require_same_shape",
    "fit_quintile",
    "apply_quintile",
    "match_range",
    "match_range_pair",
    "finite_diff",
    "raster_mean",
    "discretize_mean_risk",
]
