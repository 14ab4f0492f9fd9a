"""
training/loss.py

Composite raster reconstruction loss:

  L = SmoothL1(y, y_hat) + w_s * (1 - SSIM(y, y_hat)) + w_e * mean|grad y - grad y_hat|

SSIM is taken on both rasters mapped into [0, 1] with their shared range so a
global offset between them stays visible. The edge term pools the absolute
differences of horizontal and vertical forward differences.
"""
from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from firescope_kit.constants import EDGE_LOSS_WEIGHT, SMOOTH_L1_BETA, SSIM_LOSS_WEIGHT
from firescope_kit.errors import EmptyInputError, ValidationError
from firescope_kit.metrics.pixel import SsimParams, ssim
from firescope_kit.raster import Raster, finite_diff, match_range_pair, require_same_shape


class LossWeights(BaseModel):
    model_config = ConfigDict(frozen=True)

    ssim_weight: float = Field(SSIM_LOSS_WEIGHT, ge=0.0, description="weight of the 1 - SSIM term")
    edge_weight: float = Field(EDGE_LOSS_WEIGHT, ge=0.0, description="weight of the gradient term")
    smooth_l1_beta: float = Field(SMOOTH_L1_BETA, gt=0.0, description="quadratic/linear switch point")
    ssim_params: SsimParams = Field(default_factory=SsimParams)


class LossBreakdown(BaseModel):
    """Total loss with its three unweighted components."""

    model_config = ConfigDict(frozen=True)

    total: float
    reconstruction: float = Field(..., description="smooth-l1 over valid pixels")
    structure: float = Field(..., description="1 - SSIM of the range-matched rasters")
    edges: float = Field(..., description="mean absolute difference of finite differences")


def smooth_l1(y: Raster, yhat: Raster, beta: float = SMOOTH_L1_BETA) -> float:
    require_same_shape(y, yhat)
    if beta <= 0:
        raise ValidationError("beta must be positive", field="beta")
    valid = y.valid & yhat.valid
    d = np.abs(y.values[valid] - yhat.values[valid])
    if d.size == 0:
        raise EmptyInputError("no pixel is valid in both rasters", field="raster")
    per_pixel = np.where(d < beta, 0.5 * d * d / beta, d - 0.5 * beta)
    return math.fsum(per_pixel.tolist()) / d.size


def edge_loss(y: Raster, yhat: Raster) -> float:
    """Mean |dx(y) - dx(yhat)| pooled with |dy(y) - dy(yhat)|."""
    require_same_shape(y, yhat)
    diffs = []
    for a, b in zip(finite_diff(y), finite_diff(yhat)):
        valid = a.valid & b.valid
        diffs.append(np.abs(a.values[valid] - b.values[valid]))
    pooled = np.concatenate(diffs)
    if pooled.size == 0:
        raise EmptyInputError("no finite difference is valid in both rasters", field="raster")
    return math.fsum(pooled.tolist()) / pooled.size


def combine_loss(reconstruction: float, ssim_value: float, edges: float, w: LossWeights = LossWeights()) -> LossBreakdown:
    structure = 1.0 - ssim_value
    return LossBreakdown(
        total=reconstruction + w.ssim_weight * structure + w.edge_weight * edges,
        reconstruction=reconstruction,
        structure=structure,
        edges=edges,
    )


def composite_loss(y: Raster, yhat: Raster, w: LossWeights = LossWeights()) -> LossBreakdown:
    require_same_shape(y, yhat)
    for name, r in (("y", y), ("yhat", yhat)):
        v = r.valid_values()
        if v.size and (v.min() < -1.0 or v.max() > 1.0):
            raise ValidationError("values must lie in [-1, 1]", field=name)
    a, b = match_range_pair(y, yhat)
    return combine_loss(
        smooth_l1(y, yhat, w.smooth_l1_beta),
        ssim(a, b, w.ssim_params),
        edge_loss(y, yhat),
        w,
    )


__all__ = ["LossWeights", "LossBreakdown", "smooth_l1", "edge_loss", "combine_loss", "composite_loss"]
