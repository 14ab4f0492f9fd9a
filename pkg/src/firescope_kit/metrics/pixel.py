"""
metrics/pixel.py

Per-pixel error metrics, structural similarity and burn-mask overlap.

  • ``mse`` / ``mae`` over pixels valid in both rasters.
  • ``ssim`` with a Gaussian window, averaged over fully interior windows
    (no padding); windows touching a nodata pixel are skipped.
  • ``iou`` of a thresholded prediction against a burn mask.
"""
from __future__ import annotations

import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.ndimage import correlate1d

from firescope_kit.constants import IOU_THRESHOLD, SSIM_C1, SSIM_C2, SSIM_SIGMA, SSIM_WINDOW
from firescope_kit.errors import EmptyInputError, ValidationError
from firescope_kit.raster import BinaryMask, Raster, require_same_shape


class SsimParams(BaseModel):
    """Gaussian-window SSIM settings; constants assume data in [0, 1]."""

    model_config = ConfigDict(frozen=True)

    window: int = Field(SSIM_WINDOW, description="odd window edge length in pixels")
    sigma: float = Field(SSIM_SIGMA, gt=0, description="Gaussian standard deviation in pixels")
    c1: float = Field(SSIM_C1, gt=0, description="luminance stabilizer C1")
    c2: float = Field(SSIM_C2, gt=0, description="contrast stabilizer C2")

    @model_validator(mode="after")
    def _check_window(self) -> "SsimParams":
        if self.window < 3 or self.window % 2 == 0:
            raise ValueError(f"window must be odd and >= 3, got {self.window}")
        return self


def pixel_error_sums(a: Raster, b: Raster) -> Tuple[float, float, int]:
    """(sum of squared errors, sum of absolute errors, pixel count) over joint valid pixels."""
    require_same_shape(a, b)
    valid = a.valid & b.valid
    diff = a.values[valid] - b.values[valid]
    return math.fsum((diff * diff).tolist()), math.fsum(np.abs(diff).tolist()), int(diff.size)


def mse(a: Raster, b: Raster) -> float:
    sq, _, n = pixel_error_sums(a, b)
    if n == 0:
        raise EmptyInputError("no pixel is valid in both rasters", field="raster")
    return sq / n


def mae(a: Raster, b: Raster) -> float:
    _, ab, n = pixel_error_sums(a, b)
    if n == 0:
        raise EmptyInputError("no pixel is valid in both rasters", field="raster")
    return ab / n


def gaussian_kernel(params: SsimParams) -> np.ndarray:
    """Normalized 1-D Gaussian taps; the 2-D window is their outer product."""
    radius = params.window // 2
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-(x * x) / (2.0 * params.sigma * params.sigma))
    return taps / taps.sum()


def _interior(image: np.ndarray, taps: np.ndarray) -> np.ndarray:
    radius = taps.size // 2
    out = correlate1d(correlate1d(image, taps, axis=0, mode="constant"), taps, axis=1, mode="constant")
    return out[radius:-radius, radius:-radius]


def ssim_map(a: Raster, b: Raster, params: SsimParams = SsimParams()) -> np.ndarray:
    """Local SSIM at every fully interior window position that holds no nodata.

    Returns a 1-D array of the local values in row-major window order.
    """
    require_same_shape(a, b)
    if min(a.shape) < params.window:
        raise ValidationError(
            f"raster {a.width}x{a.height} smaller than window {params.window}", field="raster"
        )
    taps = gaussian_kernel(params)
    valid = a.valid & b.valid
    x = np.where(valid, a.values, 0.0)
    y = np.where(valid, b.values, 0.0)

    mu_x = _interior(x, taps)
    mu_y = _interior(y, taps)
    sigma_x = _interior(x * x, taps) - mu_x * mu_x
    sigma_y = _interior(y * y, taps) - mu_y * mu_y
    sigma_xy = _interior(x * y, taps) - mu_x * mu_y

    num = (2 * mu_x * mu_y + params.c1) * (2 * sigma_xy + params.c2)
    den = (mu_x * mu_x + mu_y * mu_y + params.c1) * (sigma_x + sigma_y + params.c2)
    local = num / den

    if valid.all():
        return local.ravel()
    box = np.ones(params.window)
    touched = _interior((~valid).astype(np.float64), box) > 0.5
    return local[~touched]


def ssim(a: Raster, b: Raster, params: SsimParams = SsimParams()) -> float:
    """Mean structural similarity of two rasters already matched into [0, 1]."""
    local = ssim_map(a, b, params)
    if local.size == 0:
        raise EmptyInputError("every SSIM window touches a nodata pixel", field="raster")
    return float(np.mean(local))


def iou_counts(pred: Raster, truth: BinaryMask, threshold: float = IOU_THRESHOLD) -> Tuple[int, int, int]:
    """(TP, FP, FN) of ``pred >= threshold`` against ``truth`` over valid pixels."""
    require_same_shape(pred, truth)
    valid = pred.valid
    positive = (pred.values >= threshold) & valid
    burnt = truth.bits & valid
    tp = int(np.count_nonzero(positive & burnt))
    fp = int(np.count_nonzero(positive & ~burnt))
    fn = int(np.count_nonzero(~positive & burnt))
    return tp, fp, fn


def iou_from_counts(tp: int, fp: int, fn: int) -> float:
    union = tp + fp + fn
    return 1.0 if union == 0 else tp / union


def iou(pred: Raster, truth: BinaryMask, threshold: float = IOU_THRESHOLD) -> float:
    """Intersection over union; two empty sets score 1."""
    return iou_from_counts(*iou_counts(pred, truth, threshold))
