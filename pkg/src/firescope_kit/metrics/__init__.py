"""Evaluation suite: pixel errors, SSIM, probabilistic scores, IoU and QWK."""
from firescope_kit.metrics.ordinal import OrdinalPair, ordinal_to_probability, qwk
from firescope_kit.metrics.pixel import (
    SsimParams,
    iou,
    iou_counts,
    iou_from_counts,
    mae,
    mse,
    pixel_error_sums,
    ssim,
    ssim_map,
)
from firescope_kit.metrics.pixel_sets import EvaluatedTile, PixelEvalSet, assemble_pixel_eval
from firescope_kit.metrics.probabilistic import (
    CalibrationBin,
    RocPoint,
    brier,
    ece,
    reliability_curve,
    roc_auc,
    roc_curve,
    tile_brier,
)

__all__ = [
    "OrdinalPair",
    "ordinal_to_probability",
    "qwk",
    "SsimParams",
    "iou",
    "iou_counts",
    "iou_from_counts",
    "mae",
    "mse",
    "pixel_error_sums",
    "ssim",
    "ssim_map",
    "EvaluatedTile",
    "PixelEvalSet",
    "assemble_pixel_eval",
    "CalibrationBin",
    "RocPoint",
    "brier",
    "ece",
    "reliability_curve",
    "roc_auc",
    "roc_curve",
    "tile_brier",
]
