"""
firescope_kit.interpret
=======================
How faithfully a risk prediction follows the reasoning text it was
conditioned on.

* ``fidelity``: share of the largest possible shift a prediction makes when
  its reasoning is perturbed toward the opposite conclusion. The target of
  pixel i is 1 when y_i < 0.5 and 0 otherwise; pixels already at their target
  carry no information and are left out of the mean.
* ``consistency``: one minus the normalized shift under a paraphrase that
  keeps the meaning. A move down is scaled by y_i, a move up by 1 - y_i.
* ``aggregate_scores``: unweighted mean of per-tile scores in tile-id order.
"""
from __future__ import annotations

import math
from typing import Literal, Mapping, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from firescope_kit.errors import EmptyInputError, ValidationError
from firescope_kit.raster import Raster
from firescope_kit.utils.utils import ordered_mean


class PairedPrediction(BaseModel):
    """Predictions for the original and the modified reasoning of one tile."""

    model_config = ConfigDict(frozen=True)

    original: Raster = Field(..., description="prediction from the unmodified reasoning")
    modified: Raster = Field(..., description="prediction from the perturbed or paraphrased reasoning")
    kind: Literal["perturbed", "paraphrased"]

    @model_validator(mode="after")
    def _check(self) -> "PairedPrediction":
        if self.original.shape != self.modified.shape:
            raise ValueError(f"shape {self.original.shape} != {self.modified.shape}")
        for name in ("original", "modified"):
            v = getattr(self, name).valid_values()
            if v.size and (v.min() < 0.0 or v.max() > 1.0):
                raise ValueError(f"{name} values must lie in [0, 1]")
        return self

    def joint_values(self) -> Tuple[np.ndarray, np.ndarray]:
        valid = self.original.valid & self.modified.valid
        return self.original.values[valid], self.modified.values[valid]


def _require_kind(pair: PairedPrediction, kind: str) -> None:
    if pair.kind != kind:
        raise ValidationError(f"expected a {kind} pair, got {pair.kind}", field="kind")


def fidelity(pair: PairedPrediction) -> float:
    _require_kind(pair, "perturbed")
    y, y_mod = pair.joint_values()
    target = np.where(y < 0.5, 1.0, 0.0)
    span = target - y
    keep = span != 0.0
    if not keep.any():
        raise EmptyInputError("every pixel already sits at its flip target", field="original")
    ratios = (y_mod[keep] - y[keep]) / span[keep]
    return math.fsum(ratios.tolist()) / ratios.size


def consistency(pair: PairedPrediction) -> float:
    _require_kind(pair, "paraphrased")
    y, y_mod = pair.joint_values()
    if y.size == 0:
        raise EmptyInputError("no pixel is valid in both predictions", field="original")
    scale = np.where(y_mod < y, y, np.where(y_mod > y, 1.0 - y, 1.0))
    shifts = np.abs(y_mod - y) / scale
    return 1.0 - math.fsum(shifts.tolist()) / shifts.size


def aggregate_scores(scores: Mapping[str, float]) -> float:
    """Test-set score: plain mean over tiles, reduced in ascending tile-id order."""
    return ordered_mean(scores, field="scores")


__all__ = ["PairedPrediction", "fidelity", "consistency", "aggregate_scores"]
