"""Probabilistic verification of risk scores treated as event probabilities.

Brier score: BS = (1/N) * sum((p_i - y_i)^2), 0 is perfect.
ROC AUC: P(X1 > X0) via the Mann-Whitney statistic, ties count one half.
ECE: sum_b (n_b / N) * |freq_b - conf_b| over equally spaced bins.
"""
from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import rankdata

from firescope_kit.constants import ECE_BINS
from firescope_kit.errors import DimensionMismatchError, EmptyInputError, ValidationError


class RocPoint(BaseModel):
    """One operating point of a ROC curve."""

    model_config = ConfigDict(frozen=True)

    threshold: float = Field(..., description="score >= threshold is called positive")
    fpr: float = Field(..., description="false-positive rate")
    tpr: float = Field(..., description="true-positive rate")


class CalibrationBin(BaseModel):
    """One row of a reliability diagram."""

    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    count: int
    mean_confidence: Optional[float] = Field(None, description="mean probability in the bin")
    observed_frequency: Optional[float] = Field(None, description="fraction of positives in the bin")


def _probabilities(probs: Sequence[float], labels: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    p = np.asarray(probs, dtype=np.float64).ravel()
    y = np.asarray(labels, dtype=np.float64).ravel()
    if p.size != y.size:
        raise DimensionMismatchError(f"{p.size} probabilities vs {y.size} labels", field="labels")
    if p.size == 0:
        raise EmptyInputError("no probabilities to score", field="probs")
    if not np.all(np.isfinite(p)) or p.min() < 0.0 or p.max() > 1.0:
        raise ValidationError("probabilities must lie in [0, 1]", field="probs")
    if not np.all((y == 0.0) | (y == 1.0)):
        raise ValidationError("labels must be 0 or 1", field="labels")
    return p, y


def brier(probs: Sequence[float], labels: Sequence[int]) -> float:
    p, y = _probabilities(probs, labels)
    d = p - y
    return math.fsum((d * d).tolist()) / p.size


def tile_brier(prob: float, label: int) -> float:
    """Squared error of a single tile-level forecast."""
    return brier([prob], [label])


def _scores(values: Sequence[float], field: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyInputError("score set is empty", field=field)
    if np.any(np.isnan(arr)):
        raise ValidationError("scores must not be NaN", field=field)
    return arr


def roc_auc(positives: Sequence[float], negatives: Sequence[float]) -> float:
    """Fraction of (positive, negative) pairs ranked correctly, ties half credit."""
    pos = _scores(positives, "positives")
    neg = _scores(negatives, "negatives")
    ranks = rankdata(np.concatenate([pos, neg]), method="average")
    n1, n0 = pos.size, neg.size
    u = math.fsum(ranks[:n1].tolist()) - n1 * (n1 + 1) / 2.0
    return u / (n1 * n0)


def roc_curve(positives: Sequence[float], negatives: Sequence[float]) -> List[RocPoint]:
    """Operating points at every distinct score, from (0, 0) up to (1, 1)."""
    pos = np.sort(_scores(positives, "positives"))
    neg = np.sort(_scores(negatives, "negatives"))
    thresholds = np.unique(np.concatenate([pos, neg]))[::-1]
    points = [RocPoint(threshold=math.inf, fpr=0.0, tpr=0.0)]
    for t in thresholds:
        tp = pos.size - np.searchsorted(pos, t, side="left")
        fp = neg.size - np.searchsorted(neg, t, side="left")
        points.append(RocPoint(threshold=float(t), fpr=fp / neg.size, tpr=tp / pos.size))
    return points


def _bin_index(p: np.ndarray, bins: int) -> np.ndarray:
    if bins < 1:
        raise ValidationError("bins must be positive", field="bins")
    edges = np.linspace(0.0, 1.0, bins + 1)
    # last bin is right-closed so p == 1.0 lands in bins - 1
    return np.digitize(p, edges[1:-1], right=False)


def reliability_curve(probs: Sequence[float], labels: Sequence[int], bins: int = ECE_BINS) -> List[CalibrationBin]:
    """Per-bin confidence and observed frequency, empty bins included."""
    p, y = _probabilities(probs, labels)
    idx = _bin_index(p, bins)
    counts = np.bincount(idx, minlength=bins)
    conf_sum = np.bincount(idx, weights=p, minlength=bins)
    pos_sum = np.bincount(idx, weights=y, minlength=bins)
    edges = np.linspace(0.0, 1.0, bins + 1)
    rows = []
    for b in range(bins):
        n = int(counts[b])
        rows.append(
            CalibrationBin(
                lower=float(edges[b]),
                upper=float(edges[b + 1]),
                count=n,
                mean_confidence=float(conf_sum[b] / n) if n else None,
                observed_frequency=float(pos_sum[b] / n) if n else None,
            )
        )
    return rows


def ece(probs: Sequence[float], labels: Sequence[int], bins: int = ECE_BINS) -> float:
    """Expected calibration error against observed positive frequency."""
    rows = reliability_curve(probs, labels, bins)
    total = sum(r.count for r in rows)
    return math.fsum(
        (r.count / total) * abs(r.observed_frequency - r.mean_confidence)  # type: ignore[operator]
        for r in rows
        if r.count
    )
