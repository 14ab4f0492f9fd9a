from __future__ import annotations

from typing import Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from firescope_kit.constants import ORDINAL_LEVELS
from firescope_kit.errors import EmptyInputError, ValidationError


class OrdinalPair(BaseModel):
    """A predicted and an actual ordinal risk level."""

    model_config = ConfigDict(frozen=True)

    predicted: int = Field(..., ge=0, lt=ORDINAL_LEVELS)
    actual: int = Field(..., ge=0, lt=ORDINAL_LEVELS)


PairLike = Union[OrdinalPair, Tuple[int, int]]


def ordinal_to_probability(label: int, k: int = ORDINAL_LEVELS) -> float:
    """Centre of an ordinal bin on the [0, 1] risk scale."""
    if not 0 <= label < k:
        raise ValidationError(f"label {label} outside 0..{k - 1}", field="label")
    return (label + 0.5) / k


def qwk(pairs: Sequence[PairLike], k: int = ORDINAL_LEVELS) -> float:
    """Quadratic weighted kappa between predicted (rows) and actual (columns) labels.

    kappa = 1 - sum((i-j)^2 O_ij) / sum((i-j)^2 E_ij), E_ij = row_i * col_j / N.
    When every pair sits on one diagonal cell the ratio is 0/0; that perfect
    agreement scores 1.
    """
    if not pairs:
        raise EmptyInputError("no ordinal pairs", field="pairs")
    pred = np.empty(len(pairs), dtype=np.int64)
    act = np.empty(len(pairs), dtype=np.int64)
    for n, pair in enumerate(pairs):
        p, a = (pair.predicted, pair.actual) if isinstance(pair, OrdinalPair) else pair
        if not (0 <= p < k and 0 <= a < k):
            raise ValidationError(f"pair {n} = ({p}, {a}) outside 0..{k - 1}", field="pairs")
        pred[n], act[n] = p, a

    observed = np.zeros((k, k), dtype=np.float64)
    np.add.at(observed, (pred, act), 1.0)
    total = observed.sum()
    expected = np.outer(observed.sum(axis=1), observed.sum(axis=0)) / total
    i, j = np.indices((k, k))
    weights = (i - j) ** 2

    numerator = float((weights * observed).sum())
    denominator = float((weights * expected).sum())
    if denominator == 0.0:
        if numerator == 0.0:
            return 1.0
        raise ValidationError("expected disagreement is zero", field="pairs")
    return 1.0 - numerator / denominator
