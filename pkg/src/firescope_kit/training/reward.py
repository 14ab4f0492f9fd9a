"""
training/reward.py

Scalar reward for one Oracle completion.

  R = acc_weight * R_acc + fmt_weight * R_fmt

  • R_fmt is 1 when the completion ends with the ``FINAL ANSWER:`` line
    followed by a single digit, else 0.
  • R_acc = w(actual) * (1 - |predicted - actual| / 9), capped at 1, and 0
    when no digit could be parsed.
  • w(c) = 1 / (K * p_c) is the inverse-frequency class weight; its mean
    weighted by the training label histogram is exactly 1.
"""
from __future__ import annotations

import math
import re
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from firescope_kit.constants import ACC_WEIGHT, FINAL_ANSWER_MARKER, FMT_WEIGHT, ORDINAL_LEVELS
from firescope_kit.errors import ValidationError

_ANSWER_RE = re.compile(
    r"(?:\A|\n)[ \t]*" + re.escape(FINAL_ANSWER_MARKER) + r"[ \t]*\r?\n[ \t]*([0-9])\s*\Z"
)


class RewardConfig(BaseModel):
    """Weights of the accuracy and format components."""

    model_config = ConfigDict(frozen=True)

    acc_weight: float = Field(ACC_WEIGHT, ge=0.0, description="weight of the ordinal accuracy term")
    fmt_weight: float = Field(FMT_WEIGHT, ge=0.0, description="weight of the answer-format term")
    class_frequencies: Optional[List[float]] = Field(
        None, description="training label histogram, one positive count per ordinal level"
    )

    @model_validator(mode="after")
    def _check(self) -> "RewardConfig":
        if not math.isclose(self.acc_weight + self.fmt_weight, 1.0, rel_tol=0.0, abs_tol=1e-12):
            raise ValueError("acc_weight + fmt_weight must equal 1")
        if self.class_frequencies is not None:
            if len(self.class_frequencies) != ORDINAL_LEVELS:
                raise ValueError(f"class_frequencies needs {ORDINAL_LEVELS} counts")
            if any(not (f > 0 and math.isfinite(f)) for f in self.class_frequencies):
                raise ValueError("class_frequencies must be positive and finite")
        return self

    def weights(self) -> List[float]:
        return class_weights(self.class_frequencies)


def class_weights(frequencies: Optional[Sequence[float]] = None) -> List[float]:
    """Inverse-frequency weights 1 / (K * p_c); uniform frequencies give all ones."""
    if frequencies is None:
        return [1.0] * ORDINAL_LEVELS
    if len(frequencies) != ORDINAL_LEVELS:
        raise ValidationError(f"expected {ORDINAL_LEVELS} frequencies, got {len(frequencies)}", field="class_frequencies")
    if any(not (f > 0 and math.isfinite(f)) for f in frequencies):
        raise ValidationError("frequencies must be positive and finite", field="class_frequencies")
    total = math.fsum(frequencies)
    return [total / (ORDINAL_LEVELS * f) for f in frequencies]


def parse_oracle_output(text: str) -> Tuple[Optional[int], bool]:
    """(digit, format_ok) of a completion; anything malformed gives (None, False)."""
    match = _ANSWER_RE.search(text or "")
    if match is None:
        return None, False
    return int(match.group(1)), True


def reward(
    predicted: Optional[int],
    actual: int,
    format_ok: bool,
    cfg: RewardConfig = RewardConfig(),
) -> float:
    if not 0 <= actual < ORDINAL_LEVELS:
        raise ValidationError(f"actual {actual} outside 0..{ORDINAL_LEVELS - 1}", field="actual")
    if predicted is not None and not 0 <= predicted < ORDINAL_LEVELS:
        raise ValidationError(f"predicted {predicted} outside 0..{ORDINAL_LEVELS - 1}", field="predicted")

    r_acc = 0.0
    if predicted is not None:
        credit = 1.0 - abs(predicted - actual) / (ORDINAL_LEVELS - 1)
        r_acc = min(1.0, cfg.weights()[actual] * credit)
    r_fmt = 1.0 if format_ok else 0.0
    return cfg.acc_weight * r_acc + cfg.fmt_weight * r_fmt


__all__ = ["RewardConfig", "class_weights", "parse_oracle_output", "reward"]
