"""
training/grpo.py

Group-relative policy optimization objective over supplied sequence
log-probabilities. Nothing here runs a policy or computes gradients.

For a group of n rollouts with rewards r_i:

  A_i  = (r_i - mean(r)) / std(r)              population std, 0 when std < 1e-8
  d_i  = exp(logp_new_i - logp_old_i)
  J    = (1/n) sum_i min(d_i A_i, clip(d_i, 1-eps, 1+eps) A_i) - beta * KL
  KL   = (1/n) sum_i (logp_new_i - logp_ref_i)

The full objective is the mean of J over groups. Every reduction uses
compensated summation, so results do not depend on rollout or group order.
"""
from __future__ import annotations

import math
from typing import List, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from firescope_kit.constants import CLIP_EPSILON, KL_COEFF, ZERO_STD
from firescope_kit.errors import DimensionMismatchError, EmptyInputError, ValidationError


class RolloutGroup(BaseModel):
    """Rewards and sequence log-probabilities of n rollouts for one prompt."""

    model_config = ConfigDict(frozen=True)

    rewards: List[float] = Field(..., description="scalar reward of each rollout")
    logp_new: List[float] = Field(..., description="log-probability under the current policy")
    logp_old: List[float] = Field(..., description="log-probability under the sampling policy")
    logp_ref: List[float] = Field(..., description="log-probability under the frozen reference")

    @model_validator(mode="after")
    def _check(self) -> "RolloutGroup":
        n = len(self.rewards)
        if n < 2:
            raise ValueError(f"a group needs at least 2 rollouts, got {n}")
        for name in ("logp_new", "logp_old", "logp_ref"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has {len(getattr(self, name))} entries, rewards has {n}")
        for name in ("rewards", "logp_new", "logp_old", "logp_ref"):
            if not all(math.isfinite(v) for v in getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        return self

    @property
    def size(self) -> int:
        return len(self.rewards)


class GrpoConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    clip_epsilon: float = Field(CLIP_EPSILON, gt=0.0, lt=1.0, description="ratio clip half-width eps")
    kl_coeff: float = Field(KL_COEFF, ge=0.0, description="KL penalty coefficient beta")


class GroupTerms(BaseModel):
    """Per-group pieces of the objective, kept for reporting."""

    model_config = ConfigDict(frozen=True)

    advantages: List[float]
    surrogate: float = Field(..., description="mean clipped surrogate over the group")
    kl: float = Field(..., description="mean log-ratio against the reference policy")
    objective: float = Field(..., description="surrogate - beta * kl")


def group_advantages(rewards: Sequence[float]) -> List[float]:
    n = len(rewards)
    if n < 2:
        raise ValidationError(f"need at least 2 rewards, got {n}", field="rewards")
    mean = math.fsum(rewards) / n
    std = math.sqrt(math.fsum((r - mean) ** 2 for r in rewards) / n)
    if std < ZERO_STD:
        return [0.0] * n
    return [(r - mean) / std for r in rewards]


def clipped_term(logp_new: float, logp_old: float, advantage: float, eps: float = CLIP_EPSILON) -> float:
    """min(d * A, clip(d, 1 - eps, 1 + eps) * A) with d the probability ratio.

    For A >= 0 the term is capped at (1 + eps) * A however large d grows. For
    A < 0 it is max(d, 1 - eps) * A, which is unbounded below: when the
    log-ratio overflows the ratio the term is -inf.
    """
    try:
        ratio = math.exp(logp_new - logp_old)
    except OverflowError:
        ratio = math.inf
    if advantage >= 0.0:
        return min(ratio, 1.0 + eps) * advantage
    return max(ratio, 1.0 - eps) * advantage


def kl_estimate(logp_new: Sequence[float], logp_ref: Sequence[float]) -> float:
    if len(logp_new) != len(logp_ref):
        raise DimensionMismatchError(f"{len(logp_new)} vs {len(logp_ref)} log-probabilities", field="logp_ref")
    if not logp_new:
        raise EmptyInputError("no log-probabilities", field="logp_new")
    return math.fsum(a - b for a, b in zip(logp_new, logp_ref)) / len(logp_new)


def grpo_terms(group: RolloutGroup, cfg: GrpoConfig = GrpoConfig()) -> GroupTerms:
    advantages = group_advantages(group.rewards)
    surrogate = math.fsum(
        clipped_term(new, old, adv, cfg.clip_epsilon)
        for new, old, adv in zip(group.logp_new, group.logp_old, advantages)
    ) / group.size
    kl = kl_estimate(group.logp_new, group.logp_ref)
    return GroupTerms(
        advantages=advantages,
        surrogate=surrogate,
        kl=kl,
        objective=surrogate - cfg.kl_coeff * kl,
    )


def grpo_objective(groups: Sequence[RolloutGroup], cfg: GrpoConfig = GrpoConfig()) -> float:
    """Mean per-group objective; the quantity a GRPO step maximizes."""
    if not groups:
        raise EmptyInputError("no rollout groups", field="groups")
    return math.fsum(grpo_terms(g, cfg).objective for g in groups) / len(groups)


__all__ = [
    "RolloutGroup",
    "GrpoConfig",
    "GroupTerms",
    "group_advantages",
    "clipped_term",
    "kl_estimate",
    "grpo_terms",
    "grpo_objective",
]
