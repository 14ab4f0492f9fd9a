from firescope_kit.training.film import film
from firescope_kit.training.grpo import (
    GroupTerms,
    GrpoConfig,
    RolloutGroup,
    clipped_term,
    group_advantages,
    grpo_objective,
    grpo_terms,
    kl_estimate,
)
from firescope_kit.training.loss import (
    LossBreakdown,
    LossWeights,
    combine_loss,
    composite_loss,
    edge_loss,
    smooth_l1,
)
from firescope_kit.training.reward import RewardConfig, class_weights, parse_oracle_output, reward

__all__ = [
    "film",
    "GroupTerms",
    "GrpoConfig",
    "RolloutGroup",
    "clipped_term",
    "group_advantages",
    "grpo_objective",
    "grpo_terms",
    "kl_estimate",
    "LossBreakdown",
    "LossWeights",
    "combine_loss",
    "composite_loss",
    "edge_loss",
    "smooth_l1",
    "RewardConfig",
    "class_weights",
    "parse_oracle_output",
    "reward",
]
