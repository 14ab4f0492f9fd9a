"""Feature-wise linear modulation: out[c] = gamma[c] * features[c] + beta[c]."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from firescope_kit.errors import DimensionMismatchError, ValidationError


def film(features: np.ndarray, gamma: Sequence[float], beta: Sequence[float]) -> np.ndarray:
    """Apply a per-channel affine map to a channel-first feature grid (C, ...)."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim < 1 or x.shape[0] == 0:
        raise ValidationError("features need a leading channel axis", field="features")
    g = np.asarray(gamma, dtype=np.float64).ravel()
    b = np.asarray(beta, dtype=np.float64).ravel()
    channels = x.shape[0]
    if g.size != channels:
        raise DimensionMismatchError(f"{g.size} gamma values for {channels} channels", field="gamma")
    if b.size != channels:
        raise DimensionMismatchError(f"{b.size} beta values for {channels} channels", field="beta")
    shape = (channels,) + (1,) * (x.ndim - 1)
    return g.reshape(shape) * x + b.reshape(shape)
