#!/usr/bin/env python

"""Tests for `firescope_kit.training.film`."""

import numpy as np
import pytest

from firescope_kit.errors import DimensionMismatchError, ValidationError
from firescope_kit.training.film import film


def test_per_channel_affine():
    x = np.stack([np.ones((2, 3)), np.full((2, 3), 2.0)])
    out = film(x, [2.0, -1.0], [0.5, 1.0])
    assert out.shape == (2, 2, 3)
    assert np.all(out[0] == 2.5)
    assert np.all(out[1] == -1.0)


def test_identity_parameters():
    x = np.random.default_rng(0).normal(size=(4, 5, 5))
    assert np.array_equal(film(x, np.ones(4), np.zeros(4)), x)


def test_flat_channels():
    assert film([1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [0.0, 0.0, 1.0]).tolist() == [1.0, 4.0, 10.0]


def test_length_mismatch():
    x = np.zeros((3, 2, 2))
    with pytest.raises(DimensionMismatchError):
        film(x, [1.0, 1.0], [0.0, 0.0, 0.0])
    with pytest.raises(DimensionMismatchError):
        film(x, [1.0, 1.0, 1.0], [0.0])
    with pytest.raises(ValidationError):
        film(np.zeros((0, 2)), [], [])


# ---- affine identities ----


def random_cases(seed, cases=10_000):
    # one random case per channel
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(cases, 3, 4))
    return rng, x, rng.normal(size=cases), rng.normal(size=cases)


def test_identity_over_many_channels():
    _, x, _, _ = random_cases(1)
    assert np.array_equal(film(x, np.ones(x.shape[0]), np.zeros(x.shape[0])), x)


def test_zero_gamma_gives_constant_beta_per_channel():
    _, x, _, beta = random_cases(2)
    out = film(x, np.zeros(x.shape[0]), beta)
    assert np.array_equal(out, np.broadcast_to(beta[:, None, None], x.shape))


def test_linear_in_features():
    rng, x, gamma, beta = random_cases(3)
    a = rng.normal(size=x.shape[0])[:, None, None]
    at_zero = film(np.zeros_like(x), gamma, beta)
    assert np.array_equal(at_zero, np.broadcast_to(beta[:, None, None], x.shape))
    lhs = film(a * x, gamma, beta) - at_zero
    rhs = a * (film(x, gamma, beta) - at_zero)
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


def test_beta_only_shifts():
    rng, x, gamma, beta = random_cases(4)
    other = rng.normal(size=x.shape[0])
    diff = film(x, gamma, beta) - film(x, gamma, other)
    assert np.allclose(diff, np.broadcast_to((beta - other)[:, None, None], x.shape), rtol=0, atol=1e-12)
