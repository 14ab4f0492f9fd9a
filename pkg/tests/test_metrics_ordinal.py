#!/usr/bin/env python

"""Tests for `firescope_kit.metrics.ordinal`."""

import numpy as np
import pytest

from firescope_kit.errors import EmptyInputError, ValidationError
from firescope_kit.metrics.ordinal import OrdinalPair, ordinal_to_probability, qwk


def qwk_oracle(pairs, k=10):
    observed = [[0.0] * k for _ in range(k)]
    for p, a in pairs:
        observed[p][a] += 1
    n = len(pairs)
    rows = [sum(observed[i]) for i in range(k)]
    cols = [sum(observed[i][j] for i in range(k)) for j in range(k)]
    num = sum((i - j) ** 2 * observed[i][j] for i in range(k) for j in range(k))
    den = sum((i - j) ** 2 * rows[i] * cols[j] / n for i in range(k) for j in range(k))
    return 1.0 - num / den


def test_perfect_agreement():
    assert qwk([(i % 10, i % 10) for i in range(30)]) == 1.0


def test_opposite_extremes():
    assert qwk([(9, 0), (0, 9)]) == pytest.approx(-1.0)


def test_constant_prediction_scores_zero():
    assert qwk([(4, a) for a in range(10)]) == pytest.approx(0.0, abs=1e-12)


def test_single_diagonal_cell_is_perfect():
    assert qwk([(3, 3), (3, 3)]) == 1.0


def test_accepts_ordinal_pairs():
    pairs = [OrdinalPair(predicted=2, actual=3), OrdinalPair(predicted=5, actual=5), OrdinalPair(predicted=0, actual=1)]
    assert qwk(pairs) == pytest.approx(qwk_oracle([(2, 3), (5, 5), (0, 1)]), abs=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_matches_matrix_oracle_and_bounds(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 200))
    actual = rng.integers(0, 10, size=n)
    predicted = np.clip(actual + rng.integers(-3, 4, size=n), 0, 9)
    pairs = list(zip(predicted.tolist(), actual.tolist()))
    if len(set(actual.tolist())) == 1 and len(set(predicted.tolist())) == 1:
        pytest.skip("single-cell draw")
    value = qwk(pairs)
    assert value == pytest.approx(qwk_oracle(pairs), abs=1e-12)
    assert -1.0 <= value <= 1.0
    shuffled = [pairs[i] for i in rng.permutation(n)]
    assert qwk(shuffled) == value


def test_qwk_validation():
    with pytest.raises(EmptyInputError):
        qwk([])
    with pytest.raises(ValidationError):
        qwk([(10, 0)])
    with pytest.raises(ValueError):
        OrdinalPair(predicted=-1, actual=0)


def test_ordinal_to_probability_bin_centres():
    assert ordinal_to_probability(0) == 0.05
    assert ordinal_to_probability(9) == 0.95
    with pytest.raises(ValidationError):
        ordinal_to_probability(10)
