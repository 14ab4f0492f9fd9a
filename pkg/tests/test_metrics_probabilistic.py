#!/usr/bin/env python

"""Tests for `firescope_kit.metrics.probabilistic`."""

import math

import numpy as np
import pytest

from firescope_kit.errors import DimensionMismatchError, EmptyInputError, ValidationError
from firescope_kit.metrics.probabilistic import brier, ece, reliability_curve, roc_auc, roc_curve, tile_brier


def pair_count_auc(pos, neg):
    pos, neg = np.asarray(pos)[:, None], np.asarray(neg)[None, :]
    wins = np.count_nonzero(pos > neg) + 0.5 * np.count_nonzero(pos == neg)
    return wins / (pos.size * neg.size)


# ---- brier ----


def test_brier_hand_values():
    assert brier([1.0, 0.0], [1, 0]) == 0.0
    assert brier([0.0, 1.0], [1, 0]) == 1.0
    assert brier([0.8, 0.4], [1, 0]) == pytest.approx(0.1)


def test_brier_validation():
    with pytest.raises(DimensionMismatchError):
        brier([0.5], [1, 0])
    with pytest.raises(EmptyInputError):
        brier([], [])
    with pytest.raises(ValidationError):
        brier([1.2], [1])
    with pytest.raises(ValidationError):
        brier([0.5], [2])


def test_tile_brier():
    assert tile_brier(0.7, 1) == pytest.approx(0.09)


# ---- roc auc ----


def test_auc_perfect_and_tied():
    assert roc_auc([0.9, 0.8], [0.1, 0.2]) == 1.0
    assert roc_auc([0.5], [0.5]) == 0.5


def test_auc_needs_both_sets():
    with pytest.raises(EmptyInputError):
        roc_auc([], [0.1])
    with pytest.raises(EmptyInputError):
        roc_auc([0.1], [])


@pytest.mark.parametrize("seed", range(100))
def test_auc_matches_pair_counting(seed):
    rng = np.random.default_rng(seed)
    n1, n0 = rng.integers(1, 1001, size=2)
    if seed % 2:
        # coarse grid so ties are common
        pos, neg = rng.integers(0, 30, size=n1) / 29.0, rng.integers(0, 30, size=n0) / 29.0
    else:
        pos, neg = rng.uniform(size=n1), rng.uniform(size=n0)
    assert roc_auc(pos, neg) == pytest.approx(pair_count_auc(pos, neg), abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_auc_complement_without_ties(seed):
    rng = np.random.default_rng(seed)
    pos, neg = rng.uniform(size=40), rng.uniform(size=55)
    assert roc_auc(pos, neg) + roc_auc(neg, pos) == pytest.approx(1.0, abs=1e-12)


def test_roc_curve_runs_from_origin_to_corner():
    points = roc_curve([0.9, 0.6], [0.6, 0.1])
    assert (points[0].fpr, points[0].tpr) == (0.0, 0.0)
    assert math.isinf(points[0].threshold)
    assert (points[-1].fpr, points[-1].tpr) == (1.0, 1.0)
    assert [p.threshold for p in points[1:]] == [0.9, 0.6, 0.1]
    assert [(p.fpr, p.tpr) for p in points[1:]] == [(0.0, 0.5), (0.5, 1.0), (1.0, 1.0)]


# ---- ece ----


def test_ece_hand_case():
    assert ece([0.1, 0.1, 0.9, 0.9], [0, 1, 1, 1]) == pytest.approx(0.25, abs=1e-12)


def test_ece_extremes():
    assert ece([1.0] * 4, [0] * 4) == 1.0
    assert ece([0.5, 0.5], [0, 1]) == 0.0


def test_ece_bins_right_closed_at_one():
    rows = reliability_curve([1.0, 0.0], [1, 0], bins=15)
    assert rows[-1].count == 1 and rows[0].count == 1
    assert sum(r.count for r in rows) == 2
    assert rows[5].mean_confidence is None


@pytest.mark.parametrize("seed", range(5))
def test_ece_vanishes_with_observed_frequencies(seed):
    rng = np.random.default_rng(seed)
    probs = rng.uniform(size=300)
    labels = (rng.uniform(size=300) < probs).astype(int)
    rows = reliability_curve(probs, labels)
    edges = np.linspace(0.0, 1.0, 16)
    idx = np.digitize(probs, edges[1:-1])
    calibrated = [rows[b].observed_frequency for b in idx]
    assert ece(calibrated, labels) == pytest.approx(0.0, abs=1e-12)
    assert ece(probs, labels) > 0.0


@pytest.mark.parametrize("seed", range(10))
def test_metric_bounds(seed):
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        n = int(rng.integers(2, 50))
        p = rng.uniform(size=n)
        y = rng.integers(0, 2, size=n)
        y[:2] = (0, 1)
        assert 0.0 <= brier(p, y) <= 1.0
        assert 0.0 <= ece(p, y) <= 1.0
        assert 0.0 <= roc_auc(p[y == 1], p[y == 0]) <= 1.0
