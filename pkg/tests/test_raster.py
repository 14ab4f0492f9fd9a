#!/usr/bin/env python

"""Tests for `firescope_kit.raster`."""

import numpy as np
import pytest

from firescope_kit.errors import DegeneratePopulationError, EmptyInputError, ValidationError
from firescope_kit.raster import (
    BinaryMask,
    Raster,
    apply_quintile,
    discretize_mean_risk,
    finite_diff,
    fit_quintile,
    match_range,
    match_range_pair,
    raster_mean,
)


def row(values):
    return Raster(values=[values])


def rank_oracle(population):
    """Average-rank position (r - 0.5) / n of every population member, by counting."""
    n = len(population)
    out = []
    for v in population:
        below = sum(1 for x in population if x < v)
        equal = sum(1 for x in population if x == v)
        rank = below + (equal + 1) / 2.0
        out.append((rank - 0.5) / n)
    return out


# ---- raster type ----


def test_from_sequence_is_row_major():
    r = Raster.from_sequence(3, 2, [1, 2, 3, 4, 5, 6])
    assert r.width == 3 and r.height == 2
    assert r.values[1, 0] == 4


def test_from_sequence_length_mismatch():
    with pytest.raises(ValidationError):
        Raster.from_sequence(2, 2, [1, 2, 3])


def test_masked_values_may_be_nan_but_valid_may_not():
    Raster(values=[[np.nan, 1.0]], nodata_mask=[[True, False]])
    with pytest.raises(ValueError):
        Raster(values=[[np.nan, 1.0]])


def test_raster_is_immutable():
    r = row([1.0, 2.0])
    with pytest.raises(ValueError):
        r.values[0, 0] = 5.0


def test_raster_equality_ignores_masked_pixels():
    a = Raster(values=[[1.0, 7.0]], nodata_mask=[[False, True]])
    b = Raster(values=[[1.0, -3.0]], nodata_mask=[[False, True]])
    assert a == b


def test_binary_mask_from_raster_uses_threshold_and_validity():
    r = Raster(values=[[0.2, 0.5, 0.9]], nodata_mask=[[False, False, True]])
    assert BinaryMask.from_raster(r).bits.tolist() == [[False, True, False]]


# ---- quintile transform ----


def test_quintile_hand_values():
    t = fit_quintile([10, 20, 30, 40])
    out = apply_quintile(t, row([10.0, 40.0, 5.0, 50.0]))
    assert out.values[0].tolist() == pytest.approx([0.125, 0.875, 0.0, 1.0], abs=1e-12)


def test_quintile_ties_take_average_rank():
    t = fit_quintile([5, 5, 5, 5, 9])
    # average rank 2.5 -> (2.5 - 0.5) / 5
    assert apply_quintile(t, row([5.0])).values[0, 0] == pytest.approx(0.4, abs=1e-12)
    assert apply_quintile(t, row([9.0])).values[0, 0] == pytest.approx(0.9, abs=1e-12)


def test_quintile_needs_two_distinct_values():
    with pytest.raises(DegeneratePopulationError):
        fit_quintile([3.0, 3.0, 3.0])
    with pytest.raises(DegeneratePopulationError):
        fit_quintile([1.0])


def test_quintile_is_monotone_on_increasing_input():
    population = np.linspace(-3.0, 7.0, 25)
    t = fit_quintile(population)
    out = apply_quintile(t, row(np.sort(population))).values[0]
    assert np.all(np.diff(out) > 0)


@pytest.mark.parametrize("seed", range(10))
def test_quintile_matches_rank_oracle(seed):
    rng = np.random.default_rng(seed)
    population = rng.integers(0, 20, size=60).astype(float)
    t = fit_quintile(population)
    out = apply_quintile(t, row(population)).values[0]
    assert out.tolist() == pytest.approx(rank_oracle(population.tolist()), abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_quintile_output_bounded_and_monotone(seed):
    rng = np.random.default_rng(seed)
    t = fit_quintile(rng.normal(size=200))
    probe = np.sort(rng.normal(scale=3.0, size=500))
    out = apply_quintile(t, row(probe)).values[0]
    assert out.min() >= 0.0 and out.max() <= 1.0
    assert np.all(np.diff(out) >= 0)


def test_quintile_on_large_population_is_centred():
    population = np.random.default_rng(1).uniform(size=2000)
    t = fit_quintile(population)
    out = apply_quintile(t, row(population))
    assert abs(raster_mean(out) - 0.5) < 0.01


def test_quintile_keeps_nodata():
    t = fit_quintile([0.0, 1.0, 2.0])
    r = Raster(values=[[1.0, 99.0]], nodata_mask=[[False, True]])
    out = apply_quintile(t, r)
    assert out.nodata_mask.tolist() == [[False, True]]


# ---- range matching ----


def test_match_range_endpoints():
    assert match_range(row([-1.0, 1.0])).values[0].tolist() == [0.0, 1.0]


def test_match_range_affine():
    assert match_range(row([0.2, 0.4, 0.6])).values[0].tolist() == pytest.approx([0.0, 0.5, 1.0])


def test_match_range_constant_is_zero():
    assert match_range(row([0.3, 0.3])).values[0].tolist() == [0.0, 0.0]


def test_match_range_idempotent_on_unit_range():
    r = row([0.0, 0.25, 1.0])
    assert match_range(r) == r


def test_match_range_all_masked():
    with pytest.raises(EmptyInputError):
        match_range(Raster(values=[[1.0]], nodata_mask=[[True]]))


def test_match_range_pair_keeps_offset():
    a, b = match_range_pair(row([0.0, 0.5]), row([0.5, 1.0]))
    assert a.values[0].tolist() == [0.0, 0.5]
    assert b.values[0].tolist() == [0.5, 1.0]


# ---- finite differences ----


def test_finite_diff_row():
    r = Raster(values=[[0.0, 1.0, 3.0], [0.0, 1.0, 3.0]])
    dx, dy = finite_diff(r)
    assert dx.values[0].tolist() == [1.0, 2.0]
    assert dy.values.tolist() == [[0.0, 0.0, 0.0]]


def test_finite_diff_hand_2x2():
    dx, dy = finite_diff(Raster(values=[[0.0, 2.0], [1.0, 5.0]]))
    assert dx.values.tolist() == [[2.0], [4.0]]
    assert dy.values.tolist() == [[1.0, 3.0]]


def test_finite_diff_needs_two_pixels_per_axis():
    with pytest.raises(ValidationError):
        finite_diff(row([1.0, 2.0, 3.0]))


def test_finite_diff_shift_invariant():
    rng = np.random.default_rng(3)
    base = rng.integers(-64, 64, size=(8, 9)) / 64.0
    a = finite_diff(Raster(values=base))
    b = finite_diff(Raster(values=base + 0.25))
    assert np.array_equal(a[0].values, b[0].values)
    assert np.array_equal(a[1].values, b[1].values)


def test_finite_diff_propagates_mask():
    mask = np.zeros((3, 3), dtype=bool)
    mask[1, 1] = True
    dx, dy = finite_diff(Raster(values=np.arange(9.0).reshape(3, 3), nodata_mask=mask))
    assert dx.nodata_mask[1].tolist() == [True, True]
    assert dy.nodata_mask[:, 1].tolist() == [True, True]


# ---- ordinal discretization ----


@pytest.mark.parametrize(
    "values, expected",
    [([0.0, 0.0], 0), ([1.0, 1.0], 9), ([0.5, 0.6], 5), ([0.09, 0.09], 0), ([0.1, 0.1], 1)],
)
def test_discretize_mean_risk(values, expected):
    assert discretize_mean_risk(row(values)) == expected


def test_discretize_ignores_masked_pixels():
    r = Raster(values=[[0.95, 0.0]], nodata_mask=[[False, True]])
    assert discretize_mean_risk(r) == 9


def test_discretize_all_masked():
    with pytest.raises(EmptyInputError):
        discretize_mean_risk(Raster(values=[[0.5]], nodata_mask=[[True]]))


def test_discretize_rejects_out_of_range():
    with pytest.raises(ValidationError):
        discretize_mean_risk(row([1.5]))


def test_discretize_is_permutation_invariant():
    rng = np.random.default_rng(7)
    values = rng.uniform(size=64)
    a = discretize_mean_risk(row(values))
    b = discretize_mean_risk(row(rng.permutation(values)))
    assert a == b
