import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from axisym.errors import ValidationError
from axisym.estimator import SymmetryProfile
from axisym.geometry import AxisAngle
from axisym.peaks import (
    ampd_minima,
    axes_from_profile,
    dominant_axis,
    match_axes,
    scalogram,
)


def cosine(q, n=200):
    i = np.arange(n)
    return 1 - np.cos(q * 2 * np.pi * i / n)


def as_profile(values):
    # profile values live in [0, 1]
    return SymmetryProfile.from_values(np.asarray(values) / 2)


def test_cosine_four_minima():
    r = ampd_minima(cosine(4), circular=True)
    np.testing.assert_array_equal(r.minima_indices, [0, 50, 100, 150])
    # raw circular minima are reported mod pi without merging
    assert sorted(round(d, 9) for d in r.degrees) == [0.0, 0.0, 90.0, 90.0]


def test_constant_signal_has_no_minima():
    assert len(ampd_minima(np.full(50, 0.3))) == 0
    assert len(axes_from_profile(as_profile(np.full(200, 0.1)))) == 0


def test_short_or_bad_signal_rejected():
    with pytest.raises(ValidationError):
        ampd_minima(np.arange(7.0))
    with pytest.raises(ValidationError):
        ampd_minima([0, 1, 2, np.nan, 4, 5, 6, 7])


def test_scalogram_definition():
    s = np.array([3, 1, 3, 2, 0, 2, 3, 3, 3.0])
    m = scalogram(s, circular=False, max_scale=2)
    assert m.shape == (2, 9)
    # scale 1: strict local minima at 1 and 4; scale 2: index 4 only (1 lacks a left neighbour)
    np.testing.assert_array_equal(np.flatnonzero(m[0] == 0), [1, 4])
    np.testing.assert_array_equal(np.flatnonzero(m[1] == 0), [4])


def test_linear_boundary_not_a_minimum():
    s = np.linspace(0, 1, 20)
    r = ampd_minima(s, circular=False)
    assert len(r) == 0 and r.minima_angles == []
    assert len(ampd_minima(s, circular=True)) == 1


def test_minima_of_signal_are_maxima_of_negation():
    # AMPD on -(-s) is AMPD on s; both views must agree
    s = cosine(3) + 0.05 * np.sin(np.arange(200) * 0.7)
    a = ampd_minima(s)
    b = ampd_minima(-(-s))
    np.testing.assert_array_equal(a.minima_indices, b.minima_indices)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 199), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_shift_equivariance(shift, q, seed):
    s = cosine(q) + np.random.default_rng(seed).uniform(0, 0.2, 200)
    a = ampd_minima(s).minima_indices
    b = ampd_minima(np.roll(s, shift)).minima_indices
    np.testing.assert_array_equal(np.sort((a + shift) % 200), b)


@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_cosine_family_gives_q_axes(q):
    # 1 - cos(2 q theta) has q minima on the half circle
    r = axes_from_profile(as_profile(cosine(2 * q)))
    assert len(r) == q
    expected = [180 * j / q for j in range(q)]
    # 200 / (2q) need not be an integer, so minima sit at the nearest grid point
    np.testing.assert_allclose(sorted(r.degrees), expected, atol=360 / 200 / 2)
    assert all(0 <= a.theta < math.pi for a in r.minima_angles)


def test_two_basins_reported_once_each():
    v = cosine(4)
    r = axes_from_profile(as_profile(v))
    assert len(r) == 2
    np.testing.assert_array_equal(r.minima_indices, [0, 50])
    assert list(r.minima_indices) == sorted(r.minima_indices)


def test_odd_grid_merges_antipodal_minima():
    n = 201
    theta = 2 * np.pi * np.arange(n) / n
    v = 1 - np.cos(2 * (theta - 0.3))
    r = axes_from_profile(as_profile(v))
    assert len(r) == 1
    assert abs(r.degrees[0] - math.degrees(0.3)) <= 360 / n


def test_plateau_minimum_still_detected():
    # profile values are ratios of small integers, so flat bottoms happen
    v = np.round(cosine(2) * 20) / 20
    r = axes_from_profile(as_profile(v))
    assert len(r) == 1
    assert min(r.degrees[0], 180 - r.degrees[0]) <= 360 / 200 * 4


def test_dominant_axis():
    v = 0.9 * cosine(4) + np.where(np.arange(200) % 100 == 50, 0.0, 0.01)
    r = axes_from_profile(as_profile(v))
    assert dominant_axis(r).degrees == pytest.approx(90)
    with pytest.raises(ValidationError):
        dominant_axis(ampd_minima(np.full(10, 1.0)))


def test_match_axes_examples():
    t = [AxisAngle.from_degrees(45), AxisAngle.from_degrees(135)]
    assert match_axes(t, t).errors == [0, 0]
    m = match_axes([AxisAngle.from_degrees(44), AxisAngle.from_degrees(136)], t)
    np.testing.assert_allclose(np.degrees(m.errors), [1, 1])
    assert math.degrees(m.mean_error) == pytest.approx(1)
    m = match_axes([math.radians(10)], [0.0, math.pi / 2])
    assert m.pairs[0][1].theta == 0.0
    assert math.degrees(m.errors[0]) == pytest.approx(10)
    # many-to-one: both estimates may pick the same true axis
    m = match_axes([math.radians(1), math.radians(179)], [0.0, math.pi / 2])
    assert m.pairs[0][1] == m.pairs[1][1]
    with pytest.raises(ValidationError):
        match_axes([], t)
