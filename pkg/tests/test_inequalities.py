# tests/test_inequalities.py
# Bernstein, Young-type, convolution and dilation checks

from fractions import Fraction

import pytest

from amalgam.core.exceptions import NotBandLimited
from amalgam.services.generator_service import generator_service
from amalgam.services.inequality_service import inequality_service


def test_band_limited_function_is_band_limited(grid):
    f = inequality_service.band_limited(grid, 4.0)
    inequality_service.require_band_limit(f, 4.0)


def test_gaussian_is_not_band_limited(grid):
    with pytest.raises(NotBandLimited):
        inequality_service.require_band_limit(generator_service.gaussian(grid), 0.5)


@pytest.mark.parametrize("u, v", [(Fraction(1), Fraction(0)), (Fraction(1), Fraction(1, 2))])
def test_bernstein_slope(grid, u, v):
    report = inequality_service.bernstein_sweep(grid, [2.0, 4.0, 8.0, 16.0], u, v)
    assert report.name == "bernstein"
    assert report.predicted_exponent == pytest.approx(float(u - v))
    assert report.fitted_exponent == pytest.approx(report.predicted_exponent, rel=0.05)
    assert report.max_ratio == max(report.ratios)


def test_bernstein_needs_p_at_most_q(grid):
    f = inequality_service.band_limited(grid, 4.0)
    with pytest.raises(ValueError):
        inequality_service.check_bernstein(f, 4.0, Fraction(1, 2), Fraction(1))


def test_young_below_one(grid):
    report = inequality_service.young_sweep(grid, [1.0, 2.0, 4.0, 8.0], Fraction(2))
    assert report.name == "young-sub1"
    assert report.parameters == [2.0, 4.0, 8.0, 16.0]
    assert report.predicted_exponent == pytest.approx(1.0)
    assert all(ratio > 0 for ratio in report.ratios)


def test_young_rejects_p_at_least_one(grid):
    f = inequality_service.band_limited(grid, 2.0)
    with pytest.raises(ValueError):
        inequality_service.check_young_sub1(f, f, Fraction(1), 2.0, 2.0)


def test_convolution_closure_is_recorded(grid):
    f = generator_service.gaussian(grid)
    report = inequality_service.check_convolution_closure([(f, f)], Fraction(1))
    assert report.name == "convolution-closure"
    assert len(report.ratios) == 1
    assert report.ratios[0] > 0


def test_dilation_bound_is_relative_to_the_undilated_function(grid):
    report = inequality_service.check_dilation_bound(grid, Fraction(1, 2), [1.0, 0.5, 0.25])
    assert report.ratios[0] == pytest.approx(1.0)
    assert report.parameters == [1.0, 0.5, 0.25]
