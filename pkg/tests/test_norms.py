# tests/test_norms.py
# Space norms on the grid and their cross-checks

import math
from fractions import Fraction

import numpy as np
import pytest

from amalgam.core.config import settings
from amalgam.core.exceptions import UnsupportedSpace
from amalgam.models.grid import GridFunction
from amalgam.models.spaces import SpaceSpec
from amalgam.services.bank_service import bank_service
from amalgam.services.generator_service import generator_service
from amalgam.services.grid_service import grid_service
from amalgam.services.norm_service import norm_service


def norm(text, f):
    return norm_service.space_norm(SpaceSpec.parse(text), f)


def test_lebesgue_norm_of_gaussian(grid):
    result = norm("L[r=2,s=0]", generator_service.gaussian(grid))
    assert result.value == pytest.approx(math.pi ** 0.25, rel=1e-12)
    assert result.space == "L[r=2,s=0]"
    assert result.grid == "d=1,N=4096,P=16"
    assert not result.truncation_warning


def test_sup_norm(grid):
    assert norm("L[r=inf,s=0]", generator_service.gaussian(grid)).value == pytest.approx(1.0)


def test_sobolev_weight(grid):
    # ||f||_2^2 + ||f'||_2^2 = (3/2) sqrt(pi) for the unit Gaussian
    value = norm("L[r=2,s=1]", generator_service.gaussian(grid)).value
    assert value == pytest.approx(math.sqrt(1.5 * math.sqrt(math.pi)), rel=1e-10)


def test_fourier_lebesgue_norm(grid):
    f = generator_service.gaussian(grid)
    expected = math.sqrt(2 * math.pi) * math.pi ** 0.25
    assert norm_service.fourier_lebesgue_norm(f, Fraction(1, 2)) == pytest.approx(expected, rel=1e-10)


def test_wiener_plancherel_band(corpus, uniform_bank):
    lower = math.sqrt(bank_service.bank_lower_constant(uniform_bank)) - 1e-8
    for name, f in corpus.items():
        ratio = norm("W[p=2,q=2,s=0]", f).value / grid_service.l2_norm(f)
        assert lower <= ratio <= 1 + 1e-8, name


def test_modulation_and_wiener_agree_at_two(corpus):
    for f in corpus.values():
        assert norm("M[p=2,q=2,s=0]", f).value == pytest.approx(norm("W[p=2,q=2,s=0]", f).value, rel=1e-10)


def test_single_block_norms(grid, uniform_bank):
    # F^-1 sigma_0 meets only blocks -1, 0, 1; W_{p,inf} and M_{p,inf} see the largest
    f = generator_service.block(grid)
    result = norm("W[p=1,q=inf,s=0]", f)
    assert result.diagnostics.bank == "uniform"
    assert 1 <= result.diagnostics.active_blocks <= 3
    assert norm("M[p=1,q=inf,s=0]", f).value <= result.value + 1e-12


def test_weights_grow_with_modulation(grid):
    f = generator_service.modulated_gaussian(grid)
    plain = norm("W[p=2,q=2,s=0]", f).value
    weighted = norm("W[p=2,q=2,s=1]", f).value
    assert 2 * plain < weighted < 5 * plain


def test_besov_and_triebel_use_the_dyadic_bank(grid):
    f = generator_service.shell(grid)
    assert norm("B[p=2,q=2,s=0]", f).diagnostics.bank == "dyadic"
    assert norm("F[p=2,q=2,s=0]", f).diagnostics.bank == "dyadic"
    # B_{2,2} and F_{2,2} coincide
    assert norm("B[p=2,q=2,s=0]", f).value == pytest.approx(norm("F[p=2,q=2,s=0]", f).value, rel=1e-10)


def test_alpha_modulation_norm(grid):
    result = norm("Ma[p=2,q=2,s=0,alpha=1/2]", generator_service.gaussian(grid))
    assert result.diagnostics.bank == "alpha"
    assert 0 < result.value < math.inf


def test_local_hardy(grid):
    f = generator_service.gaussian(grid)
    result = norm("h[r=2,s=0]", f)
    assert result.diagnostics.t_values[0] == 1.0
    assert result.diagnostics.t_values[-1] <= f.grid.spacing
    assert result.diagnostics.lower_bound == pytest.approx(grid_service.l2_norm(f), rel=1e-3)
    assert result.diagnostics.lower_bound <= result.value + 1e-12


def test_sequence_spaces_have_no_grid_norm(grid):
    with pytest.raises(UnsupportedSpace):
        norm("l0[q=1,s=0]", generator_service.gaussian(grid))


def test_truncation_is_flagged(grid):
    rng = np.random.Generator(np.random.Philox(key=5))
    noise = GridFunction(grid=grid, samples=rng.standard_normal(grid.shape))
    result = norm("W[p=2,q=2,s=0]", noise)
    assert result.truncation_warning
    assert result.truncation_tail >= settings.TRUNCATION_TOL


def test_stft_crosscheck(small_grid):
    f = generator_service.gaussian(small_grid)
    report = norm_service.stft_norm_crosscheck(f, Fraction(1, 2), Fraction(1, 2))
    assert report.stride == 2
    assert report.band == settings.STFT_BAND
    assert 0 < report.wiener_ratio < math.inf
    assert 0 < report.modulation_ratio < math.inf


class TestCompactSupport:
    def test_compactly_supported_bump(self, grid):
        x = grid_service.coordinates(grid)
        bump = grid_service.evaluate_profile(grid_service.profile(0.5, 1.0), np.abs(x))
        f = GridFunction(grid=grid, samples=bump * np.exp(3j * x))
        report = norm_service.compact_support_equivalence(f, Fraction(1), Fraction(1, 2))
        assert report.spatially_compact
        assert set(report.ratios) == {"M/W", "W/FL", "M/FL"}
        assert set(report.norms) == {"M", "W", "FL"}

    def test_gaussian_is_not_compact(self, grid):
        report = norm_service.compact_support_equivalence(generator_service.gaussian(grid), Fraction(1, 2), Fraction(1, 2))
        assert not report.spatially_compact
        assert set(report.ratios) == {"M/W"}
        assert report.ratios["M/W"] == pytest.approx(1.0, rel=1e-10)
