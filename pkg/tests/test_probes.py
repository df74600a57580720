# tests/test_probes.py
# Extremal families, growth fits and probe corroboration

import math
from fractions import Fraction

import numpy as np
import pytest

from amalgam.core.exceptions import DegenerateFit, GridTooSmall
from amalgam.models.grid import GridSpec
from amalgam.models.probes import FamilySpec
from amalgam.models.spaces import EmbeddingQuery, FamilyKind, SpaceSpec, VerdictStatus
from amalgam.services.oracle_service import oracle_service
from amalgam.services.probe_service import FAILS_GROWTH, probe_service

FINE = GridSpec(d=1, n=4096, period=Fraction(64))
POWERS = [1, 2, 4, 8, 16]


class TestFitGrowth:
    def test_exact_power_law(self):
        xs = [1.0, 2.0, 4.0, 8.0, 16.0]
        slope, intercept, r2 = probe_service.fit_growth(xs, [3 * x ** 1.5 for x in xs])
        assert slope == pytest.approx(1.5)
        assert intercept == pytest.approx(math.log(3))
        assert r2 == pytest.approx(1.0)

    def test_constant_ratios(self):
        slope, _, r2 = probe_service.fit_growth([1, 2, 4, 8], [2.0] * 4)
        assert slope == pytest.approx(0.0, abs=1e-12)
        assert r2 == 1.0

    @pytest.mark.parametrize(
        "xs, ys",
        [
            ([1, 2, 4], [1, 2, 4]),
            ([1, 2, 2, 8], [1, 2, 3, 4]),
            ([1, 1.5, 2, 3], [1, 2, 3, 4]),
            ([1, 2, 4, 8], [1, 0, 3, 4]),
            ([1, 2, 4, 8], [1, 2, 3]),
        ],
    )
    def test_degenerate(self, xs, ys):
        with pytest.raises(DegenerateFit):
            probe_service.fit_growth(xs, ys)


class TestFamilySpec:
    def test_needs_four_points(self):
        with pytest.raises(ValueError):
            FamilySpec(kind=FamilyKind.MODULATED_BUMP, sweep=[1, 2, 4])

    def test_needs_increasing_sweep(self):
        with pytest.raises(ValueError):
            FamilySpec(kind=FamilyKind.MODULATED_BUMP, sweep=[1, 4, 2, 8])

    def test_rational_sweep(self):
        spec = FamilySpec(kind=FamilyKind.SCALED_BUMP, sweep=["1/2", 1, 2, 4])
        assert spec.sweep[0] == Fraction(1, 2)


class TestFamilies:
    def test_modulated_bump_slope(self):
        spec = FamilySpec(kind=FamilyKind.MODULATED_BUMP, sweep=POWERS)
        xs, norms = probe_service.family_norms(spec, SpaceSpec.parse("W[p=2,q=2,s=1]"), FINE)
        assert xs == pytest.approx([math.sqrt(1 + k * k) for k in POWERS])
        assert probe_service.fit_growth(xs, norms)[0] == pytest.approx(1.0, abs=1e-3)

    def test_scaled_bump_slope(self, grid):
        spec = FamilySpec(kind=FamilyKind.SCALED_BUMP, sweep=POWERS)
        xs, norms = probe_service.family_norms(spec, SpaceSpec.parse("L[r=2,s=0]"), grid)
        assert probe_service.fit_growth(xs, norms)[0] == pytest.approx(-0.5, rel=0.02)

    def test_scaled_bump_slope_at_low_frequency(self):
        spec = FamilySpec(kind=FamilyKind.SCALED_BUMP, sweep=["1/16", "1/8", "1/4", "1/2"])
        xs, norms = probe_service.family_norms(spec, SpaceSpec.parse("L[r=2,s=0]"), GridSpec(d=1, n=8192, period=Fraction(128)))
        assert xs == pytest.approx([1 / 16, 1 / 8, 1 / 4, 1 / 2])
        assert probe_service.fit_growth(xs, norms)[0] == pytest.approx(-0.5, rel=0.02)

    def test_low_frequency_dilation_needs_a_long_period(self, grid):
        spec = FamilySpec(kind=FamilyKind.SCALED_BUMP, sweep=["1/16", "1/8", "1/4", "1/2"])
        with pytest.raises(GridTooSmall):
            probe_service.generate_family(spec, grid)

    def test_modulation_outside_bank(self, grid):
        spec = FamilySpec(kind=FamilyKind.MODULATED_BUMP, sweep=[1, 2, 4, 200])
        with pytest.raises(GridTooSmall):
            probe_service.generate_family(spec, grid)

    def test_dyadic_shell_parameters(self, grid):
        spec = FamilySpec(kind=FamilyKind.DYADIC_SHELL_SUM, sweep=[1, 2, 3, 4], theta=-1)
        members = probe_service.generate_family(spec, grid)
        assert [member.parameter for member in members] == [2.0, 4.0, 8.0, 16.0]

    def test_translates_must_fit_in_the_period(self, grid):
        spec = FamilySpec(kind=FamilyKind.SPREAD_TRANSLATES, sweep=[1, 2, 4, 8], spread=100)
        with pytest.raises(GridTooSmall):
            probe_service.generate_family(spec, grid)

    def test_alpha_families_need_alpha(self, grid):
        spec = FamilySpec(kind=FamilyKind.ALPHA_CENTER_TRANSLATES, sweep=[1, 2, 4, 8])
        with pytest.raises(GridTooSmall):
            probe_service.generate_family(spec, grid)

    def test_approx_identity_functional_grows(self):
        for v in (Fraction(1, 2), Fraction(1)):
            values = probe_service.approx_identity_functional(1, v, list(range(1, 11)))
            assert all(b > a for a, b in zip(values, values[1:]))
            assert values[-1] >= 2 * values[0]

    def test_approx_identity_functional_needs_finite_q(self):
        with pytest.raises(ValueError):
            probe_service.approx_identity_functional(1, Fraction(0), [1, 2, 3, 4])


class TestRademacher:
    @pytest.fixture(scope="class")
    def spec(self):
        return FamilySpec(kind=FamilyKind.RADEMACHER_SHELL, sweep=[1, 2, 3, 4], trials=3, seed=11)

    def test_shell_cells(self, spec, grid):
        assert probe_service.shell_cells(spec, grid, 2) == [(4,), (5,), (6,), (7,)]

    def test_one_member_per_trial(self, spec, grid):
        members = probe_service.generate_family(spec, grid)
        assert len(members) == 12
        assert [member.parameter for member in members[::3]] == [2.0, 4.0, 8.0, 16.0]
        assert [member.trial for member in members[:3]] == [0, 1, 2]

    def test_seeded(self, spec, grid):
        first = probe_service.generate_family(spec, grid)
        second = probe_service.generate_family(spec, grid)
        for a, b in zip(first, second):
            assert np.array_equal(a.function.samples, b.function.samples)

    def test_trials_collapse_to_moments(self, spec, grid):
        xs, norms = probe_service.family_norms(spec, SpaceSpec.parse("L[r=2,s=0]"), grid)
        assert xs == [2.0, 4.0, 8.0, 16.0]
        assert len(norms) == 4


def test_moment_exponent():
    assert probe_service.moment_exponent(SpaceSpec.parse("L[r=4,s=0]")) == 4.0
    assert probe_service.moment_exponent(SpaceSpec.parse("W[p=inf,q=1]")) == 1.0
    assert probe_service.moment_exponent(SpaceSpec.parse("l0[q=2]")) == 1.0


class TestRunProbe:
    def test_failing_embedding_grows(self):
        spec = FamilySpec(kind=FamilyKind.MODULATED_BUMP, sweep=POWERS)
        report = probe_service.run_probe(spec, SpaceSpec.parse("L[r=2,s=0]"), SpaceSpec.parse("W[p=2,q=2,s=1]"), FINE)
        assert report.verdict.status == VerdictStatus.FAILS
        assert report.loglog_slope == pytest.approx(1.0, abs=1e-3)
        assert report.growth >= FAILS_GROWTH
        assert report.verdict_corroborated

    def test_holding_embedding_stays_flat(self):
        spec = FamilySpec(kind=FamilyKind.MODULATED_BUMP, sweep=POWERS)
        report = probe_service.run_probe(spec, SpaceSpec.parse("L[r=2,s=0]"), SpaceSpec.parse("W[p=2,q=2]"), FINE)
        assert report.verdict.status == VerdictStatus.HOLDS
        assert report.holds_spread == pytest.approx(1.0, abs=1e-6)
        assert report.verdict_corroborated

    def test_uncatalogued_pair_is_uncorroborated(self):
        spec = FamilySpec(kind=FamilyKind.MODULATED_BUMP, sweep=POWERS)
        report = probe_service.run_probe(spec, SpaceSpec.parse("L[r=2,s=0]"), SpaceSpec.parse("B[p=2,q=2,s=0]"), FINE)
        assert report.verdict is None
        assert not report.verdict_corroborated


def test_corroboration_instances_match_the_oracle():
    instances = probe_service.corroboration_instances()
    assert len(instances) == 10
    assert sum(item.expected == VerdictStatus.FAILS for item in instances) == 5
    for item in instances:
        verdict = oracle_service.decide(EmbeddingQuery(src=item.src, dst=item.dst, d=1))
        assert verdict.status == item.expected, item.name


@pytest.mark.slow
def test_corroboration_instances_probe():
    for item in probe_service.corroboration_instances():
        report = probe_service.run_probe(item.family, item.src, item.dst, item.grid)
        assert report.verdict.status == item.expected
        if item.expected == VerdictStatus.FAILS:
            assert report.growth >= FAILS_GROWTH, item.name
