# tests/test_regions.py
# Region scans, boundaries and their renderings

from fractions import Fraction

import pytest

from amalgam.core.exceptions import AmalgamException, UsageException
from amalgam.services.region_service import (
    ALPHA_DISCREPANCY,
    SIGMA1,
    TAU1,
    region_service,
)

QUARTER = Fraction(1, 4)


def label_at(scan, u, v):
    return scan.cell(int(Fraction(u) / scan.step), int(Fraction(v) / scan.step)).label


def flags_at(scan, u, v):
    return scan.cell(int(Fraction(u) / scan.step), int(Fraction(v) / scan.step)).boundary_flags


@pytest.mark.parametrize(
    "u, v, tau1, sigma1, tau1_ties, sigma1_ties",
    [
        (0, 0, 1, 3, [1], [3]),
        (1, 1, 3, 1, [3], [1]),
        (0, 1, 2, 1, [2], [1, 3]),
        (1, 0, 1, 2, [1, 3], [2]),
        (Fraction(1, 2), Fraction(1, 2), 1, 1, [1, 2, 3], [1, 2, 3]),
    ],
)
def test_classify_indicator_region(u, v, tau1, sigma1, tau1_ties, sigma1_ties):
    region = region_service.classify_indicator_region(Fraction(u), Fraction(v))
    assert (region.tau1, region.sigma1) == (tau1, sigma1)
    assert region.tau1_ties == tau1_ties
    assert region.sigma1_ties == sigma1_ties


def test_lattice_covers_the_window():
    points = region_service.lattice(QUARTER)
    assert points[0] == 0 and points[-1] == 2
    assert len(points) == 9


@pytest.mark.parametrize("step", [Fraction(2, 3), Fraction(0), Fraction(-1, 4)])
def test_lattice_rejects_bad_steps(step):
    with pytest.raises(UsageException):
        region_service.lattice(step)


@pytest.mark.parametrize("kind", [TAU1, SIGMA1])
def test_indicator_boundaries_match_symbolic_segments(kind):
    step = Fraction(1, 16)
    scan = region_service.scan_theorem_region(kind, {}, step)
    distance = region_service.boundary_hausdorff(scan, region_service.symbolic_boundaries(kind))
    assert distance <= float(step)


def test_symbolic_boundaries_only_for_indicators():
    with pytest.raises(UsageException):
        region_service.symbolic_boundaries("sobolev-to-wiener")


def test_indicator_scan_flags_ties_and_boundaries():
    scan = region_service.scan_theorem_region(TAU1, {}, QUARTER)
    assert label_at(scan, 0, 0) == "(1)"
    assert label_at(scan, 0, 2) == "(2)"
    assert label_at(scan, 2, 0) == "(3)"
    flags = flags_at(scan, Fraction(1, 2), Fraction(1, 2))
    assert flags[0] == "boundary"
    assert {"tie:1-2", "tie:1-3", "tie:2-3"} <= set(flags)
    assert flags_at(scan, 0, 0) == []


def test_modulation_scan_with_fixed_source():
    scan = region_service.scan_theorem_region("modulation-to-wiener", {"p1": "1", "q1": "1"}, QUARTER)
    holds = [(cell.u, cell.v) for cell in scan.cells if cell.label == "Holds"]
    assert len(holds) == 25
    assert all(u <= 1 and v <= 1 for u, v in holds)
    assert label_at(scan, Fraction(3, 2), Fraction(1, 2)) == "Fails"
    assert label_at(scan, Fraction(1, 2), Fraction(3, 2)) == "Fails"
    assert "non-strict" in flags_at(scan, Fraction(1, 2), Fraction(1, 2))


def test_critical_smoothness_rule_lands_on_the_threshold():
    scan = region_service.scan_theorem_region("sobolev-to-wiener", {"s": "crit"}, QUARTER)
    assert label_at(scan, Fraction(1, 2), Fraction(1, 4)) == "Holds"
    assert "non-strict" in flags_at(scan, Fraction(1, 2), Fraction(1, 4))
    assert label_at(scan, Fraction(1, 4), Fraction(3, 4)) == "Fails"
    assert "strict" in flags_at(scan, Fraction(1, 4), Fraction(3, 4))
    assert label_at(scan, 1, 0) == "Holds"
    assert label_at(scan, 1, Fraction(1, 2)) == "Fails"
    # r < 1 is not a Sobolev space
    assert label_at(scan, Fraction(3, 2), Fraction(1, 2)) == "OutsideHypothesis"


def test_offset_rule_moves_off_the_threshold():
    scan = region_service.scan_theorem_region("sobolev-to-wiener", {"s": "crit+1/8"}, QUARTER)
    assert label_at(scan, Fraction(1, 4), Fraction(3, 4)) == "Holds"
    assert "strict" not in flags_at(scan, Fraction(1, 4), Fraction(3, 4))


def test_alpha_reading_discrepancy_labels():
    scan = region_service.scan_theorem_region(ALPHA_DISCREPANCY, {"alpha": "1/2"}, QUARTER)
    for cell in scan.cells:
        if cell.u <= cell.v:
            assert cell.label == "clause-1"
        else:
            assert cell.label in ("agree", "neither")
    assert label_at(scan, 1, 0) == "agree"
    assert label_at(scan, Fraction(1, 2), 0) == "neither"


@pytest.mark.parametrize(
    "theorem_id, params",
    [
        ("modulation-to-wiener", {"zz": "1"}),
        ("modulation-to-wiener", {"p1": "0"}),
        ("modulation-to-wiener", {"s": "crit*2"}),
        ("alpha-modulation-to-wiener", {}),
        ("sobolev-to-wiener", {"d": "two"}),
    ],
)
def test_scan_rejects_bad_parameters(theorem_id, params):
    with pytest.raises(UsageException):
        region_service.scan_theorem_region(theorem_id, params, QUARTER)


def test_scan_rejects_unknown_theorem():
    with pytest.raises(AmalgamException):
        region_service.scan_theorem_region("no-such-theorem", {}, QUARTER)


def test_parse_fixed_params():
    assert region_service.parse_fixed_params("p1=1, q1=inf,s=crit-1/4") == {"p1": "1", "q1": "inf", "s": "crit-1/4"}
    assert region_service.parse_fixed_params("") == {}
    with pytest.raises(UsageException):
        region_service.parse_fixed_params("p1")


class TestRendering:
    @pytest.fixture(scope="class")
    def scan(self):
        return region_service.scan_theorem_region("sobolev-to-wiener", {"s": "crit"}, QUARTER)

    def test_svg_is_stable(self, scan):
        first = region_service.emit_region_svg(scan)
        assert first == region_service.emit_region_svg(scan)
        assert first.startswith('<?xml version="1.0"')
        assert 'version="1.1"' in first

    def test_svg_has_one_group_per_label(self, scan):
        svg = region_service.emit_region_svg(scan)
        labels = {cell.label for cell in scan.cells}
        assert svg.count('class="region"') == len(labels)
        for label in labels:
            assert f'data-label="{label}"' in svg

    def test_svg_dashes_strict_boundaries(self, scan):
        assert "stroke-dasharray" in region_service.emit_region_svg(scan)

    def test_svg_title(self, scan):
        assert "<title>sobolev-to-wiener [s=crit] step=1/4</title>" in region_service.emit_region_svg(scan)
        assert "<title>custom</title>" in region_service.emit_region_svg(scan, title="custom")

    def test_rectangles_cover_every_cell_once(self, scan):
        covered = []
        for label, i0, j0, i1, j1 in region_service.merge_rectangles(scan):
            for i in range(i0, i1 + 1):
                for j in range(j0, j1 + 1):
                    assert scan.cell(i, j).label == label
                    covered.append((i, j))
        assert len(covered) == len(set(covered)) == len(scan.cells)

    def test_csv_layout(self):
        scan = region_service.scan_theorem_region(TAU1, {}, QUARTER)
        lines = region_service.emit_region_csv(scan).splitlines()
        assert lines[0] == "u,v,label,boundary_flags"
        assert lines[1] == "0,0,(1),"
        assert len(lines) == 1 + 81
        assert any(line.startswith("1/2,1/2,(1),boundary;tie:1-2") for line in lines)
