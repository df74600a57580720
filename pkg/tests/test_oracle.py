# tests/test_oracle.py
# Hand-audited verdicts, one block per catalogue group

from fractions import Fraction

import pytest

from amalgam.core.exceptions import MalformedQuery, OutOfDualityRange, UnsupportedPair
from amalgam.models.indices import ReciprocalIndex
from amalgam.models.spaces import Boundary, FamilyKind, VerdictRecord, VerdictStatus, WeightSide
from amalgam.services import lemma_service as lemmas
from amalgam.services import theorem_service as theorems
from amalgam.services.oracle_service import oracle_service

H, X = VerdictStatus.HOLDS, VerdictStatus.FAILS
OUT, OPEN = VerdictStatus.OUTSIDE_HYPOTHESIS, VerdictStatus.OPEN_IN_PAPER
I, NS, SX = Boundary.INTERIOR, Boundary.NON_STRICT, Boundary.STRICT_EXCLUDED

AUDIT = [
    # Sobolev into Wiener: tau1(r,q), strict in clauses (1) and (4)
    ("L[r=2,s=0]", "W[p=2,q=2]", 1, H, "(2)", NS),
    ("L[r=2,s=0]", "W[p=2,q=2,s=1]", 1, X, "(2)", I),
    ("L[r=4,s=0]", "W[p=4,q=1]", 1, X, "(1)", I),
    ("L[r=4,s=1/2]", "W[p=4,q=1]", 1, X, "(1)", SX),
    ("L[r=4,s=3/4]", "W[p=4,q=1]", 1, H, "(1)", I),
    ("L[r=1,s=0]", "W[p=1,q=inf]", 1, H, "(3)", NS),
    ("L[r=1,s=1]", "W[p=1,q=1]", 1, X, "(4)", SX),
    ("L[r=1,s=2]", "W[p=1,q=1]", 1, H, "(4)", I),
    ("L[r=1,s=3]", "W[p=1,q=1]", 2, H, "(4)", I),
    ("L[r=4,s=5]", "W[p=2,q=2]", 1, X, "r<=p", I),
    # Wiener into Sobolev: sigma1(r,q), dst-weighted
    ("W[p=2,q=2]", "L[r=2,s=0]", 1, H, "(2)", NS),
    ("W[p=2,q=2]", "L[r=2,s=1]", 1, X, "(2)", I),
    ("W[p=inf,q=1]", "L[r=inf,s=0]", 1, H, "(3)", NS),
    ("W[p=inf,q=2]", "L[r=inf,s=0]", 1, X, "(4)", I),
    ("W[p=inf,q=2]", "L[r=inf,s=-1/2]", 1, X, "(4)", SX),
    ("W[p=inf,q=2]", "L[r=inf,s=-1]", 1, H, "(4)", I),
    ("W[p=2,q=2]", "L[r=1,s=0]", 1, X, "p<=r", I),
    # Local Hardy spaces
    ("h[r=1/2,s=1]", "W[p=1/2,q=1]", 1, X, "(2)", I),
    ("h[r=1/2,s=2]", "W[p=1/2,q=1]", 1, H, "(2)", NS),
    ("h[r=2,s=0]", "W[p=2,q=1]", 1, X, "(1)", I),
    ("h[r=2,s=1]", "W[p=2,q=1]", 1, H, "(1)", I),
    ("W[p=2,q=2]", "h[r=2,s=0]", 1, H, "(2)", NS),
    ("W[p=1,q=4]", "h[r=1,s=-1/4]", 1, X, "(1)", SX),
    # Besov with the Wiener q
    ("B[p=2,q=2,s=0]", "W[p=2,q=2]", 1, H, "(1)", NS),
    ("B[p=1,q=1,s=0]", "W[p=1,q=1]", 1, X, "(1)", I),
    ("B[p=1,q=1,s=1]", "W[p=1,q=1]", 1, H, "(1)", NS),
    ("B[p=1,q=2,s=1/2]", "W[p=2,q=2]", 1, H, "(1)", NS),
    ("B[p=2,q=4,s=0]", "W[p=2,q=4]", 1, X, "(2)", SX),
    ("B[p=4,q=2,s=9]", "W[p=2,q=2]", 1, X, "p0<=p", I),
    ("W[p=2,q=2]", "B[p=2,q=2,s=0]", 1, H, "(1)", NS),
    ("W[p=4,q=2]", "B[p=4,q=2,s=0]", 1, X, "(2)", I),
    # Besov with the Wiener p
    ("B[p=2,q=1,s=0]", "W[p=2,q=2]", 1, H, "(1)", NS),
    ("B[p=2,q=4,s=0]", "W[p=2,q=2]", 1, X, "(3)", SX),
    ("B[p=1,q=2,s=1]", "W[p=1,q=1]", 1, X, "(3)", SX),
    ("B[p=1,q=2,s=1/2]", "W[p=1,q=4]", 1, H, "(2)", I),
    ("B[p=4,q=2,s=5]", "W[p=4,q=1]", 1, OPEN, None, I),
    ("W[p=2,q=2]", "B[p=2,q=1,s=0]", 1, X, "(3)", SX),
    ("W[p=2,q=4]", "B[p=2,q=1,s=-1/4]", 1, X, "(3)", SX),
    ("W[p=2,q=1]", "B[p=2,q=4/3,s=-1]", 1, H, "(2)", I),
    # Modulation spaces
    ("M[p=1,q=1,s=0]", "W[p=2,q=2]", 1, H, "(1)", NS),
    ("M[p=2,q=4,s=0]", "W[p=2,q=2]", 1, X, "(2)", I),
    ("M[p=2,q=4,s=1/4]", "W[p=2,q=2]", 1, X, "(2)", SX),
    ("M[p=2,q=4,s=1/2]", "W[p=2,q=2]", 1, H, "(2)", I),
    ("M[p=4,q=1,s=0]", "W[p=2,q=2]", 1, X, "p1<=p", I),
    ("M[p=1,q=inf,s=0]", "W[p=1,q=inf]", 1, X, "(2)", I),
    ("W[p=2,q=2]", "M[p=2,q=1,s=0]", 1, X, "(2)", I),
    ("W[p=2,q=2]", "M[p=2,q=inf,s=0]", 1, H, "(1)", NS),
    # Alpha-modulation spaces
    ("Ma[p=2,q=2,s=0,alpha=1/2]", "W[p=2,q=2]", 1, H, "(1)", NS),
    ("Ma[p=2,q=2,s=-1/2,alpha=1/2]", "W[p=2,q=2]", 1, X, "(1)", I),
    ("Ma[p=1,q=2,s=1/2,alpha=1/2]", "W[p=1,q=2]", 1, X, "(2)", SX),
    ("Ma[p=1,q=2,s=1,alpha=1/2]", "W[p=1,q=2]", 1, H, "(2)", I),
    ("Ma[p=1,q=2,s=1,alpha=1/2]", "W[p=2,q=2]", 1, OUT, None, I),
    # Triebel spaces, 0 < p <= 1
    ("F[p=1,q=2,s=1/2]", "W[p=1,q=2]", 1, H, "(1)", NS),
    ("F[p=1,q=2,s=0]", "W[p=1,q=2]", 1, X, "(1)", I),
    ("F[p=2,q=2,s=0]", "W[p=2,q=2]", 1, OUT, None, I),
    ("W[p=1,q=1]", "F[p=1,q=1,s=0]", 1, H, "(1)", NS),
    ("W[p=1,q=4]", "F[p=1,q=1,s=0]", 1, OPEN, None, I),
    # Sequence spaces and sufficient predicates
    ("l0[q=1,s=0]", "l0[q=2,s=0]", 1, H, "(1)", NS),
    ("l0[q=2,s=0]", "l0[q=1,s=0]", 1, X, "(2)", I),
    ("l0[q=2,s=1]", "l0[q=1,s=0]", 1, H, "(2)", I),
    ("l1[q=2,s=0]", "l1[q=1,s=0]", 1, X, "(2)", SX),
    ("l1[q=2,s=1/8]", "l1[q=1,s=0]", 1, H, "(2)", I),
    ("W[p=1,q=1]", "W[p=2,q=2]", 1, H, "(1)", NS),
    ("W[p=2,q=2]", "W[p=1,q=1]", 1, OUT, None, I),
    ("W[p=1,q=2,s=0]", "W[p=1,q=1]", 1, OUT, "(4)", I),
]


@pytest.mark.parametrize("src, dst, d, status, clause, boundary", AUDIT)
def test_audit_table(query, src, dst, d, status, clause, boundary):
    verdict = oracle_service.decide(query(src, dst, d))
    assert verdict.status == status
    assert verdict.boundary == boundary
    if clause is not None:
        assert verdict.clause.startswith(clause)


def test_audit_table_is_large_enough():
    assert len(AUDIT) >= 40


def test_cited_theorem_ids(query):
    assert oracle_service.decide(query("L[r=2]", "W[p=2,q=2]")).theorem_id == theorems.SOBOLEV_TO_WIENER
    assert oracle_service.decide(query("B[p=2,q=1]", "W[p=2,q=2]")).theorem_id == theorems.BESOV_Q0_TO_WIENER
    assert oracle_service.decide(query("W[p=1,q=1]", "W[p=2,q=2]")).theorem_id == lemmas.AMALGAM_MONOTONE


def test_fails_carry_probe_hints(query):
    assert oracle_service.decide(query("L[r=2,s=0]", "W[p=2,q=2,s=1]")).probe_hint == FamilyKind.MODULATED_BUMP
    assert oracle_service.decide(query("L[r=4]", "W[p=4,q=1]")).probe_hint == FamilyKind.RADEMACHER_SHELL
    assert oracle_service.decide(query("B[p=1,q=1]", "W[p=1,q=1]")).probe_hint == FamilyKind.DYADIC_SHELL_SUM
    assert oracle_service.decide(query("M[p=1,q=inf]", "W[p=1,q=inf]")).probe_hint == FamilyKind.SPREAD_TRANSLATES
    assert oracle_service.decide(query("L[r=4]", "W[p=2,q=2]")).probe_hint == FamilyKind.SCALED_BUMP


def test_open_verdicts_cite_the_remark(query):
    verdict = oracle_service.decide(query("B[p=4,q=2,s=5]", "W[p=4,q=1]"))
    assert verdict.note and "remaining question" in verdict.note


class TestRemarkSufficiency:
    def test_besov_region_refined(self, query):
        verdict = oracle_service.decide(query("B[p=4,q=2,s=1]", "W[p=4,q=1]", use_remark_sufficiency=True))
        assert verdict.status == H
        assert verdict.clause.startswith("remark-sufficiency")

    def test_besov_region_stays_open_below(self, query):
        verdict = oracle_service.decide(query("B[p=4,q=2,s=0]", "W[p=4,q=1]", use_remark_sufficiency=True))
        assert verdict.status == OPEN

    @pytest.mark.parametrize("s, status", [("-1", H), ("0", X), ("-1/4", OPEN)])
    def test_triebel_large_q(self, query, s, status):
        verdict = oracle_service.decide(query("W[p=1,q=4]", f"F[p=1,q=1,s={s}]", use_remark_sufficiency=True))
        assert verdict.status == status


class TestAlphaReadings:
    def test_readings_agree_off_the_discrepancy(self, query):
        as_written = oracle_service.decide(query("Ma[p=1,q=2,s=1,alpha=1/2]", "W[p=1,q=2]"))
        alternate = oracle_service.decide(
            query("Ma[p=1,q=2,s=1,alpha=1/2]", "W[p=1,q=2]", thm111_reading="Alternate_tau1")
        )
        assert as_written.status == alternate.status == H

    def test_alpha_out_of_range(self, query):
        with pytest.raises(MalformedQuery):
            oracle_service.decide(query("Ma[p=2,q=2,alpha=1]", "W[p=2,q=2]"))


class TestCriticalSmoothness:
    def test_src_weighted(self, query):
        criterion = oracle_service.critical_smoothness(query("L[r=4]", "W[p=4,q=1]"))
        assert criterion.threshold == Fraction(1, 2)
        assert not criterion.inclusive
        assert criterion.side == WeightSide.SRC

    def test_dst_weighted(self, query):
        criterion = oracle_service.critical_smoothness(query("W[p=inf,q=2]", "L[r=inf]"))
        assert criterion.threshold == Fraction(-1, 2)
        assert criterion.side == WeightSide.DST

    def test_none_when_s_is_irrelevant(self, query):
        assert oracle_service.critical_smoothness(query("L[r=4]", "W[p=2,q=2]")) is None
        assert oracle_service.critical_smoothness(query("F[p=2,q=2]", "W[p=2,q=2]")) is None


class TestDecideWith:
    def test_forced_entry(self, query):
        verdict = oracle_service.decide_with(lemmas.MODULATION_WIENER_SANDWICH, query("M[p=2,q=1]", "W[p=2,q=2]"))
        assert verdict.status == H
        assert verdict.theorem_id == lemmas.MODULATION_WIENER_SANDWICH

    def test_sandwich_failure(self, query):
        verdict = oracle_service.decide_with(lemmas.MODULATION_WIENER_SANDWICH, query("W[p=2,q=2]", "M[p=2,q=1]"))
        assert verdict.status == X

    def test_wrong_pair(self, query):
        with pytest.raises(UnsupportedPair):
            oracle_service.decide_with(theorems.SOBOLEV_TO_WIENER, query("M[p=2,q=1]", "W[p=2,q=2]"))

    def test_unknown_id(self, query):
        with pytest.raises(UnsupportedPair):
            oracle_service.decide_with("no-such-theorem", query("L[r=2]", "W[p=2,q=2]"))


def test_unsupported_pair(query):
    with pytest.raises(UnsupportedPair):
        oracle_service.decide(query("L[r=2]", "B[p=2,q=2]"))


def test_sobolev_below_one_is_malformed(query):
    with pytest.raises(MalformedQuery):
        oracle_service.decide(query("L[r=1/2]", "W[p=1/2,q=1]"))


def test_dualize_query(query):
    dual = oracle_service.dualize_query(query("L[r=4,s=1]", "W[p=4,q=4/3,s=1/2]"))
    assert str(dual.src) == "W[p=4/3,q=4,s=-1/2]"
    assert str(dual.dst) == "L[r=4/3,s=-1]"


def test_dualize_rejects_endpoints(query):
    with pytest.raises(OutOfDualityRange):
        oracle_service.dualize_query(query("L[r=1]", "W[p=2,q=2]"))


def test_verdict_record_round_trip(query):
    original = query("M[p=2,q=4,s=1/4]", "W[p=2,q=2]", thm111_reading="Alternate_tau1")
    record = VerdictRecord.from_pair(original, oracle_service.decide(original))
    parsed = VerdictRecord.model_validate_json(record.model_dump_json())
    again_query, again_verdict = parsed.to_pair()
    assert again_query == original
    assert again_verdict == oracle_service.decide(original)


def test_catalogue_lists_every_id():
    ids = {entry.theorem_id for entry in oracle_service.list_theorems()}
    assert theorems.WIENER_TO_TRIEBEL in ids
    assert lemmas.SEQUENCE_L1 in ids
    assert ids == set(oracle_service.theorem_ids())


class TestSequenceSpaces:
    @pytest.mark.parametrize(
        "q1, s1, q2, s2, d, status, clause, boundary",
        [
            ("1", 0, "2", 0, 1, H, "(1)", NS),
            ("1", -1, "2", 0, 1, X, "(1)", I),
            ("2", Fraction(1, 2), "1", 0, 1, X, "(2)", SX),
            ("2", 1, "1", 0, 1, H, "(2)", I),
            ("2", 1, "1", 0, 2, X, "(2)", SX),
            ("inf", 4, "1", 1, 2, H, "(2)", I),
        ],
    )
    def test_l0(self, q1, s1, q2, s2, d, status, clause, boundary):
        verdict = oracle_service.decide_sequence_l0(
            ReciprocalIndex.of(q1), Fraction(s1), ReciprocalIndex.of(q2), Fraction(s2), d
        )
        assert verdict.theorem_id == lemmas.SEQUENCE_L0
        assert verdict.status == status
        assert verdict.clause.split()[0] == clause
        assert verdict.boundary == boundary

    @pytest.mark.parametrize(
        "s1, status, boundary",
        [(0, X, SX), (Fraction(1, 8), H, I), (Fraction(-1, 8), X, I)],
    )
    def test_l1_larger_exponent_needs_strict_gain(self, s1, status, boundary):
        verdict = oracle_service.decide_sequence_l1(
            ReciprocalIndex.of(2), Fraction(s1), ReciprocalIndex.of(1), Fraction(0)
        )
        assert verdict.theorem_id == lemmas.SEQUENCE_L1
        assert (verdict.status, verdict.boundary) == (status, boundary)

    def test_l1_smaller_exponent(self):
        verdict = oracle_service.decide_sequence_l1(
            ReciprocalIndex.of(1), Fraction(0), ReciprocalIndex.of("inf"), Fraction(0)
        )
        assert verdict.status == H
        assert verdict.boundary == NS
