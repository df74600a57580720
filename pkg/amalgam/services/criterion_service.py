# amalgam/services/criterion_service.py
# Turning clause criteria into verdicts

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from amalgam.models.spaces import (
    Boundary,
    Criterion,
    EmbeddingQuery,
    FamilyKind,
    Verdict,
    VerdictStatus,
    WeightSide,
)

HintRule = Union[FamilyKind, Callable[[Fraction], FamilyKind], None]


@dataclass(frozen=True)
class Ruling:
    """What a catalogue entry says about a query before s is compared

    Either `verdict` is settled outright (index conditions, hypotheses), or
    `criterion` carries the smoothness comparison still to be made.
    """
    theorem_id: str
    criterion: Optional[Criterion] = None
    verdict: Optional[Verdict] = None
    hint: HintRule = None
    boundary_hint: Optional[FamilyKind] = None  # family used when s sits on a strict threshold
    miss_status: VerdictStatus = VerdictStatus.FAILS
    open_at_threshold: bool = False
    note: Optional[str] = None


class CriterionService:
    """Service for building rulings and settling them against s"""

    def effective_smoothness(self, query: EmbeddingQuery, side: WeightSide) -> Fraction:
        if side == WeightSide.SRC:
            return query.src.s - query.dst.s
        return query.dst.s - query.src.s

    def criterion(
        self,
        clause: str,
        condition: str,
        threshold: Fraction,
        inclusive: bool,
        side: WeightSide,
    ) -> Criterion:
        return Criterion(clause=clause, condition=condition, threshold=threshold, inclusive=inclusive, side=side)

    def holds(self, theorem_id: str, clause: str) -> Ruling:
        return Ruling(theorem_id, verdict=Verdict(status=VerdictStatus.HOLDS, theorem_id=theorem_id, clause=clause))

    def fails(self, theorem_id: str, clause: str, hint: Optional[FamilyKind] = FamilyKind.SCALED_BUMP) -> Ruling:
        """Index condition violated; s plays no role"""
        verdict = Verdict(status=VerdictStatus.FAILS, theorem_id=theorem_id, clause=clause, probe_hint=hint)
        return Ruling(theorem_id, verdict=verdict)

    def outside(self, theorem_id: str, note: str) -> Ruling:
        verdict = Verdict(status=VerdictStatus.OUTSIDE_HYPOTHESIS, theorem_id=theorem_id, note=note)
        return Ruling(theorem_id, verdict=verdict)

    def open_question(self, theorem_id: str, note: str) -> Ruling:
        verdict = Verdict(status=VerdictStatus.OPEN_IN_PAPER, theorem_id=theorem_id, note=note)
        return Ruling(theorem_id, verdict=verdict)

    def settle(self, ruling: Ruling, query: EmbeddingQuery) -> Verdict:
        """Compare the effective smoothness with the ruling's criterion"""
        if ruling.verdict is not None:
            return ruling.verdict
        criterion = ruling.criterion
        s_eff = self.effective_smoothness(query, criterion.side)
        on_threshold = s_eff == criterion.threshold
        clause = f"{criterion.clause} {criterion.condition}"

        if criterion.admits(s_eff):
            boundary = Boundary.NON_STRICT if on_threshold else Boundary.INTERIOR
            return Verdict(status=VerdictStatus.HOLDS, theorem_id=ruling.theorem_id, clause=clause, boundary=boundary)

        if on_threshold and ruling.open_at_threshold:
            return Verdict(
                status=VerdictStatus.OPEN_IN_PAPER,
                theorem_id=ruling.theorem_id,
                clause=clause,
                note=ruling.note or "endpoint left open",
            )
        boundary = Boundary.STRICT_EXCLUDED if on_threshold else Boundary.INTERIOR
        if ruling.miss_status != VerdictStatus.FAILS:
            return Verdict(
                status=ruling.miss_status,
                theorem_id=ruling.theorem_id,
                clause=clause,
                boundary=boundary,
                note=ruling.note or "sufficient condition not met",
            )
        return Verdict(
            status=VerdictStatus.FAILS,
            theorem_id=ruling.theorem_id,
            clause=clause,
            boundary=boundary,
            probe_hint=self._hint(ruling, s_eff, on_threshold),
        )

    def _hint(self, ruling: Ruling, s_eff: Fraction, on_threshold: bool) -> Optional[FamilyKind]:
        if on_threshold and ruling.boundary_hint is not None:
            return ruling.boundary_hint
        if callable(ruling.hint):
            return ruling.hint(s_eff)
        return ruling.hint


# Global criterion service instance
criterion_service = CriterionService()
