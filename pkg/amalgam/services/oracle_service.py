# amalgam/services/oracle_service.py
# Exact embedding oracle: catalogue, dispatch and duality

import logging
from fractions import Fraction
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from amalgam.core.exceptions import OutOfDualityRange, UnsupportedPair
from amalgam.models.indices import ReciprocalIndex
from amalgam.models.spaces import (
    FAMILY_EXPONENTS,
    CatalogueEntry,
    Criterion,
    EmbeddingQuery,
    SpaceFamily,
    SpaceSpec,
    TheoremKind,
    Verdict,
)
from amalgam.services import lemma_service as lemmas
from amalgam.services import theorem_service as theorems
from amalgam.services.criterion_service import Ruling, criterion_service
from amalgam.services.lemma_service import lemma_service
from amalgam.services.theorem_service import theorem_service

logger = logging.getLogger(__name__)

F = SpaceFamily
Handler = Callable[[EmbeddingQuery], Ruling]


class _Row(NamedTuple):
    theorem_id: str
    kind: TheoremKind
    source: SpaceFamily
    target: SpaceFamily
    handler: Handler
    hypothesis: str
    clauses: Tuple[str, ...]


def _rows() -> List[_Row]:
    main, ext, suff, seq = TheoremKind.MAIN, TheoremKind.EXTERNAL_SHARP, TheoremKind.SUFFICIENT, TheoremKind.SEQUENCE
    t, lm = theorem_service, lemma_service
    return [
        _Row(theorems.SOBOLEV_TO_WIENER, main, F.SOBOLEV, F.WIENER, t.sobolev_to_wiener,
             "1<=p,r<=inf; embedding iff r<=p and", (
                 "(1) r>q, q<2: s>tau1(r,q)", "(2) 1<r, min(2,r)<=q: s>=tau1(r,q)",
                 "(3) r=1, q=inf: s>=tau1(r,q)", "(4) r=1, q<inf: s>tau1(r,q)")),
        _Row(theorems.WIENER_TO_SOBOLEV, main, F.WIENER, F.SOBOLEV, t.wiener_to_sobolev,
             "1<=p,r<=inf; embedding iff p<=r and", (
                 "(1) r<q, q>2: s<sigma1(r,q)", "(2) r<inf, q<=max(r,2): s<=sigma1(r,q)",
                 "(3) r=inf, q<=1: s<=sigma1(r,q)", "(4) r=inf, q>1: s<sigma1(r,q)")),
        _Row(theorems.HARDY_TO_WIENER, main, F.LOCAL_HARDY, F.WIENER, t.hardy_to_wiener,
             "0<r<inf; embedding iff r<=p and", ("(1) r>q, q<2: s>tau1(r,q)", "(2) r<=q or q>=2: s>=tau1(r,q)")),
        _Row(theorems.WIENER_TO_HARDY, main, F.WIENER, F.LOCAL_HARDY, t.wiener_to_hardy,
             "0<r<inf; embedding iff p<=r and", ("(1) r<q, q>2: s<sigma1(r,q)", "(2) r>=q or q<=2: s<=sigma1(r,q)")),
        _Row(theorems.BESOV_P0_TO_WIENER, main, F.BESOV, F.WIENER, t.besov_p0_to_wiener,
             "same q; embedding iff p0<=p and", ("(1) p>=q: s>=tau1(p0,q)", "(2) p<q: s>tau1(p0,q)")),
        _Row(theorems.WIENER_TO_BESOV_P0, main, F.WIENER, F.BESOV, t.wiener_to_besov_p0,
             "same q; embedding iff p<=p0 and", ("(1) p<=q: s<=sigma1(p0,q)", "(2) p>q: s<sigma1(p0,q)")),
        _Row(theorems.BESOV_Q0_TO_WIENER, main, F.BESOV, F.WIENER, t.besov_q0_to_wiener,
             "same p; q>=min(q0,2) or p<=max(q0,2)", (
                 "(1) q0<=min(p,q): s>=tau1(p,q)", "(2) p<q0<=q: s>tau1(p,q)", "(3) q<q0: s>tau1(p,q)")),
        _Row(theorems.WIENER_TO_BESOV_Q0, main, F.WIENER, F.BESOV, t.wiener_to_besov_q0,
             "same p; q<=max(q0,2) or p>=min(q0,2)", (
                 "(1) q0>=max(p,q): s<=sigma1(p,q)", "(2) p>q0>=q: s<sigma1(p,q)", "(3) q>q0: s<sigma1(p,q)")),
        _Row(theorems.MODULATION_TO_WIENER, main, F.MODULATION, F.WIENER, t.modulation_to_wiener,
             "embedding iff p1<=p and", ("(1) q1<=min(p,q): s>=0", "(2) s+d/q1>d/min(p,q)")),
        _Row(theorems.WIENER_TO_MODULATION, main, F.WIENER, F.MODULATION, t.wiener_to_modulation,
             "embedding iff p1>=p and", ("(1) q1>=max(p,q): s<=0", "(2) s+d/q1<d/max(p,q)")),
        _Row(theorems.ALPHA_MODULATION_TO_WIENER, main, F.ALPHA_MODULATION, F.WIENER, t.alpha_modulation_to_wiener,
             "same p and q; 0<alpha<1", (
                 "(1) p>=q: s>=alpha*tau1(p,q)", "(2) p<q: s>alpha*tau(p,q)+d(1-alpha)(1/p-1/q)")),
        _Row(theorems.WIENER_TO_ALPHA_MODULATION, main, F.WIENER, F.ALPHA_MODULATION, t.wiener_to_alpha_modulation,
             "same p and q; 0<alpha<1", (
                 "(1) p<=q: s<=alpha*sigma1(p,q)", "(2) p>q: s<alpha*sigma1(p,q)+d(1-alpha)(1/p-1/q)")),
        _Row(theorems.TRIEBEL_TO_WIENER, main, F.TRIEBEL, F.WIENER, t.triebel_to_wiener,
             "same p; 0<p<=1", ("(1) p<=q: s>=d(1/p+1/q-1)", "(2) p>q: s>d(1/p+1/q-1)")),
        _Row(theorems.WIENER_TO_TRIEBEL, main, F.WIENER, F.TRIEBEL, t.wiener_to_triebel,
             "same p; 0<p<=1; q<=2", (
                 "(1) p>=q, q<=r: s<=0", "(2) p>=q, q>r: s<0", "(3) p<q<=2, q<=r: s<=0", "(4) p<q<=2, q>r: s<0")),
        _Row(lemmas.SOBOLEV_TO_WIENER_DIAGONAL, ext, F.SOBOLEV, F.WIENER, lm.sobolev_to_wiener_diagonal,
             "r=p", ("as the Sobolev to Wiener theorem at r=p",)),
        _Row(lemmas.HARDY_TO_WIENER_DIAGONAL, ext, F.LOCAL_HARDY, F.WIENER, lm.hardy_to_wiener_diagonal,
             "r=p", ("(1) s>=tau1(p,q), strict when q<min(p,2)",)),
        _Row(lemmas.WIENER_TO_HARDY_DIAGONAL, ext, F.WIENER, F.LOCAL_HARDY, lm.wiener_to_hardy_diagonal,
             "r=p", ("(1) s<=sigma1(p,q), strict when q>max(p,2)",)),
        _Row(lemmas.BESOV_TO_WIENER_DIAGONAL, ext, F.BESOV, F.WIENER, lm.besov_to_wiener_diagonal,
             "same p and q", ("(1) s>=tau1(p,q), strict when p<q",)),
        _Row(lemmas.WIENER_TO_BESOV_DIAGONAL, ext, F.WIENER, F.BESOV, lm.wiener_to_besov_diagonal,
             "same p and q", ("(1) s<=sigma1(p,q), strict when p>q",)),
        _Row(lemmas.BESOV_TO_MODULATION, ext, F.BESOV, F.MODULATION, lm.besov_to_modulation,
             "same p and q", ("(1) s>=tau(p,q)",)),
        _Row(lemmas.ALPHA_TO_MODULATION, ext, F.ALPHA_MODULATION, F.MODULATION, lm.alpha_to_modulation,
             "same p and q", ("(1) s>=alpha*tau(p,q)",)),
        _Row(lemmas.MODULATION_TO_ALPHA, ext, F.MODULATION, F.ALPHA_MODULATION, lm.modulation_to_alpha,
             "same p and q", ("(2) s<=alpha*sigma(p,q)",)),
        _Row(lemmas.BESOV_TO_ALPHA, ext, F.BESOV, F.ALPHA_MODULATION, lm.besov_to_alpha,
             "same p and q", ("(3) s>=(1-alpha)*tau(p,q)",)),
        _Row(lemmas.ALPHA_TO_BESOV, ext, F.ALPHA_MODULATION, F.BESOV, lm.alpha_to_besov,
             "same p and q", ("(4) s<=(1-alpha)*sigma(p,q)",)),
        _Row(lemmas.ALPHA_TO_ALPHA, ext, F.ALPHA_MODULATION, F.ALPHA_MODULATION, lm.alpha_to_alpha,
             "same alpha and p", ("(1) q1>=q: s>=0", "(2) q>q1: s>d(1-alpha)(1/q1-1/q)")),
        _Row(lemmas.TRIEBEL_TO_MODULATION, ext, F.TRIEBEL, F.MODULATION, lm.triebel_to_modulation,
             "same p; 0<p<=1", ("(1) p<=q: s>=d(1/p+1/q-1)", "(2) p>q: s>d(1/p+1/q-1)")),
        _Row(lemmas.MODULATION_TO_TRIEBEL, ext, F.MODULATION, F.TRIEBEL, lm.modulation_to_triebel,
             "same p; 0<p<=1", ("(1) p>=q, r>=q: s<=0", "(2) p>=q, r<q: s<0", "(3) p<q: s<d(1/q-1/p)")),
        _Row(lemmas.MODULATION_WIENER_SANDWICH, ext, F.MODULATION, F.WIENER, lm.modulation_wiener_sandwich,
             "same p; equal weights", ("(1) q1<=min(p,q)",)),
        _Row(lemmas.MODULATION_WIENER_SANDWICH, ext, F.WIENER, F.MODULATION, lm.modulation_wiener_sandwich,
             "same p; equal weights", ("(2) q1>=max(p,q)",)),
        _Row(lemmas.AMALGAM_MONOTONE, suff, F.WIENER, F.WIENER, lm.amalgam_monotone,
             "p0<=p1", ("(1) q0<=q1: s0>=s1", "(4) q1<q0: s0+d/q0>s1+d/q1")),
        _Row(lemmas.AMALGAM_MONOTONE, suff, F.MODULATION, F.MODULATION, lm.amalgam_monotone,
             "p0<=p1", ("(1) q0<=q1: s0>=s1", "(4) q1<q0: s0+d/q0>s1+d/q1")),
        _Row(lemmas.MODULATION_WIENER_EXCHANGE, suff, F.MODULATION, F.WIENER, lm.modulation_wiener_exchange,
             "same p and q", ("(5) p>=q: s0>=s1",)),
        _Row(lemmas.MODULATION_WIENER_EXCHANGE, suff, F.WIENER, F.MODULATION, lm.modulation_wiener_exchange,
             "same p and q", ("(5) p<=q: s0>=s1",)),
        _Row(lemmas.BESOV_TRIEBEL, suff, F.BESOV, F.BESOV, lm.besov_triebel,
             "p0<=p1", ("(1) s0-d/p0>=s1-d/p1, equality needs q0<=q1",)),
        _Row(lemmas.BESOV_TRIEBEL, suff, F.TRIEBEL, F.TRIEBEL, lm.besov_triebel,
             "p0<=p1", ("(2) p0=p1: s0>=s1, equality needs q0<=q1", "(5) p0<p1: s0-d/p0>=s1-d/p1")),
        _Row(lemmas.BESOV_TRIEBEL, suff, F.BESOV, F.TRIEBEL, lm.besov_triebel,
             "same p", ("(3) B_{p,min(p,q)} into F_{p,q}",)),
        _Row(lemmas.BESOV_TRIEBEL, suff, F.TRIEBEL, F.BESOV, lm.besov_triebel,
             "same p", ("(3) F_{p,q} into B_{p,max(p,q)}",)),
        _Row(lemmas.SEQUENCE_L0, seq, F.SEQ_WEIGHTED0, F.SEQ_WEIGHTED0, lm.sequence_l0,
             "none", ("(1) q1<=q2, s1>=s2", "(2) q1>q2, s1+d/q1>s2+d/q2")),
        _Row(lemmas.SEQUENCE_L1, seq, F.SEQ_WEIGHTED1, F.SEQ_WEIGHTED1, lm.sequence_l1,
             "none", ("(1) q1<=q2, s1>=s2", "(2) s1>s2")),
    ]


class OracleService:
    """Service for deciding embedding queries exactly"""

    def __init__(self):
        self._rows = _rows()
        self._dispatch: Dict[Tuple[SpaceFamily, SpaceFamily], Handler] = {
            (F.SOBOLEV, F.WIENER): theorem_service.sobolev_to_wiener,
            (F.WIENER, F.SOBOLEV): theorem_service.wiener_to_sobolev,
            (F.LOCAL_HARDY, F.WIENER): theorem_service.hardy_to_wiener,
            (F.WIENER, F.LOCAL_HARDY): theorem_service.wiener_to_hardy,
            (F.BESOV, F.WIENER): self._besov_to_wiener,
            (F.WIENER, F.BESOV): self._wiener_to_besov,
            (F.MODULATION, F.WIENER): theorem_service.modulation_to_wiener,
            (F.WIENER, F.MODULATION): theorem_service.wiener_to_modulation,
            (F.ALPHA_MODULATION, F.WIENER): self._alpha_modulation_to_wiener,
            (F.WIENER, F.ALPHA_MODULATION): self._wiener_to_alpha_modulation,
            (F.TRIEBEL, F.WIENER): self._triebel_to_wiener,
            (F.WIENER, F.TRIEBEL): self._wiener_to_triebel,
            (F.BESOV, F.MODULATION): lemma_service.besov_to_modulation,
            (F.ALPHA_MODULATION, F.MODULATION): lemma_service.alpha_to_modulation,
            (F.MODULATION, F.ALPHA_MODULATION): lemma_service.modulation_to_alpha,
            (F.BESOV, F.ALPHA_MODULATION): lemma_service.besov_to_alpha,
            (F.ALPHA_MODULATION, F.BESOV): lemma_service.alpha_to_besov,
            (F.ALPHA_MODULATION, F.ALPHA_MODULATION): lemma_service.alpha_to_alpha,
            (F.TRIEBEL, F.MODULATION): lemma_service.triebel_to_modulation,
            (F.MODULATION, F.TRIEBEL): lemma_service.modulation_to_triebel,
            (F.WIENER, F.WIENER): lemma_service.amalgam_monotone,
            (F.MODULATION, F.MODULATION): lemma_service.amalgam_monotone,
            (F.BESOV, F.BESOV): lemma_service.besov_triebel,
            (F.TRIEBEL, F.TRIEBEL): lemma_service.besov_triebel,
            (F.BESOV, F.TRIEBEL): lemma_service.besov_triebel,
            (F.TRIEBEL, F.BESOV): lemma_service.besov_triebel,
            (F.SEQ_WEIGHTED0, F.SEQ_WEIGHTED0): lemma_service.sequence_l0,
            (F.SEQ_WEIGHTED1, F.SEQ_WEIGHTED1): lemma_service.sequence_l1,
        }

    # Public operations

    def decide(self, query: EmbeddingQuery) -> Verdict:
        """Decide src into dst with the catalogue entry covering the pair"""
        verdict = criterion_service.settle(self.ruling(query), query)
        logger.debug("%s -> %s: %s %s %s", query.src, query.dst, verdict.theorem_id, verdict.status.value, verdict.clause)
        return verdict

    def decide_with(self, theorem_id: str, query: EmbeddingQuery) -> Verdict:
        """Decide with a specific catalogue entry"""
        return criterion_service.settle(self.ruling_with(theorem_id, query), query)

    def ruling_with(self, theorem_id: str, query: EmbeddingQuery) -> Ruling:
        pair = (query.src.family, query.dst.family)
        rows = [row for row in self._rows if row.theorem_id == theorem_id]
        if not rows:
            raise UnsupportedPair(f"unknown theorem id {theorem_id!r}")
        for row in rows:
            if (row.source, row.target) == pair:
                return row.handler(query)
        raise UnsupportedPair(f"{theorem_id} does not cover {pair[0].value} -> {pair[1].value}")

    def entry(self, theorem_id: str) -> CatalogueEntry:
        """First catalogue row of a theorem id"""
        for row in self.list_theorems():
            if row.theorem_id == theorem_id:
                return row
        raise UnsupportedPair(f"unknown theorem id {theorem_id!r}")

    def critical_smoothness(self, query: EmbeddingQuery) -> Optional[Criterion]:
        """Threshold the deciding clause compares s against, or None if s plays no role"""
        return self.ruling(query).criterion

    def ruling(self, query: EmbeddingQuery) -> Ruling:
        pair = (query.src.family, query.dst.family)
        handler = self._dispatch.get(pair)
        if handler is None:
            raise UnsupportedPair(f"no catalogue entry for {pair[0].value} -> {pair[1].value}")
        return handler(query)

    def decide_sequence_l0(self, q1: ReciprocalIndex, s1: Fraction, q2: ReciprocalIndex, s2: Fraction, d: int) -> Verdict:
        return self.decide(self._sequence_query(F.SEQ_WEIGHTED0, q1, s1, q2, s2, d))

    def decide_sequence_l1(self, q1: ReciprocalIndex, s1: Fraction, q2: ReciprocalIndex, s2: Fraction) -> Verdict:
        return self.decide(self._sequence_query(F.SEQ_WEIGHTED1, q1, s1, q2, s2, 1))

    def dualize_query(self, query: EmbeddingQuery) -> EmbeddingQuery:
        """Swap the spaces, dualize every exponent and negate every weight"""
        return EmbeddingQuery(
            src=self._dual_space(query.dst),
            dst=self._dual_space(query.src),
            d=query.d,
            options=query.options,
        )

    def list_theorems(self) -> List[CatalogueEntry]:
        return [
            CatalogueEntry(
                theorem_id=row.theorem_id,
                kind=row.kind,
                source=row.source,
                target=row.target,
                hypothesis=row.hypothesis,
                clauses=list(row.clauses),
            )
            for row in self._rows
        ]

    def theorem_ids(self) -> List[str]:
        return list(dict.fromkeys(row.theorem_id for row in self._rows))

    # Dispatch rules for pairs several statements could answer

    def _besov_to_wiener(self, query: EmbeddingQuery) -> Ruling:
        if query.src.exponent("q") == query.dst.exponent("q"):
            return theorem_service.besov_p0_to_wiener(query)
        if query.src.exponent("p") == query.dst.exponent("p"):
            return theorem_service.besov_q0_to_wiener(query)
        return criterion_service.outside(theorems.BESOV_P0_TO_WIENER, "needs equal q or equal p")

    def _wiener_to_besov(self, query: EmbeddingQuery) -> Ruling:
        if query.src.exponent("q") == query.dst.exponent("q"):
            return theorem_service.wiener_to_besov_p0(query)
        if query.src.exponent("p") == query.dst.exponent("p"):
            return theorem_service.wiener_to_besov_q0(query)
        return criterion_service.outside(theorems.WIENER_TO_BESOV_P0, "needs equal q or equal p")

    def _alpha_modulation_to_wiener(self, query: EmbeddingQuery) -> Ruling:
        if not self._same(query, "p", "q"):
            return criterion_service.outside(theorems.ALPHA_MODULATION_TO_WIENER, "needs equal p and q")
        return theorem_service.alpha_modulation_to_wiener(query)

    def _wiener_to_alpha_modulation(self, query: EmbeddingQuery) -> Ruling:
        if not self._same(query, "p", "q"):
            return criterion_service.outside(theorems.WIENER_TO_ALPHA_MODULATION, "needs equal p and q")
        return theorem_service.wiener_to_alpha_modulation(query)

    def _triebel_to_wiener(self, query: EmbeddingQuery) -> Ruling:
        if not self._same(query, "p"):
            return criterion_service.outside(theorems.TRIEBEL_TO_WIENER, "needs equal p")
        return theorem_service.triebel_to_wiener(query)

    def _wiener_to_triebel(self, query: EmbeddingQuery) -> Ruling:
        if not self._same(query, "p"):
            return criterion_service.outside(theorems.WIENER_TO_TRIEBEL, "needs equal p")
        return theorem_service.wiener_to_triebel(query)

    # Helpers

    def _same(self, query: EmbeddingQuery, *names: str) -> bool:
        return all(query.src.exponent(name) == query.dst.exponent(name) for name in names)

    def _sequence_query(self, family: SpaceFamily, q1, s1, q2, s2, d: int) -> EmbeddingQuery:
        return EmbeddingQuery(
            src=SpaceSpec(family=family, q=q1, s=s1),
            dst=SpaceSpec(family=family, q=q2, s=s2),
            d=d,
        )

    def _dual_space(self, space: SpaceSpec) -> SpaceSpec:
        update = {"s": -space.s}
        for name in FAMILY_EXPONENTS[space.family]:
            u = space.exponent(name)
            if not 0 < u < 1:
                raise OutOfDualityRange(f"{space}: exponent {name} must lie strictly between 1 and inf")
            update[name] = ReciprocalIndex(u=1 - u)
        return space.model_copy(update=update)


# Global oracle service instance
oracle_service = OracleService()
