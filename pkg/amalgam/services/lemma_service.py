# amalgam/services/lemma_service.py
# Auxiliary embedding lemmas: quoted sharp results and sufficient conditions

from dataclasses import replace
from fractions import Fraction

from amalgam.core.exceptions import MalformedQuery
from amalgam.models.spaces import (
    EmbeddingQuery,
    FamilyKind,
    SpaceFamily,
    VerdictStatus,
    WeightSide,
)
from amalgam.services.criterion_service import Ruling, criterion_service
from amalgam.services.index_service import HALF, index_service
from amalgam.services.theorem_service import sigma1_hint, tau1_hint, theorem_service

SOBOLEV_TO_WIENER_DIAGONAL = "external-sharp:sobolev-to-wiener-diagonal"
HARDY_TO_WIENER_DIAGONAL = "external-sharp:hardy-to-wiener-diagonal"
WIENER_TO_HARDY_DIAGONAL = "external-sharp:wiener-to-hardy-diagonal"
BESOV_TO_WIENER_DIAGONAL = "external-sharp:besov-to-wiener-diagonal"
WIENER_TO_BESOV_DIAGONAL = "external-sharp:wiener-to-besov-diagonal"
BESOV_TO_MODULATION = "external-sharp:besov-to-modulation"
ALPHA_TO_MODULATION = "external-sharp:alpha-to-modulation"
MODULATION_TO_ALPHA = "external-sharp:modulation-to-alpha"
BESOV_TO_ALPHA = "external-sharp:besov-to-alpha"
ALPHA_TO_BESOV = "external-sharp:alpha-to-besov"
ALPHA_TO_ALPHA = "external-sharp:alpha-to-alpha"
TRIEBEL_TO_MODULATION = "external-sharp:triebel-to-modulation"
MODULATION_TO_TRIEBEL = "external-sharp:modulation-to-triebel"
MODULATION_WIENER_SANDWICH = "external-sharp:modulation-wiener-sandwich"
AMALGAM_MONOTONE = "sufficient:amalgam-monotone"
MODULATION_WIENER_EXCHANGE = "sufficient:modulation-wiener-exchange"
BESOV_TRIEBEL = "sufficient:besov-triebel"
SEQUENCE_L0 = "sequence-l0"
SEQUENCE_L1 = "sequence-l1"

SUFFICIENT_NOTE = "sufficient condition not met; the catalogue does not decide the converse"
TAU_PIECE_HINTS = {
    1: FamilyKind.MODULATED_BUMP,
    2: FamilyKind.SPREAD_TRANSLATES,
    3: FamilyKind.DYADIC_SHELL_SUM,
}
SRC = WeightSide.SRC
DST = WeightSide.DST


def _same(query: EmbeddingQuery, *names: str) -> bool:
    return all(query.src.exponent(name) == query.dst.exponent(name) for name in names)


def _alpha(query: EmbeddingQuery) -> Fraction:
    alpha = query.src.alpha if query.src.alpha is not None else query.dst.alpha
    if not 0 < alpha < 1:
        raise MalformedQuery("alpha-modulation spaces need 0 < alpha < 1")
    return alpha


class LemmaService:
    """Service for auxiliary lemmas the main theorems rest on"""

    # Diagonal cases of the main catalogue

    def sobolev_to_wiener_diagonal(self, query: EmbeddingQuery) -> Ruling:
        if query.src.exponent("r") != query.dst.exponent("p"):
            return criterion_service.outside(SOBOLEV_TO_WIENER_DIAGONAL, "needs r = p")
        return self._relabel(theorem_service.sobolev_to_wiener(query), SOBOLEV_TO_WIENER_DIAGONAL)

    def hardy_to_wiener_diagonal(self, query: EmbeddingQuery) -> Ruling:
        up, vq = query.dst.exponent("p"), query.dst.exponent("q")
        if query.src.exponent("r") != up:
            return criterion_service.outside(HARDY_TO_WIENER_DIAGONAL, "needs r = p")
        if up == 0:
            raise MalformedQuery("local Hardy spaces need 0 < r < inf")
        strict = vq > max(up, HALF)
        return Ruling(
            HARDY_TO_WIENER_DIAGONAL,
            criterion=criterion_service.criterion(
                "(1)", "s>=tau1(p,q), strict when q<min(p,2)", index_service.tau1(up, vq, query.d), not strict, SRC
            ),
            hint=tau1_hint(up, vq),
        )

    def wiener_to_hardy_diagonal(self, query: EmbeddingQuery) -> Ruling:
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        if query.dst.exponent("r") != up:
            return criterion_service.outside(WIENER_TO_HARDY_DIAGONAL, "needs r = p")
        if up == 0:
            raise MalformedQuery("local Hardy spaces need 0 < r < inf")
        strict = vq < min(up, HALF)
        return Ruling(
            WIENER_TO_HARDY_DIAGONAL,
            criterion=criterion_service.criterion(
                "(1)", "s<=sigma1(p,q), strict when q>max(p,2)", index_service.sigma1(up, vq, query.d), not strict, DST
            ),
            hint=sigma1_hint(up, vq),
        )

    def besov_to_wiener_diagonal(self, query: EmbeddingQuery) -> Ruling:
        if not _same(query, "p", "q"):
            return criterion_service.outside(BESOV_TO_WIENER_DIAGONAL, "needs equal p and q")
        up, vq = query.dst.exponent("p"), query.dst.exponent("q")
        strict = up > vq
        return Ruling(
            BESOV_TO_WIENER_DIAGONAL,
            criterion=criterion_service.criterion(
                "(1)", "s>=tau1(p,q), strict when p<q", index_service.tau1(up, vq, query.d), not strict, SRC
            ),
            hint=tau1_hint(up, vq),
            boundary_hint=FamilyKind.UNIFORM_LACUNARY,
        )

    def wiener_to_besov_diagonal(self, query: EmbeddingQuery) -> Ruling:
        if not _same(query, "p", "q"):
            return criterion_service.outside(WIENER_TO_BESOV_DIAGONAL, "needs equal p and q")
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        strict = up < vq
        return Ruling(
            WIENER_TO_BESOV_DIAGONAL,
            criterion=criterion_service.criterion(
                "(1)", "s<=sigma1(p,q), strict when p>q", index_service.sigma1(up, vq, query.d), not strict, DST
            ),
            hint=sigma1_hint(up, vq),
            boundary_hint=FamilyKind.UNIFORM_LACUNARY,
        )

    # Besov, modulation and alpha-modulation comparisons

    def besov_to_modulation(self, query: EmbeddingQuery) -> Ruling:
        if not _same(query, "p", "q"):
            return criterion_service.outside(BESOV_TO_MODULATION, "needs equal p and q")
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        pieces = index_service.tau_pieces(up, vq)
        return Ruling(
            BESOV_TO_MODULATION,
            criterion=criterion_service.criterion(
                "(1)", "s>=tau(p,q)", query.d * max(pieces), True, SRC
            ),
            hint=TAU_PIECE_HINTS[index_service.max_piece(pieces)],
        )

    def alpha_to_modulation(self, query: EmbeddingQuery) -> Ruling:
        alpha = _alpha(query)
        if not _same(query, "p", "q"):
            return criterion_service.outside(ALPHA_TO_MODULATION, "needs equal p and q")
        tau = index_service.tau_sigma_a(query.src.exponent("p"), query.src.exponent("q"), query.d)[0]
        return Ruling(
            ALPHA_TO_MODULATION,
            criterion=criterion_service.criterion("(1)", "s>=alpha*tau(p,q)", alpha * tau, True, SRC),
            hint=FamilyKind.ALPHA_BLOCK_TRANSLATES,
        )

    def modulation_to_alpha(self, query: EmbeddingQuery) -> Ruling:
        alpha = _alpha(query)
        if not _same(query, "p", "q"):
            return criterion_service.outside(MODULATION_TO_ALPHA, "needs equal p and q")
        sigma = index_service.tau_sigma_a(query.src.exponent("p"), query.src.exponent("q"), query.d)[1]
        return Ruling(
            MODULATION_TO_ALPHA,
            criterion=criterion_service.criterion("(2)", "s<=alpha*sigma(p,q)", alpha * sigma, True, DST),
            hint=FamilyKind.ALPHA_BLOCK_TRANSLATES,
        )

    def besov_to_alpha(self, query: EmbeddingQuery) -> Ruling:
        alpha = _alpha(query)
        if not _same(query, "p", "q"):
            return criterion_service.outside(BESOV_TO_ALPHA, "needs equal p and q")
        tau = index_service.tau_sigma_a(query.src.exponent("p"), query.src.exponent("q"), query.d)[0]
        return Ruling(
            BESOV_TO_ALPHA,
            criterion=criterion_service.criterion("(3)", "s>=(1-alpha)*tau(p,q)", (1 - alpha) * tau, True, SRC),
            hint=FamilyKind.ALPHA_CENTER_TRANSLATES,
        )

    def alpha_to_besov(self, query: EmbeddingQuery) -> Ruling:
        alpha = _alpha(query)
        if not _same(query, "p", "q"):
            return criterion_service.outside(ALPHA_TO_BESOV, "needs equal p and q")
        sigma = index_service.tau_sigma_a(query.src.exponent("p"), query.src.exponent("q"), query.d)[1]
        return Ruling(
            ALPHA_TO_BESOV,
            criterion=criterion_service.criterion("(4)", "s<=(1-alpha)*sigma(p,q)", (1 - alpha) * sigma, True, DST),
            hint=FamilyKind.ALPHA_CENTER_TRANSLATES,
        )

    def alpha_to_alpha(self, query: EmbeddingQuery) -> Ruling:
        alpha = _alpha(query)
        if query.src.alpha != query.dst.alpha or not _same(query, "p"):
            return criterion_service.outside(ALPHA_TO_ALPHA, "needs equal alpha and p")
        v, v1 = query.src.exponent("q"), query.dst.exponent("q")
        if v1 <= v:
            criterion = criterion_service.criterion("(1)", "q1>=q: s>=0", Fraction(0), True, SRC)
        else:
            criterion = criterion_service.criterion(
                "(2)", "q>q1: s>d(1-alpha)(1/q1-1/q)", query.d * (1 - alpha) * (v1 - v), False, SRC
            )
        return Ruling(ALPHA_TO_ALPHA, criterion=criterion, hint=FamilyKind.ALPHA_BLOCK_TRANSLATES)

    # Triebel and modulation, 0 < p <= 1

    def triebel_to_modulation(self, query: EmbeddingQuery) -> Ruling:
        if not _same(query, "p"):
            return criterion_service.outside(TRIEBEL_TO_MODULATION, "needs equal p")
        up, vq = query.dst.exponent("p"), query.dst.exponent("q")
        if up < 1:
            return criterion_service.outside(TRIEBEL_TO_MODULATION, "needs 0 < p <= 1")
        inclusive = up >= vq
        return Ruling(
            TRIEBEL_TO_MODULATION,
            criterion=criterion_service.criterion(
                "(1)" if inclusive else "(2)",
                "p<=q: s>=d(1/p+1/q-1)" if inclusive else "p>q: s>d(1/p+1/q-1)",
                index_service.a(up, vq, query.d),
                inclusive,
                SRC,
            ),
            hint=FamilyKind.DYADIC_SHELL_SUM,
            boundary_hint=FamilyKind.UNIFORM_LACUNARY,
        )

    def modulation_to_triebel(self, query: EmbeddingQuery) -> Ruling:
        if not _same(query, "p"):
            return criterion_service.outside(MODULATION_TO_TRIEBEL, "needs equal p")
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        vr = query.dst.exponent("q")
        if up < 1:
            return criterion_service.outside(MODULATION_TO_TRIEBEL, "needs 0 < p <= 1")
        if up <= vq:
            inclusive = vr <= vq
            criterion = criterion_service.criterion(
                "(1)" if inclusive else "(2)",
                "p>=q, r>=q: s<=0" if inclusive else "p>=q, r<q: s<0",
                Fraction(0),
                inclusive,
                DST,
            )
        else:
            criterion = criterion_service.criterion(
                "(3)", "p<q: s<d(1/q-1/p)", query.d * (vq - up), False, DST
            )
        return Ruling(
            MODULATION_TO_TRIEBEL,
            criterion=criterion,
            hint=FamilyKind.MODULATED_BUMP,
            boundary_hint=FamilyKind.UNIFORM_LACUNARY,
        )

    def modulation_wiener_sandwich(self, query: EmbeddingQuery) -> Ruling:
        """M_{p,q1} into W_{p,q} iff q1 <= min(p,q); W_{p,q} into M_{p,q1} iff q1 >= max(p,q)"""
        if not _same(query, "p") or query.src.s != query.dst.s:
            return criterion_service.outside(MODULATION_WIENER_SANDWICH, "needs equal p and equal weights")
        if query.src.family == SpaceFamily.MODULATION:
            v1, up, vq = query.src.exponent("q"), query.dst.exponent("p"), query.dst.exponent("q")
            if v1 >= max(up, vq):
                return criterion_service.holds(MODULATION_WIENER_SANDWICH, "(1) q1<=min(p,q)")
            hint = FamilyKind.SPREAD_TRANSLATES if up >= vq else FamilyKind.UNIFORM_LACUNARY
            return criterion_service.fails(MODULATION_WIENER_SANDWICH, "(1) q1<=min(p,q)", hint)
        up, vq, v1 = query.src.exponent("p"), query.src.exponent("q"), query.dst.exponent("q")
        if v1 <= min(up, vq):
            return criterion_service.holds(MODULATION_WIENER_SANDWICH, "(2) q1>=max(p,q)")
        hint = FamilyKind.SPREAD_TRANSLATES if up <= vq else FamilyKind.UNIFORM_LACUNARY
        return criterion_service.fails(MODULATION_WIENER_SANDWICH, "(2) q1>=max(p,q)", hint)

    # Sufficient conditions: negative answers are OutsideHypothesis

    def amalgam_monotone(self, query: EmbeddingQuery) -> Ruling:
        u0, v0 = query.src.exponent("p"), query.src.exponent("q")
        u1, v1 = query.dst.exponent("p"), query.dst.exponent("q")
        if u0 < u1:
            return criterion_service.outside(AMALGAM_MONOTONE, "needs p0 <= p1")
        if v0 >= v1:
            criterion = criterion_service.criterion("(1)", "p0<=p1, q0<=q1: s0>=s1", Fraction(0), True, SRC)
        else:
            criterion = criterion_service.criterion(
                "(4)", "p0<=p1, q1<q0: s0+d/q0>s1+d/q1", query.d * (v1 - v0), False, SRC
            )
        return self._sufficient(AMALGAM_MONOTONE, criterion)

    def modulation_wiener_exchange(self, query: EmbeddingQuery) -> Ruling:
        if not _same(query, "p", "q"):
            return criterion_service.outside(MODULATION_WIENER_EXCHANGE, "needs equal p and q")
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        if query.src.family == SpaceFamily.MODULATION:
            if up > vq:
                return criterion_service.outside(MODULATION_WIENER_EXCHANGE, "needs p >= q")
            criterion = criterion_service.criterion("(5)", "p>=q: M^s into W^s", Fraction(0), True, SRC)
        else:
            if up < vq:
                return criterion_service.outside(MODULATION_WIENER_EXCHANGE, "needs p <= q")
            criterion = criterion_service.criterion("(5)", "p<=q: W^s into M^s", Fraction(0), True, DST)
        return self._sufficient(MODULATION_WIENER_EXCHANGE, criterion)

    def besov_triebel(self, query: EmbeddingQuery) -> Ruling:
        src, dst = query.src, query.dst
        u0, v0 = src.exponent("p"), src.exponent("q")
        u1, v1 = dst.exponent("p"), dst.exponent("q")
        d = query.d
        families = (src.family, dst.family)

        if families == (SpaceFamily.BESOV, SpaceFamily.BESOV):
            if u0 < u1:
                return criterion_service.outside(BESOV_TRIEBEL, "needs p0 <= p1")
            criterion = criterion_service.criterion(
                "(1)", "p0<=p1: s0-d/p0>=s1-d/p1, equality needs q0<=q1", d * (u0 - u1), v0 >= v1, SRC
            )
        elif families == (SpaceFamily.TRIEBEL, SpaceFamily.TRIEBEL):
            if u0 < u1:
                return criterion_service.outside(BESOV_TRIEBEL, "needs p0 <= p1")
            if u0 > u1:
                criterion = criterion_service.criterion(
                    "(5)", "p0<p1: s0-d/p0>=s1-d/p1", d * (u0 - u1), True, SRC
                )
            else:
                criterion = criterion_service.criterion(
                    "(2)", "p0=p1: s0>=s1, equality needs q0<=q1", Fraction(0), v0 >= v1, SRC
                )
        elif u0 != u1:
            return criterion_service.outside(BESOV_TRIEBEL, "needs equal p between B and F")
        elif families == (SpaceFamily.BESOV, SpaceFamily.TRIEBEL):
            criterion = criterion_service.criterion(
                "(3)", "B_{p,min(p,q)} into F_{p,q}", Fraction(0), v0 >= max(u0, v1), SRC
            )
        else:
            criterion = criterion_service.criterion(
                "(3)", "F_{p,q} into B_{p,max(p,q)}", Fraction(0), v1 <= min(u0, v0), SRC
            )
        return self._sufficient(BESOV_TRIEBEL, criterion)

    # Weighted sequence spaces

    def sequence_l0(self, query: EmbeddingQuery) -> Ruling:
        v1, v2 = query.src.exponent("q"), query.dst.exponent("q")
        if v1 >= v2:
            criterion = criterion_service.criterion("(1)", "q1<=q2, s1>=s2", Fraction(0), True, SRC)
        else:
            criterion = criterion_service.criterion(
                "(2)", "q1>q2, s1+d/q1>s2+d/q2", query.d * (v2 - v1), False, SRC
            )
        return Ruling(SEQUENCE_L0, criterion=criterion, hint=FamilyKind.SPREAD_TRANSLATES)

    def sequence_l1(self, query: EmbeddingQuery) -> Ruling:
        v1, v2 = query.src.exponent("q"), query.dst.exponent("q")
        if v1 >= v2:
            criterion = criterion_service.criterion("(1)", "q1<=q2, s1>=s2", Fraction(0), True, SRC)
        else:
            criterion = criterion_service.criterion("(2)", "s1>s2", Fraction(0), False, SRC)
        return Ruling(SEQUENCE_L1, criterion=criterion, hint=FamilyKind.DYADIC_SHELL_SUM)

    def _sufficient(self, theorem_id: str, criterion) -> Ruling:
        return Ruling(
            theorem_id,
            criterion=criterion,
            miss_status=VerdictStatus.OUTSIDE_HYPOTHESIS,
            note=SUFFICIENT_NOTE,
        )

    def _relabel(self, ruling: Ruling, theorem_id: str) -> Ruling:
        verdict = ruling.verdict
        if verdict is not None:
            verdict = verdict.model_copy(update={"theorem_id": theorem_id})
        return replace(ruling, theorem_id=theorem_id, verdict=verdict)


# Global lemma service instance
lemma_service = LemmaService()
