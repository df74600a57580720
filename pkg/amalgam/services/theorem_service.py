# amalgam/services/theorem_service.py
# Sharp embeddings between Wiener amalgam spaces and classical spaces

from fractions import Fraction

from amalgam.core.exceptions import MalformedQuery
from amalgam.models.spaces import EmbeddingQuery, FamilyKind, Thm111Reading, VerdictStatus, WeightSide
from amalgam.services.criterion_service import Ruling, criterion_service
from amalgam.services.index_service import HALF, index_service

SOBOLEV_TO_WIENER = "sobolev-to-wiener"
WIENER_TO_SOBOLEV = "wiener-to-sobolev"
HARDY_TO_WIENER = "hardy-to-wiener"
WIENER_TO_HARDY = "wiener-to-hardy"
BESOV_P0_TO_WIENER = "besov-p0-to-wiener"
WIENER_TO_BESOV_P0 = "wiener-to-besov-p0"
BESOV_Q0_TO_WIENER = "besov-q0-to-wiener"
WIENER_TO_BESOV_Q0 = "wiener-to-besov-q0"
MODULATION_TO_WIENER = "modulation-to-wiener"
WIENER_TO_MODULATION = "wiener-to-modulation"
ALPHA_MODULATION_TO_WIENER = "alpha-modulation-to-wiener"
WIENER_TO_ALPHA_MODULATION = "wiener-to-alpha-modulation"
TRIEBEL_TO_WIENER = "triebel-to-wiener"
WIENER_TO_TRIEBEL = "wiener-to-triebel"

# Family whose growth certifies failure, by the linear piece attaining tau1/sigma1
PIECE_HINTS = {
    1: FamilyKind.MODULATED_BUMP,
    2: FamilyKind.RADEMACHER_SHELL,
    3: FamilyKind.DYADIC_SHELL_SUM,
}
ALPHA_PIECE_HINTS = {
    1: FamilyKind.ALPHA_CENTER_TRANSLATES,
    2: FamilyKind.RADEMACHER_SHELL,
    3: FamilyKind.ALPHA_BLOCK_TRANSLATES,
}

OPEN_BESOV_NOTE = (
    "remark after the Besov(p,q0) theorems: the region q < min(q0,2), p > max(q0,2) "
    "is a remaining question"
)
OPEN_TRIEBEL_NOTE = (
    "closing remark of the Wiener to Triebel theorem: the case q > 2 is only conjectured"
)
SRC = WeightSide.SRC
DST = WeightSide.DST


def tau1_hint(u: Fraction, v: Fraction) -> FamilyKind:
    return PIECE_HINTS[index_service.max_piece(index_service.tau1_pieces(u, v))]


def sigma1_hint(u: Fraction, v: Fraction) -> FamilyKind:
    return PIECE_HINTS[index_service.min_piece(index_service.tau1_pieces(u, v))]


class TheoremService:
    """Service for the main catalogue of sharp embeddings

    Every method reads the query in canonical form (weights s on both
    sides) and returns a Ruling for criterion_service.settle.
    """

    # Sobolev spaces L^{s,r}

    def sobolev_to_wiener(self, query: EmbeddingQuery) -> Ruling:
        ur = query.src.exponent("r")
        up, vq = query.dst.exponent("p"), query.dst.exponent("q")
        if ur > 1:
            raise MalformedQuery("Sobolev spaces need 1 <= r <= inf")
        if up > 1:
            return criterion_service.outside(SOBOLEV_TO_WIENER, "needs 1 <= p <= inf")
        if ur < up:
            return criterion_service.fails(SOBOLEV_TO_WIENER, "r<=p")

        threshold = index_service.tau1(ur, vq, query.d)
        if ur < vq and vq > HALF:
            clause, condition, inclusive = "(1)", "r>q, q<2: s>tau1(r,q)", False
        elif ur < 1 and vq <= max(HALF, ur):
            clause, condition, inclusive = "(2)", "1<r, min(2,r)<=q: s>=tau1(r,q)", True
        elif vq == 0:
            clause, condition, inclusive = "(3)", "r=1, q=inf: s>=tau1(r,q)", True
        else:
            clause, condition, inclusive = "(4)", "r=1, q<inf: s>tau1(r,q)", False
        return Ruling(
            SOBOLEV_TO_WIENER,
            criterion=criterion_service.criterion(clause, condition, threshold, inclusive, SRC),
            hint=tau1_hint(ur, vq),
            boundary_hint=FamilyKind.APPROX_IDENTITY if ur == 1 else None,
        )

    def wiener_to_sobolev(self, query: EmbeddingQuery) -> Ruling:
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        ur = query.dst.exponent("r")
        if ur > 1:
            raise MalformedQuery("Sobolev spaces need 1 <= r <= inf")
        if up > 1:
            return criterion_service.outside(WIENER_TO_SOBOLEV, "needs 1 <= p <= inf")
        if up < ur:
            return criterion_service.fails(WIENER_TO_SOBOLEV, "p<=r")

        threshold = index_service.sigma1(ur, vq, query.d)
        if ur > vq and vq < HALF:
            clause, condition, inclusive = "(1)", "r<q, q>2: s<sigma1(r,q)", False
        elif ur > 0 and vq >= min(ur, HALF):
            clause, condition, inclusive = "(2)", "r<inf, q<=max(r,2): s<=sigma1(r,q)", True
        elif vq >= 1:
            clause, condition, inclusive = "(3)", "r=inf, q<=1: s<=sigma1(r,q)", True
        else:
            clause, condition, inclusive = "(4)", "r=inf, q>1: s<sigma1(r,q)", False
        return Ruling(
            WIENER_TO_SOBOLEV,
            criterion=criterion_service.criterion(clause, condition, threshold, inclusive, DST),
            hint=sigma1_hint(ur, vq),
            boundary_hint=FamilyKind.APPROX_IDENTITY if ur == 0 else None,
        )

    # Local Hardy spaces h_r

    def hardy_to_wiener(self, query: EmbeddingQuery) -> Ruling:
        ur = query.src.exponent("r")
        up, vq = query.dst.exponent("p"), query.dst.exponent("q")
        if ur == 0:
            raise MalformedQuery("local Hardy spaces need 0 < r < inf")
        if ur < up:
            return criterion_service.fails(HARDY_TO_WIENER, "r<=p")

        threshold = index_service.tau1(ur, vq, query.d)
        if ur < vq and vq > HALF:
            clause, condition, inclusive = "(1)", "r>q, q<2: s>tau1(r,q)", False
        else:
            clause, condition, inclusive = "(2)", "r<=q or q>=2: s>=tau1(r,q)", True
        return Ruling(
            HARDY_TO_WIENER,
            criterion=criterion_service.criterion(clause, condition, threshold, inclusive, SRC),
            hint=tau1_hint(ur, vq),
        )

    def wiener_to_hardy(self, query: EmbeddingQuery) -> Ruling:
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        ur = query.dst.exponent("r")
        if ur == 0:
            raise MalformedQuery("local Hardy spaces need 0 < r < inf")
        if up < ur:
            return criterion_service.fails(WIENER_TO_HARDY, "p<=r")

        threshold = index_service.sigma1(ur, vq, query.d)
        if ur > vq and vq < HALF:
            clause, condition, inclusive = "(1)", "r<q, q>2: s<sigma1(r,q)", False
        else:
            clause, condition, inclusive = "(2)", "r>=q or q<=2: s<=sigma1(r,q)", True
        return Ruling(
            WIENER_TO_HARDY,
            criterion=criterion_service.criterion(clause, condition, threshold, inclusive, DST),
            hint=sigma1_hint(ur, vq),
        )

    # Besov spaces with the Wiener q: B_{p0,q}

    def besov_p0_to_wiener(self, query: EmbeddingQuery) -> Ruling:
        u0 = query.src.exponent("p")
        up, vq = query.dst.exponent("p"), query.dst.exponent("q")
        if u0 < up:
            return criterion_service.fails(BESOV_P0_TO_WIENER, "p0<=p")

        threshold = index_service.tau1(u0, vq, query.d)
        if up <= vq:
            clause, condition, inclusive = "(1)", "p>=q: s>=tau1(p0,q)", True
        else:
            clause, condition, inclusive = "(2)", "p<q: s>tau1(p0,q)", False
        return Ruling(
            BESOV_P0_TO_WIENER,
            criterion=criterion_service.criterion(clause, condition, threshold, inclusive, SRC),
            hint=tau1_hint(u0, vq),
            boundary_hint=FamilyKind.UNIFORM_LACUNARY,
        )

    def wiener_to_besov_p0(self, query: EmbeddingQuery) -> Ruling:
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        u0 = query.dst.exponent("p")
        if up < u0:
            return criterion_service.fails(WIENER_TO_BESOV_P0, "p<=p0")

        threshold = index_service.sigma1(u0, vq, query.d)
        if up >= vq:
            clause, condition, inclusive = "(1)", "p<=q: s<=sigma1(p0,q)", True
        else:
            clause, condition, inclusive = "(2)", "p>q: s<sigma1(p0,q)", False
        return Ruling(
            WIENER_TO_BESOV_P0,
            criterion=criterion_service.criterion(clause, condition, threshold, inclusive, DST),
            hint=sigma1_hint(u0, vq),
            boundary_hint=FamilyKind.UNIFORM_LACUNARY,
        )

    # Besov spaces with the Wiener p: B_{p,q0}

    def besov_q0_to_wiener(self, query: EmbeddingQuery) -> Ruling:
        v0 = query.src.exponent("q")
        up, vq = query.dst.exponent("p"), query.dst.exponent("q")
        threshold = index_service.tau1(up, vq, query.d)
        hint = tau1_hint(up, vq)

        if not (vq <= max(v0, HALF) or up >= min(v0, HALF)):
            if not query.options.use_remark_sufficiency:
                return criterion_service.open_question(BESOV_Q0_TO_WIENER, OPEN_BESOV_NOTE)
            return Ruling(
                BESOV_Q0_TO_WIENER,
                criterion=criterion_service.criterion(
                    "remark-sufficiency", "q<min(q0,2), p>max(q0,2): s>tau1(p,q)", threshold, False, SRC
                ),
                miss_status=VerdictStatus.OPEN_IN_PAPER,
                note=OPEN_BESOV_NOTE,
            )

        if v0 >= max(up, vq):
            clause, condition, inclusive = "(1)", "q0<=min(p,q): s>=tau1(p,q)", True
        elif up > v0 >= vq:
            clause, condition, inclusive = "(2)", "p<q0<=q: s>tau1(p,q)", False
        else:
            clause, condition, inclusive = "(3)", "q<q0: s>tau1(p,q)", False
        return Ruling(
            BESOV_Q0_TO_WIENER,
            criterion=criterion_service.criterion(clause, condition, threshold, inclusive, SRC),
            hint=hint,
            boundary_hint=FamilyKind.UNIFORM_LACUNARY,
        )

    def wiener_to_besov_q0(self, query: EmbeddingQuery) -> Ruling:
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        v0 = query.dst.exponent("q")
        threshold = index_service.sigma1(up, vq, query.d)

        if not (vq >= min(v0, HALF) or up <= max(v0, HALF)):
            if not query.options.use_remark_sufficiency:
                return criterion_service.open_question(WIENER_TO_BESOV_Q0, OPEN_BESOV_NOTE)
            return Ruling(
                WIENER_TO_BESOV_Q0,
                criterion=criterion_service.criterion(
                    "remark-sufficiency", "q>max(q0,2), p<min(q0,2): s<sigma1(p,q)", threshold, False, DST
                ),
                miss_status=VerdictStatus.OPEN_IN_PAPER,
                note=OPEN_BESOV_NOTE,
            )

        if v0 <= min(up, vq):
            clause, condition, inclusive = "(1)", "q0>=max(p,q): s<=sigma1(p,q)", True
        elif up < v0 <= vq:
            clause, condition, inclusive = "(2)", "p>q0>=q: s<sigma1(p,q)", False
        else:
            clause, condition, inclusive = "(3)", "q>q0: s<sigma1(p,q)", False
        return Ruling(
            WIENER_TO_BESOV_Q0,
            criterion=criterion_service.criterion(clause, condition, threshold, inclusive, DST),
            hint=sigma1_hint(up, vq),
            boundary_hint=FamilyKind.UNIFORM_LACUNARY,
        )

    # Modulation spaces M^s_{p1,q1}

    def modulation_to_wiener(self, query: EmbeddingQuery) -> Ruling:
        u1, v1 = query.src.exponent("p"), query.src.exponent("q")
        up, vq = query.dst.exponent("p"), query.dst.exponent("q")
        if u1 < up:
            return criterion_service.fails(MODULATION_TO_WIENER, "p1<=p")

        if v1 >= max(up, vq):
            return Ruling(
                MODULATION_TO_WIENER,
                criterion=criterion_service.criterion("(1)", "q1<=min(p,q): s>=0", Fraction(0), True, SRC),
                hint=FamilyKind.MODULATED_BUMP,
            )
        spread = FamilyKind.SPREAD_TRANSLATES if up >= vq else FamilyKind.UNIFORM_LACUNARY
        threshold = query.d * (max(up, vq) - v1)
        return Ruling(
            MODULATION_TO_WIENER,
            criterion=criterion_service.criterion(
                "(2)", "s+d/q1>d/min(p,q)", threshold, False, SRC
            ),
            hint=spread,
        )

    def wiener_to_modulation(self, query: EmbeddingQuery) -> Ruling:
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        u1, v1 = query.dst.exponent("p"), query.dst.exponent("q")
        if u1 > up:
            return criterion_service.fails(WIENER_TO_MODULATION, "p1>=p")

        if v1 <= min(up, vq):
            return Ruling(
                WIENER_TO_MODULATION,
                criterion=criterion_service.criterion("(1)", "q1>=max(p,q): s<=0", Fraction(0), True, DST),
                hint=FamilyKind.MODULATED_BUMP,
            )
        spread = FamilyKind.SPREAD_TRANSLATES if up <= vq else FamilyKind.UNIFORM_LACUNARY
        threshold = query.d * (min(up, vq) - v1)
        return Ruling(
            WIENER_TO_MODULATION,
            criterion=criterion_service.criterion(
                "(2)", "s+d/q1<d/max(p,q)", threshold, False, DST
            ),
            hint=spread,
        )

    # Alpha-modulation spaces M^{s,alpha}_{p,q}

    def _alpha(self, query: EmbeddingQuery, side: str) -> Fraction:
        alpha = getattr(query, side).alpha
        if not 0 < alpha < 1:
            raise MalformedQuery("alpha-modulation spaces need 0 < alpha < 1")
        return alpha

    def alpha_modulation_to_wiener(self, query: EmbeddingQuery) -> Ruling:
        alpha = self._alpha(query, "src")
        up, vq = query.dst.exponent("p"), query.dst.exponent("q")
        d = query.d

        if up <= vq:
            pieces = index_service.tau1_pieces(up, vq)
            return Ruling(
                ALPHA_MODULATION_TO_WIENER,
                criterion=criterion_service.criterion(
                    "(1)", "p>=q: s>=alpha*tau1(p,q)", alpha * index_service.tau1(up, vq, d), True, SRC
                ),
                hint=ALPHA_PIECE_HINTS[index_service.max_piece(pieces)],
            )

        shift = d * (1 - alpha) * (up - vq)
        if query.options.thm111_reading == Thm111Reading.AS_WRITTEN_TAU:
            base, condition = index_service.tau_sigma_a(up, vq, d)[0], "p<q: s>alpha*tau(p,q)+d(1-alpha)(1/p-1/q)"
        else:
            base, condition = index_service.tau1(up, vq, d), "p<q: s>alpha*tau1(p,q)+d(1-alpha)(1/p-1/q)"

        def hint(s_eff: Fraction) -> FamilyKind:
            if s_eff <= shift:
                return FamilyKind.ALPHA_CENTER_TRANSLATES
            return FamilyKind.ALPHA_BLOCK_TRANSLATES

        return Ruling(
            ALPHA_MODULATION_TO_WIENER,
            criterion=criterion_service.criterion("(2)", condition, alpha * base + shift, False, SRC),
            hint=hint,
        )

    def wiener_to_alpha_modulation(self, query: EmbeddingQuery) -> Ruling:
        alpha = self._alpha(query, "dst")
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        d = query.d
        sigma1 = index_service.sigma1(up, vq, d)

        if up >= vq:
            pieces = index_service.tau1_pieces(up, vq)
            return Ruling(
                WIENER_TO_ALPHA_MODULATION,
                criterion=criterion_service.criterion(
                    "(1)", "p<=q: s<=alpha*sigma1(p,q)", alpha * sigma1, True, DST
                ),
                hint=ALPHA_PIECE_HINTS[index_service.min_piece(pieces)],
            )

        shift = d * (1 - alpha) * (up - vq)

        def hint(s_eff: Fraction) -> FamilyKind:
            if s_eff >= shift:
                return FamilyKind.ALPHA_CENTER_TRANSLATES
            return FamilyKind.ALPHA_BLOCK_TRANSLATES

        return Ruling(
            WIENER_TO_ALPHA_MODULATION,
            criterion=criterion_service.criterion(
                "(2)", "p>q: s<alpha*sigma1(p,q)+d(1-alpha)(1/p-1/q)", alpha * sigma1 + shift, False, DST
            ),
            hint=hint,
        )

    # Triebel spaces F^s_{p,r}, 0 < p <= 1

    def triebel_to_wiener(self, query: EmbeddingQuery) -> Ruling:
        up, vq = query.dst.exponent("p"), query.dst.exponent("q")
        if up < 1:
            return criterion_service.outside(TRIEBEL_TO_WIENER, "needs 0 < p <= 1")

        threshold = index_service.a(up, vq, query.d)
        if up >= vq:
            clause, condition, inclusive = "(1)", "p<=q: s>=d(1/p+1/q-1)", True
        else:
            clause, condition, inclusive = "(2)", "p>q: s>d(1/p+1/q-1)", False
        return Ruling(
            TRIEBEL_TO_WIENER,
            criterion=criterion_service.criterion(clause, condition, threshold, inclusive, SRC),
            hint=FamilyKind.DYADIC_SHELL_SUM,
            boundary_hint=FamilyKind.UNIFORM_LACUNARY,
        )

    def wiener_to_triebel(self, query: EmbeddingQuery) -> Ruling:
        up, vq = query.src.exponent("p"), query.src.exponent("q")
        vr = query.dst.exponent("q")
        if up < 1:
            return criterion_service.outside(WIENER_TO_TRIEBEL, "needs 0 < p <= 1")

        if vq < HALF:
            if not query.options.use_remark_sufficiency:
                return criterion_service.open_question(WIENER_TO_TRIEBEL, OPEN_TRIEBEL_NOTE)
            # the remark's necessity reads s <= sigma1; only the endpoint stays open
            return Ruling(
                WIENER_TO_TRIEBEL,
                criterion=criterion_service.criterion(
                    "remark-sufficiency", "q>2: s<sigma1(p,q)", index_service.sigma1(up, vq, query.d), False, DST
                ),
                hint=FamilyKind.RADEMACHER_SHELL,
                open_at_threshold=True,
                note=OPEN_TRIEBEL_NOTE,
            )

        inclusive = vq >= vr
        if up <= vq:
            clause = "(1)" if inclusive else "(2)"
            condition = "p>=q, q<=r: s<=0" if inclusive else "p>=q, q>r: s<0"
        else:
            clause = "(3)" if inclusive else "(4)"
            condition = "p<q<=2, q<=r: s<=0" if inclusive else "p<q<=2, q>r: s<0"
        return Ruling(
            WIENER_TO_TRIEBEL,
            criterion=criterion_service.criterion(clause, condition, Fraction(0), inclusive, DST),
            hint=FamilyKind.MODULATED_BUMP,
            boundary_hint=FamilyKind.UNIFORM_LACUNARY,
        )


# Global theorem service instance
theorem_service = TheoremService()
