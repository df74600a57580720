# tests/test_oracle_properties.py
# Grid-wide consistency of the oracle

import itertools
from fractions import Fraction

import pytest

from amalgam.core.exceptions import AmalgamException
from amalgam.models.indices import ReciprocalIndex
from amalgam.models.spaces import EmbeddingQuery, SpaceFamily, SpaceSpec, VerdictStatus
from amalgam.services import lemma_service as lemmas
from amalgam.services import theorem_service as theorems
from amalgam.services.oracle_service import oracle_service

F = SpaceFamily
STEP = Fraction(1, 4)
POINTS = [i * STEP for i in range(9)]
INTERIOR = [u for u in POINTS if 0 < u < 1]
SMOOTHNESS = [Fraction(k, 4) for k in range(-8, 9)]
ALPHA = Fraction(1, 2)


def space(family, s=Fraction(0), alpha=None, **exponents):
    return SpaceSpec(family=family, s=s, alpha=alpha, **{name: ReciprocalIndex(u=u) for name, u in exponents.items()})


PAIRS = {
    "sobolev": lambda u, v, w: (space(F.SOBOLEV, r=w), space(F.WIENER, p=u, q=v)),
    "hardy": lambda u, v, w: (space(F.LOCAL_HARDY, r=w), space(F.WIENER, p=u, q=v)),
    "besov": lambda u, v, w: (space(F.BESOV, p=w, q=v), space(F.WIENER, p=u, q=v)),
    "modulation": lambda u, v, w: (space(F.MODULATION, p=w, q=w), space(F.WIENER, p=u, q=v)),
    "wiener-sobolev": lambda u, v, w: (space(F.WIENER, p=u, q=v), space(F.SOBOLEV, r=w)),
    "wiener-modulation": lambda u, v, w: (space(F.WIENER, p=u, q=v), space(F.MODULATION, p=w, q=w)),
    "besov-q0": lambda u, v, w: (space(F.BESOV, p=u, q=w), space(F.WIENER, p=u, q=v)),
    "wiener-besov-q0": lambda u, v, w: (space(F.WIENER, p=u, q=v), space(F.BESOV, p=u, q=w)),
    "triebel": lambda u, v, w: (space(F.TRIEBEL, p=u, q=w), space(F.WIENER, p=u, q=v)),
    "wiener-triebel": lambda u, v, w: (space(F.WIENER, p=u, q=v), space(F.TRIEBEL, p=u, q=w)),
    "wiener-hardy": lambda u, v, w: (space(F.WIENER, p=u, q=v), space(F.LOCAL_HARDY, r=w)),
    "alpha-modulation": lambda u, v, w: (space(F.ALPHA_MODULATION, alpha=ALPHA, p=u, q=v), space(F.WIENER, p=u, q=v)),
    "wiener-alpha-modulation": lambda u, v, w: (space(F.WIENER, p=u, q=v), space(F.ALPHA_MODULATION, alpha=ALPHA, p=u, q=v)),
}


@pytest.mark.parametrize("name", sorted(PAIRS))
@pytest.mark.parametrize("d", [1, 2])
def test_raising_source_weight_never_breaks_an_embedding(name, d):
    for u, v, w in itertools.product(POINTS, repeat=3):
        src, dst = PAIRS[name](u, v, w)
        try:
            statuses = [oracle_service.decide(EmbeddingQuery(src=src.with_s(s), dst=dst, d=d)).status for s in SMOOTHNESS]
        except AmalgamException:
            continue
        if VerdictStatus.HOLDS in statuses:
            first = statuses.index(VerdictStatus.HOLDS)
            assert VerdictStatus.FAILS not in statuses[first:], (name, u, v, w, d)


@pytest.mark.parametrize("name", ["sobolev", "hardy", "besov", "modulation"])
def test_duality_preserves_status(name):
    for u, v, w in itertools.product(INTERIOR, repeat=3):
        src, dst = PAIRS[name](u, v, w)
        for s in SMOOTHNESS:
            query = EmbeddingQuery(src=src.with_s(s), dst=dst, d=1)
            dual = oracle_service.dualize_query(query)
            assert oracle_service.decide(query).status == oracle_service.decide(dual).status, (name, u, v, w, s)


def test_dualizing_twice_is_the_identity():
    query = EmbeddingQuery(src=space(F.SOBOLEV, s=Fraction(1, 3), r=Fraction(1, 4)), dst=space(F.WIENER, p=Fraction(1, 4), q=Fraction(3, 4)), d=1)
    assert oracle_service.dualize_query(oracle_service.dualize_query(query)) == query


def test_besov_p0_theorem_matches_diagonal_lemma():
    for u, v in itertools.product(POINTS, repeat=2):
        for s in SMOOTHNESS:
            query = EmbeddingQuery(src=space(F.BESOV, s=s, p=u, q=v), dst=space(F.WIENER, p=u, q=v), d=1)
            theorem = oracle_service.decide_with(theorems.BESOV_P0_TO_WIENER, query)
            lemma = oracle_service.decide_with(lemmas.BESOV_TO_WIENER_DIAGONAL, query)
            assert theorem.status == lemma.status
            assert theorem.boundary == lemma.boundary


def test_hardy_theorem_matches_diagonal_lemma():
    for u, v in itertools.product([x for x in POINTS if x > 0], POINTS):
        for s in SMOOTHNESS:
            query = EmbeddingQuery(src=space(F.LOCAL_HARDY, s=s, r=u), dst=space(F.WIENER, p=u, q=v), d=1)
            theorem = oracle_service.decide_with(theorems.HARDY_TO_WIENER, query)
            lemma = oracle_service.decide_with(lemmas.HARDY_TO_WIENER_DIAGONAL, query)
            assert theorem.status == lemma.status, (u, v, s)


@pytest.mark.parametrize("direction", ["into-wiener", "from-wiener"])
def test_triebel_with_q_two_matches_local_hardy(direction):
    for u, v in itertools.product([x for x in POINTS if x >= 1], POINTS):
        wiener = space(F.WIENER, p=u, q=v)
        for s in SMOOTHNESS:
            triebel = space(F.TRIEBEL, s=s, p=u, q=Fraction(1, 2))
            hardy = space(F.LOCAL_HARDY, s=s, r=u)
            if direction == "into-wiener":
                pairs = (triebel, wiener), (hardy, wiener)
            else:
                pairs = (wiener, triebel), (wiener, hardy)
            via_triebel, via_hardy = (oracle_service.decide(EmbeddingQuery(src=a, dst=b, d=1)) for a, b in pairs)
            if via_triebel.status == VerdictStatus.OPEN_IN_PAPER:
                continue
            assert (via_triebel.status, via_triebel.boundary) == (via_hardy.status, via_hardy.boundary), (u, v, s)


def test_triebel_from_wiener_is_open_for_large_q():
    query = EmbeddingQuery(
        src=space(F.WIENER, p=Fraction(1), q=Fraction(1, 4)), dst=space(F.TRIEBEL, p=Fraction(1), q=Fraction(1, 2)), d=1
    )
    assert oracle_service.decide(query).status == VerdictStatus.OPEN_IN_PAPER


def test_modulation_embeds_into_wiener_when_p_at_least_q():
    for u, v in itertools.product(POINTS, repeat=2):
        if u <= v:
            query = EmbeddingQuery(src=space(F.MODULATION, p=u, q=v), dst=space(F.WIENER, p=u, q=v), d=1)
            assert oracle_service.decide(query).status == VerdictStatus.HOLDS


def test_sandwich_is_the_zero_weight_slice():
    for u, v, w in itertools.product(POINTS, repeat=3):
        query = EmbeddingQuery(src=space(F.MODULATION, p=u, q=w), dst=space(F.WIENER, p=u, q=v), d=1)
        sandwich = oracle_service.decide_with(lemmas.MODULATION_WIENER_SANDWICH, query).status
        assert oracle_service.decide(query).status == sandwich, (u, v, w)


def test_sufficient_predicates_never_fail():
    for u0, v0, u1, v1 in itertools.product(POINTS[::2], repeat=4):
        query = EmbeddingQuery(src=space(F.WIENER, p=u0, q=v0), dst=space(F.WIENER, p=u1, q=v1), d=1)
        assert oracle_service.decide(query).status in (VerdictStatus.HOLDS, VerdictStatus.OUTSIDE_HYPOTHESIS)
