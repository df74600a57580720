# amalgam/services/index_service.py
# Piecewise-linear index functions on reciprocal exponents

from fractions import Fraction
from typing import Tuple, Union

from amalgam.models.indices import ReciprocalIndex

IndexLike = Union[ReciprocalIndex, Fraction, int]

HALF = Fraction(1, 2)


def _u(value: IndexLike) -> Fraction:
    if isinstance(value, ReciprocalIndex):
        return value.u
    return Fraction(value)


class IndexService:
    """Service for the critical index functions

    All arguments are reciprocal exponents u = 1/p, v = 1/q. Results are exact.
    """

    def tau1_pieces(self, u: IndexLike, v: IndexLike) -> Tuple[Fraction, Fraction, Fraction]:
        """Linear pieces 0, v - 1/2, u + v - 1 of tau1 and sigma1 (before the factor d)"""
        u, v = _u(u), _u(v)
        return Fraction(0), v - HALF, u + v - 1

    def tau_pieces(self, u: IndexLike, v: IndexLike) -> Tuple[Fraction, Fraction, Fraction]:
        """Linear pieces 0, v - u, u + v - 1 of tau and sigma (before the factor d)"""
        u, v = _u(u), _u(v)
        return Fraction(0), v - u, u + v - 1

    def tau1(self, u: IndexLike, v: IndexLike, d: int) -> Fraction:
        return d * max(self.tau1_pieces(u, v))

    def sigma1(self, u: IndexLike, v: IndexLike, d: int) -> Fraction:
        return d * min(self.tau1_pieces(u, v))

    def tau_sigma_a(self, u: IndexLike, v: IndexLike, d: int) -> Tuple[Fraction, Fraction, Fraction]:
        pieces = self.tau_pieces(u, v)
        return d * max(pieces), d * min(pieces), d * pieces[2]

    def a(self, u: IndexLike, v: IndexLike, d: int) -> Fraction:
        return d * (_u(u) + _u(v) - 1)

    def dual_index(self, u: IndexLike) -> Fraction:
        """Reciprocal of the dual exponent; p < 1 dualizes to inf"""
        u = _u(u)
        return 1 - u if u <= 1 else Fraction(0)

    def max_piece(self, pieces: Tuple[Fraction, ...]) -> int:
        """1-based index of the first piece attaining the maximum"""
        top = max(pieces)
        return pieces.index(top) + 1

    def min_piece(self, pieces: Tuple[Fraction, ...]) -> int:
        """1-based index of the first piece attaining the minimum"""
        bottom = min(pieces)
        return pieces.index(bottom) + 1


# Global index service instance
index_service = IndexService()
