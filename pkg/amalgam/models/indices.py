# amalgam/models/indices.py
# Exact index data models

import re
from fractions import Fraction
from typing import Annotated, Any, Optional

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    WithJsonSchema,
    field_validator,
    model_serializer,
    model_validator,
)

_RATIONAL_PATTERN = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(value: Any) -> Fraction:
    """Parse an exact rational from a Fraction, an int or an `a/b` string"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace(" ", "")
        if not _RATIONAL_PATTERN.match(text):
            raise ValueError(f"not an exact rational: {value!r} (use the a/b syntax)")
        try:
            return Fraction(text)
        except ZeroDivisionError as exc:
            raise ValueError(f"zero denominator in {value!r}") from exc
    raise ValueError(f"rationals are given as int, str or Fraction, not {type(value).__name__}")


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(lambda value: str(value), return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^[+-]?\d+(/\d+)?$"}),
]


class ReciprocalIndex(BaseModel):
    """Reciprocal u = 1/p of a Lebesgue exponent p in (0, inf]"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u: Rational = Field(..., description="Reciprocal exponent; 0 encodes p = inf, u > 1 encodes p < 1")

    @model_validator(mode="before")
    @classmethod
    def _from_exponent(cls, data: Any) -> Any:
        # Bare values are exponents p, not reciprocals
        if isinstance(data, (str, int, Fraction)) and not isinstance(data, bool):
            return {"u": cls.reciprocal_of(data)}
        return data

    @field_validator("u")
    @classmethod
    def _non_negative(cls, value: Fraction) -> Fraction:
        if value < 0:
            raise ValueError("reciprocal index must be non-negative")
        return value

    @staticmethod
    def reciprocal_of(exponent: Any) -> Fraction:
        """Return 1/p for an exponent given as `inf`, an int, a Fraction or `a/b`"""
        if isinstance(exponent, str) and exponent.strip().lower() in ("inf", "infinity", "oo"):
            return Fraction(0)
        p = parse_rational(exponent)
        if p <= 0:
            raise ValueError(f"Lebesgue exponents are positive, got {exponent!r}")
        return 1 / p

    @classmethod
    def of(cls, exponent: Any) -> "ReciprocalIndex":
        return cls(u=cls.reciprocal_of(exponent))

    @property
    def exponent(self) -> Optional[Fraction]:
        """The exponent p, or None for p = inf"""
        return None if self.u == 0 else 1 / self.u

    @property
    def is_infinite(self) -> bool:
        return self.u == 0

    def as_float(self) -> float:
        """The exponent p as a float (inf allowed)"""
        return float("inf") if self.u == 0 else float(1 / self.u)

    def __str__(self) -> str:
        return "inf" if self.u == 0 else str(1 / self.u)

    @model_serializer
    def _serialize(self) -> str:
        return str(self)


def exponent_le(u_p: Fraction, u_r: Fraction) -> bool:
    """p <= r on the reciprocal scale, i.e. u_p >= u_r"""
    return u_p >= u_r


def exponent_min(u_p: Fraction, u_r: Fraction) -> Fraction:
    """Reciprocal of min(p, r)"""
    return max(u_p, u_r)


def exponent_max(u_p: Fraction, u_r: Fraction) -> Fraction:
    """Reciprocal of max(p, r)"""
    return min(u_p, u_r)
