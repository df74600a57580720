# amalgam/models/spaces.py
# Space, query and verdict data models

import re
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from amalgam.core.exceptions import UsageException
from amalgam.models.indices import Rational, ReciprocalIndex


class SpaceFamily(str, Enum):
    """Function space families"""
    SOBOLEV = "Sobolev"
    LOCAL_HARDY = "LocalHardy"
    BESOV = "Besov"
    TRIEBEL = "Triebel"
    MODULATION = "Modulation"
    WIENER = "Wiener"
    ALPHA_MODULATION = "AlphaModulation"
    SEQ_WEIGHTED0 = "SeqWeighted0"
    SEQ_WEIGHTED1 = "SeqWeighted1"


# Short tags used by the `X[k=v,...]` spec syntax
FAMILY_TAGS: Dict[str, SpaceFamily] = {
    "L": SpaceFamily.SOBOLEV,
    "h": SpaceFamily.LOCAL_HARDY,
    "B": SpaceFamily.BESOV,
    "F": SpaceFamily.TRIEBEL,
    "M": SpaceFamily.MODULATION,
    "W": SpaceFamily.WIENER,
    "Ma": SpaceFamily.ALPHA_MODULATION,
    "l0": SpaceFamily.SEQ_WEIGHTED0,
    "l1": SpaceFamily.SEQ_WEIGHTED1,
}
_TAG_OF = {family: tag for tag, family in FAMILY_TAGS.items()}

# Exponent fields each family carries, in display order
FAMILY_EXPONENTS: Dict[SpaceFamily, Tuple[str, ...]] = {
    SpaceFamily.SOBOLEV: ("r",),
    SpaceFamily.LOCAL_HARDY: ("r",),
    SpaceFamily.BESOV: ("p", "q"),
    SpaceFamily.TRIEBEL: ("p", "q"),
    SpaceFamily.MODULATION: ("p", "q"),
    SpaceFamily.WIENER: ("p", "q"),
    SpaceFamily.ALPHA_MODULATION: ("p", "q"),
    SpaceFamily.SEQ_WEIGHTED0: ("q",),
    SpaceFamily.SEQ_WEIGHTED1: ("q",),
}

_SPEC_PATTERN = re.compile(r"^\s*([A-Za-z]+[01]?)\s*\[(.*)\]\s*$")


class SpaceSpec(BaseModel):
    """One function space: family tag plus index parameters"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: SpaceFamily = Field(..., description="Space family")
    p: Optional[ReciprocalIndex] = Field(None, description="Integrability exponent (global for Wiener)")
    q: Optional[ReciprocalIndex] = Field(None, description="Summability exponent (local for Wiener)")
    r: Optional[ReciprocalIndex] = Field(None, description="Lebesgue exponent of Sobolev and local Hardy spaces")
    s: Rational = Field(Fraction(0), description="Smoothness weight")
    alpha: Optional[Rational] = Field(None, description="Covering parameter of alpha-modulation spaces")

    @model_validator(mode="after")
    def _check_fields(self) -> "SpaceSpec":
        wanted = set(FAMILY_EXPONENTS[self.family])
        for name in ("p", "q", "r"):
            present = getattr(self, name) is not None
            if present and name not in wanted:
                raise ValueError(f"{self.family.value} spaces take no '{name}' exponent")
            if not present and name in wanted:
                raise ValueError(f"{self.family.value} spaces need the '{name}' exponent")
        if (self.alpha is not None) != (self.family == SpaceFamily.ALPHA_MODULATION):
            raise ValueError("alpha is given exactly for AlphaModulation spaces")
        return self

    @classmethod
    def parse(cls, text: str) -> "SpaceSpec":
        """Parse the `W[p=2,q=1/2,s=-3/4]` syntax"""
        match = _SPEC_PATTERN.match(text)
        if not match or match.group(1) not in FAMILY_TAGS:
            raise UsageException(
                f"cannot parse space spec {text!r}; expected TAG[k=v,...] with TAG in {sorted(FAMILY_TAGS)}"
            )
        family = FAMILY_TAGS[match.group(1)]
        params: Dict[str, Any] = {"family": family}
        body = match.group(2).strip()
        for item in filter(None, (part.strip() for part in body.split(","))):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in ("p", "q", "r", "s", "alpha"):
                raise UsageException(f"bad parameter {item!r} in space spec {text!r}")
            if key in params:
                raise UsageException(f"parameter {key!r} given twice in {text!r}")
            params[key] = value.strip()
        try:
            return cls(**params)
        except ValueError as exc:
            raise UsageException(f"invalid space spec {text!r}: {exc}") from exc

    @property
    def tag(self) -> str:
        return _TAG_OF[self.family]

    def exponent(self, name: str) -> Fraction:
        """Reciprocal value u of the named exponent"""
        index = getattr(self, name)
        if index is None:
            raise AttributeError(f"{self.family.value} has no '{name}' exponent")
        return index.u

    def with_s(self, s: Fraction) -> "SpaceSpec":
        return self.model_copy(update={"s": Fraction(s)})

    def __str__(self) -> str:
        parts = [f"{name}={getattr(self, name)}" for name in FAMILY_EXPONENTS[self.family]]
        parts.append(f"s={self.s}")
        if self.alpha is not None:
            parts.append(f"alpha={self.alpha}")
        return f"{self.tag}[{','.join(parts)}]"


class Thm111Reading(str, Enum):
    """Readings of the strict clause of the alpha-modulation to Wiener theorem"""
    AS_WRITTEN_TAU = "AsWritten_tau"
    ALTERNATE_TAU1 = "Alternate_tau1"


class OracleOptions(BaseModel):
    """Oracle switches"""
    model_config = ConfigDict(frozen=True)

    thm111_reading: Thm111Reading = Field(Thm111Reading.AS_WRITTEN_TAU, description="Threshold reading for alpha-modulation clause (2)")
    use_remark_sufficiency: bool = Field(False, description="Refine the two open regions with the remarks' sufficient conditions")


class EmbeddingQuery(BaseModel):
    """Question 'does src embed into dst'"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    src: SpaceSpec = Field(..., description="Source space")
    dst: SpaceSpec = Field(..., description="Target space")
    d: int = Field(..., ge=1, description="Ambient dimension")
    options: OracleOptions = Field(default_factory=OracleOptions, description="Oracle options")


class VerdictStatus(str, Enum):
    """Oracle answer"""
    HOLDS = "Holds"
    FAILS = "Fails"
    OUTSIDE_HYPOTHESIS = "OutsideHypothesis"
    OPEN_IN_PAPER = "OpenInPaper"


class Boundary(str, Enum):
    """Position of s relative to the critical threshold"""
    INTERIOR = "Interior"
    NON_STRICT = "NonStrictBoundary"
    STRICT_EXCLUDED = "StrictBoundaryExcluded"


class FamilyKind(str, Enum):
    """Extremal function families"""
    MODULATED_BUMP = "ModulatedBump"
    SCALED_BUMP = "ScaledBump"
    APPROX_IDENTITY = "ApproxIdentity"
    DYADIC_SHELL_SUM = "DyadicShellSum"
    UNIFORM_LACUNARY = "UniformLacunary"
    SPREAD_TRANSLATES = "SpreadTranslates"
    RADEMACHER_SHELL = "RademacherShell"
    ALPHA_CENTER_TRANSLATES = "AlphaCenterTranslates"
    ALPHA_BLOCK_TRANSLATES = "AlphaBlockTranslates"


class WeightSide(str, Enum):
    """Which side's weight the threshold bounds"""
    SRC = "src"  # s_src - s_dst >= threshold
    DST = "dst"  # s_dst - s_src <= threshold


class Criterion(BaseModel):
    """Smoothness condition a clause imposes"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    clause: str = Field(..., description="Clause label, e.g. '(2)'")
    condition: str = Field(..., description="Clause text")
    threshold: Rational = Field(..., description="Critical smoothness")
    inclusive: bool = Field(..., description="Whether s equal to the threshold is admitted")
    side: WeightSide = Field(..., description="Direction of the comparison")

    def admits(self, s_eff: Fraction) -> bool:
        if s_eff == self.threshold:
            return self.inclusive
        if self.side == WeightSide.SRC:
            return s_eff > self.threshold
        return s_eff < self.threshold


class Verdict(BaseModel):
    """Oracle output"""
    model_config = ConfigDict(frozen=True)

    status: VerdictStatus = Field(..., description="Decision")
    theorem_id: str = Field(..., description="Catalogue entry that decided the query")
    clause: Optional[str] = Field(None, description="Matched clause, or the violated condition for Fails")
    boundary: Boundary = Field(Boundary.INTERIOR, description="Boundary classification of s")
    probe_hint: Optional[FamilyKind] = Field(None, description="Family certifying a failure")
    note: Optional[str] = Field(None, description="Remark citation for open or out-of-hypothesis answers")

    @model_validator(mode="after")
    def _check_fields(self) -> "Verdict":
        if self.status in (VerdictStatus.HOLDS, VerdictStatus.FAILS) and not self.clause:
            raise ValueError(f"{self.status.value} verdicts carry a clause")
        if self.status == VerdictStatus.OPEN_IN_PAPER and not self.note:
            raise ValueError("OpenInPaper verdicts carry the remark citation")
        return self


class QueryInputs(BaseModel):
    """Echo of the query inside a verdict record"""
    src: str = Field(..., description="Source space in spec syntax")
    dst: str = Field(..., description="Target space in spec syntax")
    d: int = Field(..., ge=1, description="Ambient dimension")
    thm111_reading: Thm111Reading = Field(Thm111Reading.AS_WRITTEN_TAU, description="Alpha clause reading")
    use_remark_sufficiency: bool = Field(False, description="Remark refinement switch")


class VerdictRecord(BaseModel):
    """Stable JSON form of a verdict and its query"""
    theorem: str = Field(..., description="Theorem id")
    status: VerdictStatus = Field(..., description="Decision")
    clause: Optional[str] = Field(None, description="Clause label")
    boundary: Boundary = Field(..., description="Boundary classification")
    probe_hint: Optional[FamilyKind] = Field(None, description="Failure family")
    note: Optional[str] = Field(None, description="Remark citation")
    inputs: QueryInputs = Field(..., description="Query echo")

    @classmethod
    def from_pair(cls, query: EmbeddingQuery, verdict: Verdict) -> "VerdictRecord":
        return cls(
            theorem=verdict.theorem_id,
            status=verdict.status,
            clause=verdict.clause,
            boundary=verdict.boundary,
            probe_hint=verdict.probe_hint,
            note=verdict.note,
            inputs=QueryInputs(
                src=str(query.src),
                dst=str(query.dst),
                d=query.d,
                thm111_reading=query.options.thm111_reading,
                use_remark_sufficiency=query.options.use_remark_sufficiency,
            ),
        )

    def to_pair(self) -> Tuple[EmbeddingQuery, Verdict]:
        query = EmbeddingQuery(
            src=SpaceSpec.parse(self.inputs.src),
            dst=SpaceSpec.parse(self.inputs.dst),
            d=self.inputs.d,
            options=OracleOptions(
                thm111_reading=self.inputs.thm111_reading,
                use_remark_sufficiency=self.inputs.use_remark_sufficiency,
            ),
        )
        verdict = Verdict(
            status=self.status,
            theorem_id=self.theorem,
            clause=self.clause,
            boundary=self.boundary,
            probe_hint=self.probe_hint,
            note=self.note,
        )
        return query, verdict


class TheoremKind(str, Enum):
    """Catalogue entry kinds"""
    MAIN = "main"
    EXTERNAL_SHARP = "external-sharp"
    SUFFICIENT = "sufficient"
    SEQUENCE = "sequence"


class CatalogueEntry(BaseModel):
    """One row of the theorem catalogue"""
    theorem_id: str = Field(..., description="Stable identifier")
    kind: TheoremKind = Field(..., description="Entry kind")
    source: SpaceFamily = Field(..., description="Source family")
    target: SpaceFamily = Field(..., description="Target family")
    hypothesis: str = Field(..., description="Standing hypothesis")
    clauses: List[str] = Field(default_factory=list, description="Clause texts")
