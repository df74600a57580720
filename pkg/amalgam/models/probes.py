# amalgam/models/probes.py
# Extremal family and probe report data models

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from amalgam.core.config import settings
from amalgam.models.grid import GridFunction, GridSpec
from amalgam.models.indices import Rational
from amalgam.models.spaces import FamilyKind, SpaceSpec, VerdictRecord, VerdictStatus


class SweepAxis(str, Enum):
    """What a SpreadTranslates sweep varies"""
    COUNT = "count"
    SPREAD = "spread"


class FamilySpec(BaseModel):
    """One extremal family and its parameter sweep"""
    model_config = ConfigDict(frozen=True)

    kind: FamilyKind = Field(..., description="Family construction")
    sweep: List[Rational] = Field(..., description="Sweep values: k, lambda, m, j, n or N, strictly increasing")
    theta: Rational = Field(0, description="Coefficient decay a_j = 2^{-j theta} or a_k = <k>^{-theta}")
    trials: int = Field(settings.PROBE_TRIALS, ge=1, description="Rademacher trials per member")
    seed: int = Field(settings.PROBE_SEED, description="Counter-based RNG key")
    spread: Optional[Rational] = Field(None, description="Translation distance N for translate families")
    count: Optional[int] = Field(None, ge=1, description="Number of translates for spread sweeps")
    axis: SweepAxis = Field(SweepAxis.COUNT, description="Sweep axis of SpreadTranslates")
    alpha: Optional[Rational] = Field(None, description="Covering parameter of the alpha families")

    @field_validator("sweep")
    @classmethod
    def _check_sweep(cls, value: List) -> List:
        if len(value) < 4:
            raise ValueError("a sweep needs at least 4 points")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("sweep values must be strictly increasing")
        return value


class FamilyMember(BaseModel):
    """One generated function with its natural sweep coordinate"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    parameter: float = Field(..., description="Natural log-scale coordinate (<k>, lambda, #cells, ...)")
    trial: Optional[int] = Field(None, description="Rademacher trial number")
    function: GridFunction = Field(..., description="Member samples")


class ProbeReport(BaseModel):
    """Norm ratios along a family and their growth fit"""
    family: FamilySpec = Field(..., description="Probed family")
    src: str = Field(..., description="Source space")
    dst: str = Field(..., description="Target space")
    grid: str = Field(..., description="Grid")
    sweep: List[float] = Field(..., description="Natural coordinate per member")
    src_norms: List[float] = Field(..., description="Source norms (trial moments for randomized families)")
    dst_norms: List[float] = Field(..., description="Target norms")
    ratios: List[float] = Field(..., description="dst / src")
    loglog_slope: float = Field(..., description="Fitted growth exponent of the ratio")
    intercept: float = Field(..., description="Fitted log intercept")
    fit_r2: float = Field(..., ge=0, le=1, description="Coefficient of determination")
    src_slope: Optional[float] = Field(None, description="Fitted exponent of the source norms")
    dst_slope: Optional[float] = Field(None, description="Fitted exponent of the target norms")
    growth: float = Field(..., description="Last ratio over first ratio")
    holds_spread: float = Field(..., description="max(max/median, median/min) of the ratios")
    trials: Optional[int] = Field(None, description="Trials per member for randomized families")
    verdict: Optional[VerdictRecord] = Field(None, description="Oracle verdict the probe was checked against")
    verdict_corroborated: bool = Field(..., description="Ratios behave as the verdict predicts")


class CorroborationInstance(BaseModel):
    """Designated oracle/probe agreement case"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str = Field(..., description="Instance label")
    expected: VerdictStatus = Field(..., description="Oracle status the probe corroborates")
    family: FamilySpec = Field(..., description="Family and sweep")
    src: SpaceSpec = Field(..., description="Source space")
    dst: SpaceSpec = Field(..., description="Target space")
    grid: GridSpec = Field(..., description="Grid the family lives on")
