# amalgam/models/regions.py
# Region scan data models

from fractions import Fraction
from typing import Dict, List, Tuple

from pydantic import BaseModel, Field, field_validator

from amalgam.models.indices import Rational

# Reciprocal-index window [0, 2] x [0, 2]
WINDOW = Fraction(2)


class IndicatorRegion(BaseModel):
    """Which linear piece attains tau1 (max) and sigma1 (min)"""
    tau1: int = Field(..., ge=1, le=3, description="Region of tau1, lowest index on ties")
    sigma1: int = Field(..., ge=1, le=3, description="Region of sigma1, lowest index on ties")
    tau1_ties: List[int] = Field(default_factory=list, description="All pieces attaining the max")
    sigma1_ties: List[int] = Field(default_factory=list, description="All pieces attaining the min")


class RegionCell(BaseModel):
    """One lattice point of a scan"""
    u: Rational = Field(..., description="1/p")
    v: Rational = Field(..., description="1/q")
    label: str = Field(..., description="Verdict status, region index or reading-agreement label")
    boundary_flags: List[str] = Field(default_factory=list, description="boundary, strict, non-strict, tie:i-j")


class RegionScan(BaseModel):
    """Labels of one theorem over the (1/p, 1/q) window"""
    theorem_id: str = Field(..., description="Catalogue id or indicator name")
    fixed_params: Dict[str, str] = Field(default_factory=dict, description="Parameters held fixed, as given")
    d: int = Field(1, ge=1, description="Dimension")
    step: Rational = Field(..., description="Lattice step")
    cells: List[RegionCell] = Field(default_factory=list, description="Cells, u-major then v")

    @field_validator("step")
    @classmethod
    def _check_step(cls, value: Fraction) -> Fraction:
        if value <= 0 or value.numerator != 1:
            raise ValueError("the lattice step must be 1/n")
        return value

    @property
    def size(self) -> int:
        """Lattice points per axis"""
        return int(WINDOW / self.step) + 1

    def label_grid(self) -> List[List[str]]:
        """labels[i][j] at (u, v) = (i step, j step)"""
        n = self.size
        return [[self.cells[i * n + j].label for j in range(n)] for i in range(n)]

    def cell(self, i: int, j: int) -> RegionCell:
        return self.cells[i * self.size + j]


class Segment(BaseModel):
    """Straight boundary piece in the (1/p, 1/q) plane"""
    start: Tuple[float, float] = Field(..., description="(u, v) start")
    end: Tuple[float, float] = Field(..., description="(u, v) end")
    label: str = Field("", description="Which pieces the segment separates")
