# amalgam/models/grid.py
# Periodic grid and decomposition bank data models

import math
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from amalgam.models.indices import Rational

BlockIndex = Tuple[int, ...]


class GridSpec(BaseModel):
    """Uniform grid on [0, 2 pi P)^d with frequency lattice (1/P) Z^d"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: int = Field(..., description="Dimension, 1 or 2")
    n: int = Field(..., description="Samples per dimension, a power of two")
    period: Rational = Field(..., description="Period parameter P")

    @field_validator("d")
    @classmethod
    def _check_d(cls, value: int) -> int:
        if value not in (1, 2):
            raise ValueError("grids are one- or two-dimensional")
        return value

    @field_validator("n")
    @classmethod
    def _check_n(cls, value: int) -> int:
        if value < 2 or value & (value - 1):
            raise ValueError(f"samples per dimension must be a power of two, got {value}")
        return value

    @model_validator(mode="after")
    def _check_nyquist(self) -> "GridSpec":
        if self.period <= 0:
            raise ValueError("period must be positive")
        if self.nyquist < 4:
            raise ValueError(f"Nyquist frequency N/(2P) = {self.nyquist} is below 4")
        return self

    @property
    def nyquist(self) -> Fraction:
        return Fraction(self.n, 2) / self.period

    @property
    def spacing(self) -> float:
        """Sample spacing h = 2 pi P / N"""
        return 2 * math.pi * float(self.period) / self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.d

    @property
    def frequency_cell(self) -> float:
        """Lattice measure P^-d of one frequency point"""
        return float(self.period) ** -self.d

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.n,) * self.d

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse `d=1,N=4096,P=16`"""
        params: Dict[str, str] = {}
        for item in filter(None, (part.strip() for part in text.split(","))):
            key, _, value = item.partition("=")
            params[key.strip().lower()] = value.strip()
        unknown = set(params) - {"d", "n", "p"}
        if unknown:
            raise ValueError(f"unknown grid keys {sorted(unknown)}")
        return cls(d=int(params.get("d", 1)), n=int(params["n"]), period=params["p"])

    def __str__(self) -> str:
        return f"d={self.d},N={self.n},P={self.period}"


class GridFunction(BaseModel):
    """Complex samples of a periodic function"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: GridSpec = Field(..., description="Grid the samples live on")
    samples: np.ndarray = Field(..., description="Complex samples, shape (N,)*d")

    @field_validator("samples", mode="before")
    @classmethod
    def _as_complex(cls, value: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(value, dtype=np.complex128)

    @model_validator(mode="after")
    def _check_samples(self) -> "GridFunction":
        if self.samples.shape != self.grid.shape:
            raise ValueError(f"sample shape {self.samples.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")
        return self

    def scaled(self, factor: complex) -> "GridFunction":
        return GridFunction(grid=self.grid, samples=self.samples * factor)


class WindowProfile(BaseModel):
    """Radial or per-axis bump: 1 on the plateau, 0 outside the support"""
    model_config = ConfigDict(frozen=True)

    plateau: float = Field(..., description="Plateau half-width")
    support: float = Field(..., description="Support half-width")
    order: int = Field(8, description="Smooth-step order of the transition")

    @model_validator(mode="after")
    def _check_widths(self) -> "WindowProfile":
        if not 0 <= self.plateau < self.support:
            raise ValueError("need 0 <= plateau < support")
        return self


class BankKind(str, Enum):
    """Decomposition bank families"""
    UNIFORM = "uniform"
    DYADIC = "dyadic"
    ALPHA = "alpha"


class BlockMultiplier(BaseModel):
    """One multiplier, stored on its window of the centred frequency array"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    index: BlockIndex = Field(..., description="Block index k (or (j,) for dyadic)")
    origin: Tuple[int, ...] = Field(..., description="Window start in the fftshifted array")
    values: np.ndarray = Field(..., description="Multiplier samples on the window")

    @property
    def window(self) -> Tuple[slice, ...]:
        return tuple(slice(start, start + size) for start, size in zip(self.origin, self.values.shape))


class DecompositionBank(BaseModel):
    """Immutable bank of frequency multipliers with index bookkeeping"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: BankKind = Field(..., description="Bank family")
    grid: GridSpec = Field(..., description="Grid the bank is sampled on")
    blocks: List[BlockMultiplier] = Field(..., description="Multipliers in fixed index order")
    covered: np.ndarray = Field(..., description="Mask of the fftshifted lattice where the partition holds")
    covered_radius: float = Field(..., description="K_max + 1/4 (sup norm), (5/4) 2^J or R_cov (Euclidean)")
    k_max: Optional[int] = Field(None, description="Uniform: largest |k|_inf")
    levels: Optional[int] = Field(None, description="Dyadic: J")
    alpha: Optional[Rational] = Field(None, description="Alpha: covering parameter")
    plateau: Optional[float] = Field(None, description="Alpha: plateau constant c")
    support: Optional[float] = Field(None, description="Alpha: support constant C")
    min_cover: Optional[float] = Field(None, description="Alpha: min of the pre-normalization sum on the covered ball")

    def position(self, index: BlockIndex) -> int:
        for position, block in enumerate(self.blocks):
            if block.index == index:
                return position
        return -1

    @property
    def indices(self) -> List[BlockIndex]:
        return [block.index for block in self.blocks]


class InequalityReport(BaseModel):
    """Measured ratios of an inequality check"""
    name: str = Field(..., description="Inequality checked")
    parameters: List[float] = Field(default_factory=list, description="Sweep parameter (R, R1+R2, lambda)")
    ratios: List[float] = Field(default_factory=list, description="Measured ratio per parameter")
    predicted_exponent: Optional[float] = Field(None, description="Exponent the inequality predicts")
    fitted_exponent: Optional[float] = Field(None, description="Least-squares log-log slope")
    max_ratio: Optional[float] = Field(None, description="Largest measured ratio")
