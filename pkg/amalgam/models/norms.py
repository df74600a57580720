# amalgam/models/norms.py
# Norm results and cross-check reports

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class BlockMagnitude(BaseModel):
    """L2 size of one filtered block"""
    index: List[int] = Field(..., description="Block index k, or [j] for dyadic blocks")
    magnitude: float = Field(..., description="L2 norm of the filtered block")


class NormDiagnostics(BaseModel):
    """Per-block and maximal-function details of a norm evaluation"""
    bank: Optional[str] = Field(None, description="Decomposition bank used, if any")
    blocks: List[BlockMagnitude] = Field(default_factory=list, description="Active blocks in bank order")
    active_blocks: int = Field(0, description="Blocks with L2 magnitude above 1e-12 of ||f||_2")
    t_values: Optional[List[float]] = Field(None, description="Dyadic t-set of the local maximal function")
    lower_bound: Optional[float] = Field(None, description="||psi_{t_min} * f||_r, a lower bound for the h_r norm")


class NormResult(BaseModel):
    """Value of one space norm on a grid function"""
    space: str = Field(..., description="Canonical space spec")
    grid: str = Field(..., description="Grid the function lives on")
    value: float = Field(..., ge=0, description="Computed (quasi-)norm")
    truncation_tail: float = Field(..., ge=0, le=1, description="Share of spectral L2 mass outside the covered region")
    truncation_warning: bool = Field(False, description="Tail at or above the truncation tolerance")
    diagnostics: NormDiagnostics = Field(default_factory=NormDiagnostics)


class StftCrosscheck(BaseModel):
    """STFT-form norms against decomposition-form norms"""
    wiener_ratio: float = Field(..., description="STFT Wiener norm / decomposition Wiener norm")
    modulation_ratio: float = Field(..., description="STFT modulation norm / decomposition modulation norm")
    stride: int = Field(..., description="Sample stride of the shift lattice")
    band: float = Field(..., description="Calibrated equivalence band C")
    within_band: bool = Field(..., description="Both ratios lie in [1/C, C]")


class EquivalenceReport(BaseModel):
    """Pairwise ratios of M_{p,q}, W_{p,q} and FL^q norms"""
    norms: Dict[str, float] = Field(..., description="Norm values by space tag")
    ratios: Dict[str, float] = Field(..., description="Pairwise ratios, e.g. 'M/W'")
    spatially_compact: bool = Field(..., description="Samples vanish outside the unit ball")
    band: float = Field(..., description="Calibrated equivalence band C")
    within_band: bool = Field(..., description="Every ratio lies in [1/C, C]")
