# amalgam/models/selftest.py
# Self-test result models

from typing import Dict, List

from pydantic import BaseModel, Field


class SelftestCheck(BaseModel):
    """Outcome of one acceptance check"""
    name: str = Field(..., description="Check identifier")
    passed: bool = Field(..., description="Whether the check met its tolerance")
    seconds: float = Field(..., ge=0, description="Wall time")
    detail: str = Field("", description="Human-readable summary or the error raised")
    metrics: Dict[str, float] = Field(default_factory=dict, description="Measured values behind the decision")


class SelftestSummary(BaseModel):
    """Machine-readable self-test report"""
    mode: str = Field(..., description="quick or full")
    passed: bool = Field(..., description="All checks passed")
    total: int = Field(..., ge=0, description="Number of checks run")
    failures: List[str] = Field(default_factory=list, description="Names of failed checks")
    checks: List[SelftestCheck] = Field(default_factory=list, description="Per-check outcomes")
