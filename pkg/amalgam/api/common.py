# amalgam/api/common.py
# Argument parsing and output helpers shared by the subcommand handlers

import sys
from pathlib import Path
from typing import Optional

from pydantic import BaseModel

from amalgam.core.config import settings
from amalgam.core.exceptions import UsageException
from amalgam.models.grid import GridSpec
from amalgam.models.indices import parse_rational
from amalgam.models.spaces import SpaceSpec


def parse_space(text: str) -> SpaceSpec:
    return SpaceSpec.parse(text)


def parse_grid(text: Optional[str]) -> GridSpec:
    """`d=1,N=4096,P=16`, or the configured default grid"""
    if not text:
        return GridSpec(d=settings.GRID_D, n=settings.GRID_N, period=settings.GRID_PERIOD)
    try:
        return GridSpec.parse(text)
    except (KeyError, ValueError) as exc:
        raise UsageException(f"invalid grid {text!r}: {exc}") from exc


def parse_fraction(text: str, name: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise UsageException(f"{name}: {exc}") from exc


def parse_fraction_list(text: str, name: str):
    return [parse_fraction(item.strip(), name) for item in text.split(",") if item.strip()]


def emit_text(text: str, out: Optional[str] = None) -> None:
    """Write to a file when a path is given, else to stdout"""
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageException(f"cannot write {out}: {exc.strerror}") from exc
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def emit_model(model: BaseModel, out: Optional[str] = None) -> None:
    emit_text(model.model_dump_json(indent=2) + "\n", out)
