# amalgam/services/region_service.py
# Index-plane scans, symbolic boundaries and region diagrams

import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple

import numpy as np
import pandas as pd
from jinja2 import Environment, FileSystemLoader, select_autoescape

from amalgam.core.exceptions import AmalgamException, UsageException
from amalgam.models.indices import ReciprocalIndex
from amalgam.models.regions import WINDOW, IndicatorRegion, RegionCell, RegionScan, Segment
from amalgam.models.spaces import (
    FAMILY_EXPONENTS,
    Boundary,
    EmbeddingQuery,
    SpaceFamily,
    SpaceSpec,
    VerdictStatus,
    WeightSide,
)
from amalgam.services.index_service import index_service
from amalgam.services.oracle_service import oracle_service

logger = logging.getLogger(__name__)

TAU1 = "tau1"
SIGMA1 = "sigma1"
ALPHA_DISCREPANCY = "alpha-reading-discrepancy"

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"

# Parameter key and default tie of each exponent on the side that is not scanned
_ALIASES: Dict[SpaceFamily, Dict[str, Tuple[str, str]]] = {
    SpaceFamily.SOBOLEV: {"r": ("r", "p")},
    SpaceFamily.LOCAL_HARDY: {"r": ("r", "p")},
    SpaceFamily.BESOV: {"p": ("p0", "p"), "q": ("q0", "q")},
    SpaceFamily.TRIEBEL: {"p": ("p0", "p"), "q": ("r", "q")},
    SpaceFamily.MODULATION: {"p": ("p1", "p"), "q": ("q1", "q")},
    SpaceFamily.ALPHA_MODULATION: {"p": ("p1", "p"), "q": ("q1", "q")},
    SpaceFamily.WIENER: {"p": ("p1", "p"), "q": ("q1", "q")},
    SpaceFamily.SEQ_WEIGHTED0: {"q": ("q1", "q")},
    SpaceFamily.SEQ_WEIGHTED1: {"q": ("q1", "q")},
}
_GENERAL_KEYS = {"d", "s", "alpha"}
_S_RULE = re.compile(r"^crit\s*(?:([+-])\s*(\d+(?:/\d+)?))?$")

_PALETTE = {
    "Holds": "#9ecae1",
    "Fails": "#fcae91",
    "OutsideHypothesis": "#d9d9d9",
    "OpenInPaper": "#fff2a8",
    "(1)": "#c7e9c0",
    "(2)": "#fdd0a2",
    "(3)": "#dadaeb",
    "agree": "#c7e9c0",
    "as-written-only": "#9ecae1",
    "tau1-only": "#fdd0a2",
    "neither": "#fcae91",
    "clause-1": "#d9d9d9",
}
_FALLBACK_COLORS = ["#a6cee3", "#b2df8a", "#fb9a99", "#fdbf6f", "#cab2d6", "#ffff99"]

CANVAS = 480
MARGIN = 40


class _Template:
    """How scan coordinates and fixed parameters turn into a query"""

    def __init__(self, theorem_id: str, params: Dict[str, str]):
        entry = oracle_service.entry(theorem_id)
        self.theorem_id = theorem_id
        self.source, self.target = entry.source, entry.target
        self.scan_source = self.source == SpaceFamily.WIENER or self.target != SpaceFamily.WIENER
        scanned = self.source if self.scan_source else self.target
        other = self.target if self.scan_source else self.source
        self.scanned_names = FAMILY_EXPONENTS[scanned]
        self.other_names = FAMILY_EXPONENTS[other]
        self.aliases = _ALIASES[other]

        allowed = _GENERAL_KEYS | {key for key, _ in self.aliases.values()}
        unknown = set(params) - allowed
        if unknown:
            raise UsageException(f"{theorem_id} takes {sorted(allowed)}, not {sorted(unknown)}")
        self.params = params
        self.d = _parse_int(params.get("d", "1"), "d")
        self.alpha = params.get("alpha")
        if SpaceFamily.ALPHA_MODULATION in (self.source, self.target) and self.alpha is None:
            raise UsageException(f"{theorem_id} needs alpha=<rational>")
        self.s_rule = params.get("s", "0")

    def _resolve(self, value: str, u: Fraction, v: Fraction) -> Fraction:
        text = value.strip()
        if text == "p":
            return u
        if text == "q":
            return v
        try:
            return ReciprocalIndex.reciprocal_of(text)
        except ValueError as exc:
            raise UsageException(f"bad exponent {value!r}: {exc}") from exc

    def query(self, u: Fraction, v: Fraction, s: Fraction) -> EmbeddingQuery:
        scanned: Dict[str, ReciprocalIndex] = {}
        other: Dict[str, ReciprocalIndex] = {}
        coordinates = [u, v]
        for name in self.scanned_names:
            scanned[name] = ReciprocalIndex(u=coordinates.pop(0))
        for name in self.other_names:
            key, tie = self.aliases[name]
            if coordinates and key not in self.params:
                other[name] = ReciprocalIndex(u=coordinates.pop(0))
            else:
                other[name] = ReciprocalIndex(u=self._resolve(self.params.get(key, tie), u, v))
        scanned_family = self.source if self.scan_source else self.target
        other_family = self.target if self.scan_source else self.source
        extra = {"alpha": self.alpha} if self.alpha is not None else {}
        scanned_space = SpaceSpec(
            family=scanned_family, **scanned,
            **(extra if scanned_family == SpaceFamily.ALPHA_MODULATION else {}),
        )
        other_space = SpaceSpec(
            family=other_family, s=s, **other,
            **(extra if other_family == SpaceFamily.ALPHA_MODULATION else {}),
        )
        if self.scan_source:
            return EmbeddingQuery(src=scanned_space, dst=other_space, d=self.d)
        return EmbeddingQuery(src=other_space, dst=scanned_space, d=self.d)

    def smoothness(self, u: Fraction, v: Fraction) -> Optional[Fraction]:
        """s for this cell, or None when the s-rule asks for a threshold the cell does not have"""
        match = _S_RULE.match(self.s_rule.strip())
        if not match:
            try:
                return Fraction(self.s_rule.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise UsageException(f"bad s rule {self.s_rule!r}") from exc
        ruling = oracle_service.ruling_with(self.theorem_id, self.query(u, v, Fraction(0)))
        if ruling.criterion is None:
            return None
        offset = Fraction(match.group(2) or 0) * (-1 if match.group(1) == "-" else 1)
        # s sits on the side that is not scanned
        other_is_source = not self.scan_source
        sign = 1 if other_is_source == (ruling.criterion.side == WeightSide.SRC) else -1
        return sign * (ruling.criterion.threshold + offset)


def _parse_int(value: str, name: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise UsageException(f"{name} must be an integer, got {value!r}") from exc


class RegionService:
    """Service for region scans and their SVG/CSV renderings"""

    def __init__(self):
        self._env = Environment(
            loader=FileSystemLoader(str(TEMPLATE_DIR)),
            autoescape=select_autoescape(enabled_extensions=("svg.j2",)),
            trim_blocks=True,
            lstrip_blocks=True,
        )

    def parse_fixed_params(self, text: str) -> Dict[str, str]:
        """`k=v,k=v` into a dict; values stay text until a template resolves them"""
        params: Dict[str, str] = {}
        for item in filter(None, (part.strip() for part in (text or "").split(","))):
            key, sep, value = item.partition("=")
            if not sep or not key.strip() or not value.strip():
                raise UsageException(f"bad fixed parameter {item!r}; expected k=v")
            params[key.strip()] = value.strip()
        return params

    # Indicator regions

    def classify_indicator_region(self, u: Fraction, v: Fraction) -> IndicatorRegion:
        pieces = index_service.tau1_pieces(u, v)
        top, bottom = max(pieces), min(pieces)
        return IndicatorRegion(
            tau1=index_service.max_piece(pieces),
            sigma1=index_service.min_piece(pieces),
            tau1_ties=[i + 1 for i, piece in enumerate(pieces) if piece == top],
            sigma1_ties=[i + 1 for i, piece in enumerate(pieces) if piece == bottom],
        )

    # Scans

    def lattice(self, step: Fraction) -> List[Fraction]:
        step = Fraction(step)
        if step <= 0 or step.numerator != 1:
            raise UsageException(f"lattice step must be 1/n, got {step}")
        return [i * step for i in range(int(WINDOW / step) + 1)]

    def scan_theorem_region(self, theorem_id: str, fixed_params: Dict[str, str], step: Fraction) -> RegionScan:
        """Label every lattice point of [0, 2]^2 and flag label changes between neighbors"""
        step = Fraction(step)
        points = self.lattice(step)
        if theorem_id in (TAU1, SIGMA1):
            cells = [self._indicator_cell(theorem_id, u, v) for u in points for v in points]
            d = _parse_int(fixed_params.get("d", "1"), "d")
        elif theorem_id == ALPHA_DISCREPANCY:
            d = _parse_int(fixed_params.get("d", "1"), "d")
            alpha = Fraction(fixed_params.get("alpha", "1/2"))
            cells = [self._discrepancy_cell(u, v, alpha, d) for u in points for v in points]
        else:
            template = _Template(theorem_id, fixed_params)
            d = template.d
            cells = [self._theorem_cell(template, u, v) for u in points for v in points]

        scan = RegionScan(theorem_id=theorem_id, fixed_params=dict(fixed_params), d=d, step=step, cells=cells)
        self._flag_boundaries(scan)
        logger.info("✅ scanned %s at step %s: %s", theorem_id, step, sorted({cell.label for cell in cells}))
        return scan

    def _indicator_cell(self, kind: str, u: Fraction, v: Fraction) -> RegionCell:
        region = self.classify_indicator_region(u, v)
        label = region.tau1 if kind == TAU1 else region.sigma1
        ties = region.tau1_ties if kind == TAU1 else region.sigma1_ties
        flags = [f"tie:{a}-{b}" for i, a in enumerate(ties) for b in ties[i + 1:]]
        return RegionCell(u=u, v=v, label=f"({label})", boundary_flags=flags)

    def _discrepancy_cell(self, u: Fraction, v: Fraction, alpha: Fraction, d: int) -> RegionCell:
        if u <= v:
            return RegionCell(u=u, v=v, label="clause-1")
        shift = d * (1 - alpha) * (u - v)
        proof = alpha * index_service.a(u, v, d) + shift
        as_written = alpha * index_service.tau_sigma_a(u, v, d)[0] + shift
        tau1 = alpha * index_service.tau1(u, v, d) + shift
        if as_written == proof and tau1 == proof:
            label = "agree"
        elif as_written == proof:
            label = "as-written-only"
        elif tau1 == proof:
            label = "tau1-only"
        else:
            label = "neither"
        return RegionCell(u=u, v=v, label=label)

    def _theorem_cell(self, template: _Template, u: Fraction, v: Fraction) -> RegionCell:
        try:
            s = template.smoothness(u, v)
            verdict = oracle_service.decide_with(template.theorem_id, template.query(u, v, s or Fraction(0)))
        except UsageException:
            raise
        except (AmalgamException, ValueError):
            return RegionCell(u=u, v=v, label=VerdictStatus.OUTSIDE_HYPOTHESIS.value)
        flags = []
        if verdict.boundary == Boundary.NON_STRICT:
            flags.append("non-strict")
        elif verdict.boundary == Boundary.STRICT_EXCLUDED:
            flags.append("strict")
        return RegionCell(u=u, v=v, label=verdict.status.value, boundary_flags=flags)

    def _flag_boundaries(self, scan: RegionScan) -> None:
        labels = scan.label_grid()
        n = scan.size
        for i in range(n):
            for j in range(n):
                neighbors = [(i + di, j + dj) for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1))]
                if any(0 <= a < n and 0 <= b < n and labels[a][b] != labels[i][j] for a, b in neighbors):
                    scan.cell(i, j).boundary_flags.insert(0, "boundary")

    # Symbolic boundaries

    def symbolic_boundaries(self, kind: str) -> List[Segment]:
        """Exact piece boundaries of tau1 or sigma1 inside the window"""
        edge = float(WINDOW)
        if kind == TAU1:
            return [
                Segment(start=(0.0, 0.5), end=(0.5, 0.5), label="1-2"),
                Segment(start=(0.5, 0.5), end=(0.5, edge), label="2-3"),
                Segment(start=(0.5, 0.5), end=(1.0, 0.0), label="1-3"),
            ]
        if kind == SIGMA1:
            return [
                Segment(start=(0.5, 0.5), end=(edge, 0.5), label="1-2"),
                Segment(start=(0.5, 0.0), end=(0.5, 0.5), label="2-3"),
                Segment(start=(0.0, 1.0), end=(0.5, 0.5), label="1-3"),
            ]
        raise UsageException(f"symbolic boundaries exist for {TAU1} and {SIGMA1}, not {kind!r}")

    def boundary_points(self, scan: RegionScan) -> np.ndarray:
        """Midpoints of differing neighbor pairs plus every tie cell"""
        labels = scan.label_grid()
        step = float(scan.step)
        n = scan.size
        points = []
        for i in range(n):
            for j in range(n):
                if i + 1 < n and labels[i + 1][j] != labels[i][j]:
                    points.append(((i + 0.5) * step, j * step))
                if j + 1 < n and labels[i][j + 1] != labels[i][j]:
                    points.append((i * step, (j + 0.5) * step))
                if any(flag.startswith("tie:") for flag in scan.cell(i, j).boundary_flags):
                    points.append((i * step, j * step))
        return np.array(points, dtype=float).reshape(-1, 2)

    def sample_segments(self, segments: List[Segment], spacing: float) -> np.ndarray:
        samples = []
        for segment in segments:
            start, end = np.array(segment.start), np.array(segment.end)
            count = max(1, int(np.ceil(np.linalg.norm(end - start) / spacing)))
            for t in np.linspace(0.0, 1.0, count + 1):
                samples.append(start + t * (end - start))
        return np.array(samples, dtype=float).reshape(-1, 2)

    def boundary_hausdorff(self, scan: RegionScan, segments: List[Segment]) -> float:
        """Hausdorff distance between the scan's boundary points and the sampled segments"""
        ours = self.boundary_points(scan)
        theirs = self.sample_segments(segments, float(scan.step) / 4)
        if len(ours) == 0 or len(theirs) == 0:
            return float("inf")
        distances = np.linalg.norm(ours[:, None, :] - theirs[None, :, :], axis=2)
        return float(max(distances.min(axis=1).max(), distances.min(axis=0).max()))

    # Rendering

    def merge_rectangles(self, scan: RegionScan) -> List[Tuple[str, int, int, int, int]]:
        """Greedy cover of same-label cells by maximal rectangles (label, i0, j0, i1, j1), bounds inclusive"""
        labels = scan.label_grid()
        n = scan.size
        used = [[False] * n for _ in range(n)]
        rectangles = []
        for j0 in range(n):
            for i0 in range(n):
                if used[i0][j0]:
                    continue
                label = labels[i0][j0]
                i1 = i0
                while i1 + 1 < n and not used[i1 + 1][j0] and labels[i1 + 1][j0] == label:
                    i1 += 1
                j1 = j0
                while j1 + 1 < n and all(not used[i][j1 + 1] and labels[i][j1 + 1] == label for i in range(i0, i1 + 1)):
                    j1 += 1
                for i in range(i0, i1 + 1):
                    for j in range(j0, j1 + 1):
                        used[i][j] = True
                rectangles.append((label, i0, j0, i1, j1))
        return rectangles

    def emit_region_svg(self, scan: RegionScan, title: Optional[str] = None) -> str:
        """SVG 1.1 diagram: one group per label, solid non-strict and dashed strict boundaries"""
        if not scan.cells:
            raise UsageException("cannot render an empty scan")
        step = float(scan.step)
        plot = CANVAS - 2 * MARGIN
        scale = plot / float(WINDOW)
        edge = float(WINDOW)

        def px(u: float) -> float:
            return MARGIN + min(max(u, 0.0), edge) * scale

        def py(v: float) -> float:
            return MARGIN + (edge - min(max(v, 0.0), edge)) * scale

        labels_seen = sorted({cell.label for cell in scan.cells})
        colors = self._colors(labels_seen)
        groups: Dict[str, List[Dict[str, str]]] = {label: [] for label in labels_seen}
        for label, i0, j0, i1, j1 in self.merge_rectangles(scan):
            x0, x1 = px((i0 - 0.5) * step), px((i1 + 0.5) * step)
            y0, y1 = py((j1 + 0.5) * step), py((j0 - 0.5) * step)
            groups[label].append({
                "x": "%.2f" % x0, "y": "%.2f" % y0,
                "width": "%.2f" % (x1 - x0), "height": "%.2f" % (y1 - y0),
            })

        edges = []
        labels = scan.label_grid()
        n = scan.size
        strict: Set[Tuple[int, int]] = {
            (i, j) for i in range(n) for j in range(n) if "strict" in scan.cell(i, j).boundary_flags
        }
        for i in range(n):
            for j in range(n):
                if i + 1 < n and labels[i + 1][j] != labels[i][j]:
                    x = px((i + 0.5) * step)
                    edges.append(self._edge(x, py((j - 0.5) * step), x, py((j + 0.5) * step), {(i, j), (i + 1, j)} & strict))
                if j + 1 < n and labels[i][j + 1] != labels[i][j]:
                    y = py((j + 0.5) * step)
                    edges.append(self._edge(px((i - 0.5) * step), y, px((i + 0.5) * step), y, {(i, j), (i, j + 1)} & strict))

        ticks = [
            {"value": "%.2f" % t, "x": "%.2f" % px(t), "y": "%.2f" % py(t)}
            for t in (0.0, 0.5, 1.0, 1.5, 2.0)
        ]
        template = self._env.get_template("region.svg.j2")
        return template.render(
            size=CANVAS,
            margin=MARGIN,
            plot=plot,
            title=title or self.describe(scan),
            groups=[{"label": label, "color": colors[label], "rects": groups[label]} for label in labels_seen],
            edges=edges,
            ticks=ticks,
            bottom="%.2f" % (CANVAS - MARGIN),
        )

    def describe(self, scan: RegionScan) -> str:
        params = ",".join(f"{key}={value}" for key, value in sorted(scan.fixed_params.items()))
        return f"{scan.theorem_id} [{params}] step={scan.step}" if params else f"{scan.theorem_id} step={scan.step}"

    def _edge(self, x0: float, y0: float, x1: float, y1: float, strict_cells: Set) -> Dict[str, object]:
        return {
            "x1": "%.2f" % x0, "y1": "%.2f" % y0,
            "x2": "%.2f" % x1, "y2": "%.2f" % y1,
            "dashed": bool(strict_cells),
        }

    def _colors(self, labels: List[str]) -> Dict[str, str]:
        colors = {}
        fallback = iter(_FALLBACK_COLORS * (len(labels) // len(_FALLBACK_COLORS) + 1))
        for label in labels:
            colors[label] = _PALETTE.get(label) or next(fallback)
        return colors

    def emit_region_csv(self, scan: RegionScan) -> str:
        """CSV with header u,v,label,boundary_flags; flags joined by ';'"""
        frame = pd.DataFrame(
            {
                "u": [str(cell.u) for cell in scan.cells],
                "v": [str(cell.v) for cell in scan.cells],
                "label": [cell.label for cell in scan.cells],
                "boundary_flags": [";".join(cell.boundary_flags) for cell in scan.cells],
            }
        )
        return frame.to_csv(index=False, lineterminator="\n")


# Global region service instance
region_service = RegionService()
