# amalgam/services/norm_service.py
# Space (quasi-)norms of grid functions

import logging
import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from amalgam.core.config import settings
from amalgam.core.exceptions import AmalgamException, UnsupportedSpace
from amalgam.models.grid import DecompositionBank, GridFunction
from amalgam.models.indices import ReciprocalIndex
from amalgam.models.norms import (
    BlockMagnitude,
    EquivalenceReport,
    NormDiagnostics,
    NormResult,
    StftCrosscheck,
)
from amalgam.models.spaces import SpaceFamily, SpaceSpec
from amalgam.services.bank_service import bank_service
from amalgam.services.grid_service import grid_service

logger = logging.getLogger(__name__)

# Blocks below this share of ||f||_2 do not count as active
_ACTIVE_BLOCK = 1e-12
_HALF = Fraction(1, 2)


def _sequence_norm(values: List[float], v: Fraction) -> float:
    """l^q norm of a finite sequence, q = 1/v"""
    return grid_service.lp_norm(np.asarray(values, dtype=float), v, 1.0)


class NormService:
    """Service for computing space norms on the grid"""

    def __init__(self):
        self._evaluators: Dict[SpaceFamily, Callable[[SpaceSpec, GridFunction], Tuple[float, NormDiagnostics, DecompositionBank]]] = {
            SpaceFamily.SOBOLEV: self._sobolev,
            SpaceFamily.LOCAL_HARDY: self._local_hardy,
            SpaceFamily.WIENER: self._wiener,
            SpaceFamily.MODULATION: self._modulation,
            SpaceFamily.BESOV: self._besov,
            SpaceFamily.TRIEBEL: self._triebel,
            SpaceFamily.ALPHA_MODULATION: self._alpha_modulation,
        }

    def space_norm(self, space: SpaceSpec, f: GridFunction) -> NormResult:
        """Norm of f in `space`; a truncation tail above tolerance is flagged, not fatal"""
        evaluator = self._evaluators.get(space.family)
        if evaluator is None:
            raise UnsupportedSpace(f"{space} is a sequence space and has no grid norm")
        try:
            value, diagnostics, bank = evaluator(space, f)
        except AmalgamException:
            raise
        except (ValueError, FloatingPointError) as exc:
            raise UnsupportedSpace(f"cannot evaluate {space} on {f.grid}: {exc}") from exc

        tail = min(1.0, max(0.0, bank_service.truncation_tail(bank, f)))
        warning = tail >= settings.TRUNCATION_TOL
        if warning:
            logger.warning("⚠️ %s on %s: truncation tail %.3g above tolerance", space, f.grid, tail)
        return NormResult(
            space=str(space),
            grid=str(f.grid),
            value=value,
            truncation_tail=tail,
            truncation_warning=warning,
            diagnostics=diagnostics,
        )

    def lebesgue_norm(self, f: GridFunction, u: Fraction) -> float:
        return grid_service.lp_norm(f.samples, u, f.grid.cell_volume)

    def fourier_lebesgue_norm(self, f: GridFunction, v: Fraction) -> float:
        """||F f||_{L^q} with the lattice measure P^-d"""
        return grid_service.lp_norm(grid_service.spectrum(f), v, f.grid.frequency_cell)

    def bessel_potential(self, f: GridFunction, s: Fraction) -> GridFunction:
        """(I - Laplacian)^{s/2} f"""
        if s == 0:
            return f
        radius = grid_service.frequency_radius(f.grid)
        return grid_service.multiply(f, (1 + radius ** 2) ** (float(s) / 2))

    # Sobolev and local Hardy

    def _sobolev(self, space: SpaceSpec, f: GridFunction):
        value = self.lebesgue_norm(self.bessel_potential(f, space.s), space.exponent("r"))
        return value, NormDiagnostics(), bank_service.build_uniform_bank(f.grid)

    def maximal_levels(self, f: GridFunction) -> int:
        """M with 2^-M at most one grid cell"""
        return max(0, math.ceil(math.log2(1 / f.grid.spacing)))

    def _local_hardy(self, space: SpaceSpec, f: GridFunction):
        g = self.bessel_potential(f, space.s)
        spectrum = grid_service.spectrum(g)
        radius_sq = grid_service.frequency_radius(f.grid) ** 2
        levels = self.maximal_levels(f)
        t_values = [2.0 ** -m for m in range(levels + 1)]
        maximal = np.zeros(f.grid.shape)
        smallest = None
        for t in t_values:
            averaged = grid_service.from_spectrum(f.grid, spectrum * np.exp(-t * t * radius_sq / 2)).samples
            maximal = np.maximum(maximal, np.abs(averaged))
            smallest = averaged
        u = space.exponent("r")
        diagnostics = NormDiagnostics(
            t_values=t_values,
            lower_bound=grid_service.lp_norm(smallest, u, f.grid.cell_volume),
        )
        return grid_service.lp_norm(maximal, u, f.grid.cell_volume), diagnostics, bank_service.build_uniform_bank(f.grid)

    # Decomposition norms

    def _magnitudes(self, f: GridFunction, bank: DecompositionBank, components) -> NormDiagnostics:
        total = grid_service.l2_norm(f)
        blocks = []
        for block, samples in components:
            magnitude = grid_service.lp_norm(samples, _HALF, f.grid.cell_volume)
            if magnitude >= _ACTIVE_BLOCK * total:
                blocks.append(BlockMagnitude(index=list(block.index), magnitude=magnitude))
        return NormDiagnostics(bank=bank.kind.value, blocks=blocks, active_blocks=len(blocks))

    def _pointwise(self, space: SpaceSpec, f: GridFunction, bank: DecompositionBank):
        """L^p_x of the l^q profile of weighted blocks (Wiener and Triebel order)"""
        v = space.exponent("q")
        profile = np.zeros(f.grid.shape)
        components = list(bank_service.block_components(bank, f))
        for block, samples in components:
            weighted = bank_service.index_weight(bank, block.index, space.s) * np.abs(samples)
            if v == 0:
                profile = np.maximum(profile, weighted)
            else:
                profile += weighted ** (1 / float(v))
        if v != 0:
            profile = profile ** float(v)
        value = grid_service.lp_norm(profile, space.exponent("p"), f.grid.cell_volume)
        return value, self._magnitudes(f, bank, components), bank

    def _blockwise(self, space: SpaceSpec, f: GridFunction, bank: DecompositionBank):
        """l^q over blocks of weighted L^p norms (modulation and Besov order)"""
        u = space.exponent("p")
        components = list(bank_service.block_components(bank, f))
        norms = [
            bank_service.index_weight(bank, block.index, space.s) * grid_service.lp_norm(samples, u, f.grid.cell_volume)
            for block, samples in components
        ]
        value = _sequence_norm(norms, space.exponent("q")) if norms else 0.0
        return value, self._magnitudes(f, bank, components), bank

    def _wiener(self, space: SpaceSpec, f: GridFunction):
        return self._pointwise(space, f, bank_service.build_uniform_bank(f.grid))

    def _modulation(self, space: SpaceSpec, f: GridFunction):
        return self._blockwise(space, f, bank_service.build_uniform_bank(f.grid))

    def _besov(self, space: SpaceSpec, f: GridFunction):
        return self._blockwise(space, f, bank_service.build_dyadic_bank(f.grid))

    def _triebel(self, space: SpaceSpec, f: GridFunction):
        return self._pointwise(space, f, bank_service.build_dyadic_bank(f.grid))

    def _alpha_modulation(self, space: SpaceSpec, f: GridFunction):
        return self._blockwise(space, f, bank_service.build_alpha_bank(f.grid, space.alpha))

    # Cross-checks

    def default_stride(self, f: GridFunction) -> int:
        shifts = 256 if f.grid.d == 1 else 16
        return max(1, f.grid.n // shifts)

    def stft_norm_crosscheck(
        self,
        f: GridFunction,
        u: Fraction,
        v: Fraction,
        s: Fraction = Fraction(0),
        window: Optional[GridFunction] = None,
        stride: Optional[int] = None,
    ) -> StftCrosscheck:
        """Ratios of the STFT-form Wiener and modulation norms to the block-decomposition ones, p = 1/u, q = 1/v"""
        grid = f.grid
        window = window or grid_service.gaussian_window(grid)
        stride = stride or self.default_stride(f)
        transform = grid_service.stft_grid(f, window, stride)
        frequency_axes = tuple(range(grid.d, 2 * grid.d))
        space_axes = tuple(range(grid.d))
        if s != 0:
            weight = (1 + grid_service.frequency_radius(grid) ** 2) ** (float(s) / 2)
            transform = transform * weight
        magnitude = np.abs(transform)
        d_xi = grid.frequency_cell / (2 * math.pi) ** grid.d
        d_x = (stride * grid.spacing) ** grid.d

        inner_q = self._axis_norm(magnitude, v, d_xi, frequency_axes)
        stft_wiener = grid_service.lp_norm(inner_q, u, d_x)
        inner_p = self._axis_norm(magnitude, u, d_x, space_axes)
        stft_modulation = grid_service.lp_norm(inner_p, v, d_xi)

        wiener = self.space_norm(self._pair_space(SpaceFamily.WIENER, u, v, s), f).value
        modulation = self.space_norm(self._pair_space(SpaceFamily.MODULATION, u, v, s), f).value
        band = settings.STFT_BAND
        wiener_ratio = stft_wiener / wiener
        modulation_ratio = stft_modulation / modulation
        within = all(1 / band <= ratio <= band for ratio in (wiener_ratio, modulation_ratio))
        if not within:
            logger.warning("⚠️ STFT ratios %.4g / %.4g outside band %.3g", wiener_ratio, modulation_ratio, band)
        return StftCrosscheck(
            wiener_ratio=wiener_ratio,
            modulation_ratio=modulation_ratio,
            stride=stride,
            band=band,
            within_band=within,
        )

    def _pair_space(self, family: SpaceFamily, u: Fraction, v: Fraction, s: Fraction = Fraction(0)) -> SpaceSpec:
        return SpaceSpec(family=family, p=ReciprocalIndex(u=u), q=ReciprocalIndex(u=v), s=s)

    def _axis_norm(self, magnitude: np.ndarray, u: Fraction, measure: float, axes: Tuple[int, ...]) -> np.ndarray:
        if u == 0:
            return magnitude.max(axis=axes)
        p = 1 / float(u)
        return (measure * np.sum(magnitude ** p, axis=axes)) ** float(u)

    def compact_support_equivalence(self, f: GridFunction, u: Fraction, v: Fraction) -> EquivalenceReport:
        """Pairwise ratios of M_{p,q}, W_{p,q} and FL^q; FL^q enters only for f vanishing outside B(0,1)"""
        norms = {
            "M": self.space_norm(self._pair_space(SpaceFamily.MODULATION, u, v), f).value,
            "W": self.space_norm(self._pair_space(SpaceFamily.WIENER, u, v), f).value,
        }
        outside = np.abs(f.samples[grid_service.radius(f.grid) > 1])
        peak = float(np.abs(f.samples).max())
        compact = peak > 0 and float(outside.max(initial=0.0)) <= 1e-12 * peak
        ratios = {"M/W": norms["M"] / norms["W"]}
        if compact:
            norms["FL"] = self.fourier_lebesgue_norm(f, v)
            ratios["W/FL"] = norms["W"] / norms["FL"]
            ratios["M/FL"] = norms["M"] / norms["FL"]
        band = settings.STFT_BAND
        return EquivalenceReport(
            norms=norms,
            ratios=ratios,
            spatially_compact=compact,
            band=band,
            within_band=all(1 / band <= ratio <= band for ratio in ratios.values()),
        )


# Global norm service instance
norm_service = NormService()
