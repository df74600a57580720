# amalgam/services/bank_service.py
# Frequency decomposition banks: uniform, dyadic and alpha coverings

import itertools
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from amalgam.core.config import settings
from amalgam.core.exceptions import CoverageGap, IndexOutOfRange, SpecTooSmall
from amalgam.models.grid import (
    BankKind,
    BlockIndex,
    BlockMultiplier,
    DecompositionBank,
    GridFunction,
    GridSpec,
)
from amalgam.services.grid_service import grid_service

logger = logging.getLogger(__name__)

# Blocks whose spectral energy is below this share of the total are skipped
_NEGLIGIBLE_ENERGY = 1e-28
# Upper bound on complex samples held by one batch
_BATCH_SAMPLES = 1 << 22


def _japanese(k: Tuple[int, ...]) -> float:
    return math.sqrt(1 + sum(component * component for component in k))


class BankService:
    """Service for building and applying decomposition banks"""

    # Construction

    @lru_cache(maxsize=16)
    def build_uniform_bank(self, grid: GridSpec) -> DecompositionBank:
        """sigma_k = sigma(. - k) for |k|_inf <= K_max, normalized to sum to 1"""
        k_max = math.floor(grid.nyquist - Fraction(3, 4))
        if k_max < 3:
            raise SpecTooSmall(f"{grid}: uniform bank needs K_max >= 3, got {k_max}")

        profile = grid_service.profile(0.5, 0.75)
        half = grid.n // 2
        windows: Dict[int, Tuple[int, np.ndarray]] = {}
        for k in range(-k_max, k_max + 1):
            lo = max(math.ceil(grid.period * (k - Fraction(3, 4))), -half)
            hi = min(math.floor(grid.period * (k + Fraction(3, 4))), half - 1)
            t = np.arange(lo, hi + 1) / float(grid.period) - k
            g = grid_service.evaluate_profile(profile, t)
            total = (
                grid_service.evaluate_profile(profile, t - 1)
                + g
                + grid_service.evaluate_profile(profile, t + 1)
            )
            windows[k] = (lo + half, g / total)

        blocks = []
        for index in itertools.product(range(-k_max, k_max + 1), repeat=grid.d):
            origin = tuple(windows[k][0] for k in index)
            values = windows[index[0]][1]
            for k in index[1:]:
                values = np.multiply.outer(values, windows[k][1])
            blocks.append(BlockMultiplier(index=index, origin=origin, values=values))

        sup_radius = np.max(np.abs(np.stack(grid_service.frequency_mesh(grid))), axis=0)
        covered_radius = k_max + 0.25
        bank = DecompositionBank(
            kind=BankKind.UNIFORM,
            grid=grid,
            blocks=blocks,
            covered=sup_radius <= covered_radius,
            covered_radius=covered_radius,
            k_max=k_max,
        )
        logger.info("✅ uniform bank on %s: %d blocks, K_max=%d", grid, len(blocks), k_max)
        return bank

    @lru_cache(maxsize=16)
    def build_dyadic_bank(self, grid: GridSpec) -> DecompositionBank:
        """phi_0 = psi, phi_j = psi(2^-j .) - psi(2^{1-j} .) for j = 1..J"""
        levels = math.floor(grid.nyquist).bit_length() - 2
        if levels < 1:
            raise SpecTooSmall(f"{grid}: dyadic bank needs J >= 1")

        profile = grid_service.profile(1.25, 1.5)
        radius = grid_service.frequency_radius(grid)
        half = grid.n // 2
        blocks = []
        for j in range(levels + 1):
            reach = min(math.floor(grid.period * Fraction(3, 2) * 2 ** j), half - 1)
            window = tuple(slice(half - reach, half + reach + 1) for _ in range(grid.d))
            local = radius[window]
            values = grid_service.evaluate_profile(profile, local / 2 ** j)
            if j > 0:
                values = values - grid_service.evaluate_profile(profile, local / 2 ** (j - 1))
            blocks.append(BlockMultiplier(index=(j,), origin=(half - reach,) * grid.d, values=values))

        covered_radius = 1.25 * 2 ** levels
        bank = DecompositionBank(
            kind=BankKind.DYADIC,
            grid=grid,
            blocks=blocks,
            covered=radius <= covered_radius,
            covered_radius=covered_radius,
            levels=levels,
        )
        logger.info("✅ dyadic bank on %s: J=%d", grid, levels)
        return bank

    def default_alpha_support(self, d: int, alpha: Fraction, plateau: float) -> float:
        beta = float(alpha / (1 - alpha))
        return max(2.0, math.sqrt(d) * (1 + beta) - plateau)

    @lru_cache(maxsize=16)
    def build_alpha_bank(
        self,
        grid: GridSpec,
        alpha: Fraction,
        plateau: Optional[float] = None,
        support: Optional[float] = None,
    ) -> DecompositionBank:
        """Ball covering B(<k>^beta k, C <k>^beta), beta = alpha/(1-alpha), normalized"""
        alpha = Fraction(alpha)
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        beta = float(alpha / (1 - alpha))
        c = float(plateau if plateau is not None else settings.ALPHA_PLATEAU)
        if support is not None:
            big_c = float(support)
        elif settings.ALPHA_SUPPORT is not None:
            big_c = float(settings.ALPHA_SUPPORT)
        else:
            big_c = self.default_alpha_support(grid.d, alpha, c)
        profile = grid_service.profile(c, big_c)
        nyquist = float(grid.nyquist)
        reach = math.ceil(nyquist ** (1 / (1 + beta))) + math.ceil(big_c) + 2

        axis = grid_service.frequency_axis(grid)
        total = np.zeros(grid.shape)
        members: List[Tuple[BlockIndex, Tuple[int, ...], np.ndarray]] = []
        covered_radius = nyquist
        for index in itertools.product(range(-reach, reach + 1), repeat=grid.d):
            rho = _japanese(index) ** beta
            center = tuple(rho * k for k in index)
            distance = math.sqrt(sum(x * x for x in center))
            if distance + big_c * rho > nyquist:
                covered_radius = min(covered_radius, distance - big_c * rho)
            window = self._ball_window(grid, center, big_c * rho)
            if window is None:
                continue
            local = np.meshgrid(*(axis[w] for w in window), indexing="ij")
            gap = np.sqrt(sum((xi - x) ** 2 for xi, x in zip(local, center)))
            values = grid_service.evaluate_profile(profile, gap / rho)
            total[window] += values
            if distance + big_c * rho <= nyquist:
                members.append((index, tuple(w.start for w in window), values))

        if covered_radius <= 0:
            raise SpecTooSmall(f"{grid}: alpha covering leaves no covered ball")
        radius = grid_service.frequency_radius(grid)
        covered = radius <= covered_radius
        min_cover = float(total[covered].min())
        if min_cover < 0.5:
            raise CoverageGap(
                f"alpha={alpha}, c={c}, C={big_c:.4g}: covering sum drops to {min_cover:.4g} < 1/2"
            )

        blocks = []
        for index, origin, values in members:
            window = tuple(slice(start, start + size) for start, size in zip(origin, values.shape))
            local_total = total[window]
            normalized = np.divide(values, local_total, out=np.zeros_like(values), where=local_total > 0)
            blocks.append(BlockMultiplier(index=index, origin=origin, values=normalized))

        bank = DecompositionBank(
            kind=BankKind.ALPHA,
            grid=grid,
            blocks=blocks,
            covered=covered,
            covered_radius=covered_radius,
            alpha=alpha,
            plateau=c,
            support=big_c,
            min_cover=min_cover,
        )
        logger.info(
            "✅ alpha bank on %s: alpha=%s, %d blocks, R_cov=%.3f, min cover %.3f",
            grid, alpha, len(blocks), covered_radius, min_cover,
        )
        return bank

    def _ball_window(self, grid: GridSpec, center: Tuple[float, ...], radius: float) -> Optional[Tuple[slice, ...]]:
        half = grid.n // 2
        period = float(grid.period)
        window = []
        for x in center:
            lo = max(math.ceil((x - radius) * period), -half)
            hi = min(math.floor((x + radius) * period), half - 1)
            if lo > hi:
                return None
            window.append(slice(lo + half, hi + half + 1))
        return tuple(window)

    # Application

    def apply_block(self, bank: DecompositionBank, index: BlockIndex, f: GridFunction) -> GridFunction:
        position = bank.position(tuple(index))
        if position < 0:
            raise IndexOutOfRange(f"block {tuple(index)} is not in the {bank.kind.value} bank")
        block = bank.blocks[position]
        spectrum = grid_service.spectrum(f)
        filtered = np.zeros_like(spectrum)
        filtered[block.window] = spectrum[block.window] * block.values
        return grid_service.from_spectrum(f.grid, filtered)

    def block_components(self, bank: DecompositionBank, f: GridFunction) -> Iterator[Tuple[BlockMultiplier, np.ndarray]]:
        """Yield (block, samples of the filtered function) in bank order, skipping negligible blocks"""
        grid = f.grid
        spectrum = grid_service.spectrum(f)
        energy = np.abs(spectrum) ** 2
        floor = _NEGLIGIBLE_ENERGY * float(energy.sum())
        active = [
            block for block in bank.blocks
            if float(np.sum(energy[block.window] * block.values ** 2)) > floor
        ]
        batch = max(1, min(settings.BLOCK_BATCH, _BATCH_SAMPLES // grid.n ** grid.d))
        axes = tuple(range(1, grid.d + 1))
        for start in range(0, len(active), batch):
            chunk = active[start:start + batch]
            stacked = np.zeros((len(chunk),) + grid.shape, dtype=np.complex128)
            for row, block in enumerate(chunk):
                stacked[(row,) + block.window] = spectrum[block.window] * block.values
            samples = np.fft.ifftn(np.fft.ifftshift(stacked, axes=axes), axes=axes) / grid.cell_volume
            for row, block in enumerate(chunk):
                yield block, samples[row]

    def reconstruct(self, bank: DecompositionBank, f: GridFunction) -> GridFunction:
        total = np.zeros(f.grid.shape, dtype=np.complex128)
        for _, samples in self.block_components(bank, f):
            total += samples
        return GridFunction(grid=f.grid, samples=total)

    def index_weight(self, bank: DecompositionBank, index: BlockIndex, s: Fraction) -> float:
        """<k>^s (uniform), 2^{js} (dyadic), <k>^{s/(1-alpha)} (alpha)"""
        if s == 0:
            return 1.0
        if bank.kind == BankKind.DYADIC:
            return 2.0 ** (index[0] * float(s))
        if bank.kind == BankKind.ALPHA:
            return _japanese(index) ** float(s / (1 - bank.alpha))
        return _japanese(index) ** float(s)

    def truncation_tail(self, bank: DecompositionBank, f: GridFunction) -> float:
        """Share of spectral L2 mass outside the covered region"""
        energy = np.abs(grid_service.spectrum(f)) ** 2
        total = float(energy.sum())
        if total == 0:
            return 0.0
        return float(energy[~bank.covered].sum()) / total

    # Diagnostics

    def partition_sum(self, bank: DecompositionBank, power: int = 1) -> np.ndarray:
        total = np.zeros(bank.grid.shape)
        for block in bank.blocks:
            total[block.window] += block.values ** power
        return total

    def partition_deviation(self, bank: DecompositionBank) -> float:
        """max |sum_k multiplier_k - 1| on the covered region"""
        return float(np.abs(self.partition_sum(bank)[bank.covered] - 1).max())

    def bank_lower_constant(self, bank: DecompositionBank) -> float:
        """c_bank = min over the covered region of sum_k multiplier_k^2"""
        return float(self.partition_sum(bank, power=2)[bank.covered].min())

    def overlap_count(self, bank: DecompositionBank) -> int:
        counts = np.zeros(bank.grid.shape, dtype=np.int64)
        for block in bank.blocks:
            counts[block.window] += block.values > 0
        return int(counts.max())

    def alpha_block_mass(self, bank: DecompositionBank, index: BlockIndex) -> float:
        """sum of eta_k over the lattice times P^-d: the continuous count of unit cells in block k"""
        position = bank.position(tuple(index))
        if position < 0:
            raise IndexOutOfRange(f"block {tuple(index)} is not in the alpha bank")
        return float(bank.blocks[position].values.sum()) * bank.grid.frequency_cell

    def alpha_cells(self, bank: DecompositionBank, index: BlockIndex) -> List[BlockIndex]:
        """Integer cells l whose dominant alpha block is k (ties to the lowest index)"""
        owners = self._dominance(bank)
        position = bank.position(tuple(index))
        if position < 0:
            raise IndexOutOfRange(f"block {tuple(index)} is not in the alpha bank")
        return sorted(cell for cell, owner in owners.items() if owner == position)

    def _dominance(self, bank: DecompositionBank) -> Dict[BlockIndex, int]:
        if bank.kind != BankKind.ALPHA:
            raise ValueError(f"dominant cells need an alpha bank, got {bank.kind}")
        return self._alpha_owners(bank.grid, bank.alpha, bank.plateau, bank.support)

    @lru_cache(maxsize=8)
    def _alpha_owners(
        self, grid: GridSpec, alpha: Fraction, plateau: float, support: float
    ) -> Dict[BlockIndex, int]:
        """Position of the dominant alpha block at each integer cell of the covered ball"""
        if grid.period.denominator != 1:
            raise SpecTooSmall(f"{grid}: integer cells need an integer period")
        bank = self.build_alpha_bank(grid, alpha, plateau, support)
        step = int(grid.period)
        half = grid.n // 2
        best = np.zeros(grid.shape)
        owner = np.full(grid.shape, -1, dtype=np.int64)
        for position, block in enumerate(bank.blocks):
            region = best[block.window]
            better = block.values > region
            best[block.window] = np.where(better, block.values, region)
            owner[block.window] = np.where(better, position, owner[block.window])
        limit = math.floor(bank.covered_radius)
        owners: Dict[BlockIndex, int] = {}
        for cell in itertools.product(range(-limit, limit + 1), repeat=grid.d):
            if math.sqrt(sum(c * c for c in cell)) > bank.covered_radius:
                continue
            position = tuple(c * step + half for c in cell)
            if max(position) < grid.n and owner[position] >= 0:
                owners[cell] = int(owner[position])
        return owners


# Global bank service instance
bank_service = BankService()
