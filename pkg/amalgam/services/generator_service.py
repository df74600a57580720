# amalgam/services/generator_service.py
# Built-in test functions for the norm engine and the CLI

import logging
from typing import Callable, Dict, List

import numpy as np

from amalgam.core.exceptions import UsageException
from amalgam.models.grid import GridFunction, GridSpec
from amalgam.services.bank_service import bank_service
from amalgam.services.grid_service import grid_service

logger = logging.getLogger(__name__)


class GeneratorService:
    """Service for the named test-function generators"""

    def __init__(self):
        self._generators: Dict[str, Callable[..., GridFunction]] = {
            "gaussian": self.gaussian,
            "modulated-gaussian": self.modulated_gaussian,
            "block": self.block,
            "shell": self.shell,
            "random-bandlimited": self.random_bandlimited,
        }

    @property
    def names(self) -> List[str]:
        return sorted(self._generators)

    def generate(self, name: str, grid: GridSpec, seed: int = 7) -> GridFunction:
        generator = self._generators.get(name)
        if generator is None:
            raise UsageException(f"unknown generator {name!r}; choose from {', '.join(self.names)}")
        if name == "random-bandlimited":
            return generator(grid, seed=seed)
        return generator(grid)

    def gaussian(self, grid: GridSpec) -> GridFunction:
        """exp(-|x|^2 / 2), periodized"""
        return GridFunction(grid=grid, samples=np.exp(-grid_service.radius(grid) ** 2 / 2))

    def modulated_gaussian(self, grid: GridSpec, frequency: int = 3) -> GridFunction:
        x = grid_service.mesh(grid)[0]
        return GridFunction(grid=grid, samples=np.exp(1j * frequency * x - grid_service.radius(grid) ** 2 / 2))

    def block(self, grid: GridSpec) -> GridFunction:
        """F^-1 sigma_0, the zeroth uniform block"""
        bank = bank_service.build_uniform_bank(grid)
        block = bank.blocks[bank.position((0,) * grid.d)]
        spectrum = np.zeros(grid.shape, dtype=np.complex128)
        spectrum[block.window] = block.values
        return grid_service.from_spectrum(grid, spectrum)

    def shell(self, grid: GridSpec, theta: float = 0.5) -> GridFunction:
        """sum_j 2^{-j theta} F^-1 phi_j over the dyadic shells below the top level"""
        bank = bank_service.build_dyadic_bank(grid)
        spectrum = np.zeros(grid.shape, dtype=np.complex128)
        for block in bank.blocks[1:-1]:
            spectrum[block.window] += 2.0 ** (-block.index[0] * theta) * block.values
        return grid_service.from_spectrum(grid, spectrum)

    def random_bandlimited(self, grid: GridSpec, seed: int = 7, radius: float = 4.0) -> GridFunction:
        """Seeded complex white noise shaped by a radial window of the given radius"""
        rng = np.random.Generator(np.random.Philox(key=seed))
        noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        window = grid_service.radial_bump(grid, (0.0,) * grid.d, grid_service.profile(radius / 2, radius))
        return grid_service.from_spectrum(grid, noise * window)


# Global generator service instance
generator_service = GeneratorService()
