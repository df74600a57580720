# tests/conftest.py
# Shared grids, banks and test functions

from fractions import Fraction

import pytest

from amalgam.models.grid import GridSpec
from amalgam.models.spaces import EmbeddingQuery, SpaceSpec
from amalgam.services.bank_service import bank_service
from amalgam.services.generator_service import generator_service


@pytest.fixture(scope="session")
def grid():
    """The default acceptance grid"""
    return GridSpec(d=1, n=4096, period=Fraction(16))


@pytest.fixture(scope="session")
def small_grid():
    return GridSpec(d=1, n=512, period=Fraction(4))


@pytest.fixture(scope="session")
def grid_2d():
    return GridSpec(d=2, n=128, period=Fraction(4))


@pytest.fixture(scope="session")
def uniform_bank(grid):
    return bank_service.build_uniform_bank(grid)


@pytest.fixture(scope="session")
def dyadic_bank(grid):
    return bank_service.build_dyadic_bank(grid)


@pytest.fixture(scope="session")
def corpus(grid):
    return {name: generator_service.generate(name, grid) for name in generator_service.names}


@pytest.fixture
def query():
    """Build a query from two spec strings"""
    def build(src: str, dst: str, d: int = 1, **options) -> EmbeddingQuery:
        return EmbeddingQuery(src=SpaceSpec.parse(src), dst=SpaceSpec.parse(dst), d=d, options=options or {})
    return build
