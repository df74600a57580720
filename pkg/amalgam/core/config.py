# amalgam/core/config.py
# Configuration management for the amalgam embedding toolkit

import os
from fractions import Fraction
from typing import Optional
from dotenv import load_dotenv

from amalgam.core.exceptions import ConfigurationException

# Load environment variables
load_dotenv()


def _env(name: str, default: str) -> str:
    return os.getenv(f"AMALGAM_{name}", default)


class Settings:
    """Toolkit settings and configuration"""

    # Default grid for `norm` and `probe`
    GRID_D: int = int(_env("GRID_D", "1"))
    GRID_N: int = int(_env("GRID_N", "4096"))
    GRID_PERIOD: Fraction = Fraction(_env("GRID_PERIOD", "16"))

    # Window construction
    WINDOW_ORDER: int = int(_env("WINDOW_ORDER", "8"))  # smooth-step order, C^order transition
    ALPHA_PLATEAU: Fraction = Fraction(_env("ALPHA_PLATEAU", "1/2"))
    ALPHA_SUPPORT: Optional[Fraction] = (
        Fraction(_env("ALPHA_SUPPORT", "")) if _env("ALPHA_SUPPORT", "") else None
    )  # None: adaptive to the centre spacing

    # Numerical tolerances
    PARTITION_TOL: float = float(_env("PARTITION_TOL", "1e-10"))
    ALPHA_PARTITION_TOL: float = float(_env("ALPHA_PARTITION_TOL", "1e-8"))
    TRUNCATION_TOL: float = float(_env("TRUNCATION_TOL", "1e-6"))
    BANDLIMIT_TOL: float = float(_env("BANDLIMIT_TOL", "1e-10"))
    STFT_BAND: float = float(_env("STFT_BAND", "8"))

    # Probe settings
    PROBE_TRIALS: int = int(_env("PROBE_TRIALS", "64"))
    PROBE_SEED: int = int(_env("PROBE_SEED", "7"))
    PROBE_SLOPE_NOISE: float = float(_env("PROBE_SLOPE_NOISE", "0.05"))
    PROBE_HOLDS_SPREAD: float = float(_env("PROBE_HOLDS_SPREAD", "2"))

    # Block filtering
    BLOCK_BATCH: int = int(_env("BLOCK_BATCH", "64"))  # multipliers per batched inverse FFT

    # Application Settings
    LOG_LEVEL: str = _env("LOG_LEVEL", "WARNING").upper()
    DEBUG: bool = _env("DEBUG", "False").lower() == "true"

    @classmethod
    def validate(cls) -> bool:
        """Validate configuration ranges"""
        if cls.GRID_D not in (1, 2):
            raise ConfigurationException(f"AMALGAM_GRID_D must be 1 or 2, got {cls.GRID_D}")
        if cls.GRID_N < 8 or cls.GRID_N & (cls.GRID_N - 1):
            raise ConfigurationException(f"AMALGAM_GRID_N must be a power of two, got {cls.GRID_N}")
        if cls.GRID_PERIOD <= 0:
            raise ConfigurationException("AMALGAM_GRID_PERIOD must be positive")
        if cls.WINDOW_ORDER < 8:
            raise ConfigurationException("AMALGAM_WINDOW_ORDER must be at least 8")
        if cls.ALPHA_PLATEAU <= 0:
            raise ConfigurationException("AMALGAM_ALPHA_PLATEAU must be positive")
        if cls.ALPHA_SUPPORT is not None and cls.ALPHA_SUPPORT <= cls.ALPHA_PLATEAU:
            raise ConfigurationException("AMALGAM_ALPHA_SUPPORT must exceed the plateau constant")
        if cls.PROBE_TRIALS < 1:
            raise ConfigurationException("AMALGAM_PROBE_TRIALS must be positive")
        if cls.STFT_BAND < 1:
            raise ConfigurationException("AMALGAM_STFT_BAND must be at least 1")
        return True


# Global settings instance
settings = Settings()
