# amalgam/services/grid_service.py
# Periodic grid transforms, window profiles, WGF1 files and the STFT
#
# Transform convention: f^(xi) = int f(x) e^{-i x xi} dx, realized on the grid as
# f^ = h^d * fft(f) on the lattice xi = m/P. The inverse is f = ifft(f^) / h^d,
# and Parseval reads ||f||_2^2 = (2 pi P)^-d * sum |f^|^2.

import logging
import math
import struct
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from amalgam.core.config import settings
from amalgam.core.exceptions import DataFormatException
from amalgam.models.grid import GridFunction, GridSpec, WindowProfile

logger = logging.getLogger(__name__)

WGF1_MAGIC = b"WGF1"
_WGF1_HEADER = struct.Struct("<4sBId")


@lru_cache(maxsize=8)
def _smooth_step_coefficients(order: int) -> np.ndarray:
    # S(t) = t^{n+1} sum_k C(n+k,k) C(2n+1,n-k) (-t)^k, highest power first for np.polyval
    n = order
    coefficients = np.zeros(2 * n + 2)
    for k in range(n + 1):
        coefficients[n + 1 + k] = math.comb(n + k, k) * math.comb(2 * n + 1, n - k) * (-1) ** k
    return coefficients[::-1].copy()


class GridService:
    """Service for grid geometry and Fourier transforms"""

    # Geometry

    def coordinates(self, grid: GridSpec) -> np.ndarray:
        """Wrapped sample coordinates x_n in [-pi P, pi P)"""
        n = np.arange(grid.n)
        return np.where(n < grid.n // 2, n, n - grid.n) * grid.spacing

    def mesh(self, grid: GridSpec) -> Tuple[np.ndarray, ...]:
        axis = self.coordinates(grid)
        return np.meshgrid(*([axis] * grid.d), indexing="ij")

    def radius(self, grid: GridSpec) -> np.ndarray:
        return np.sqrt(sum(x ** 2 for x in self.mesh(grid)))

    def frequency_axis(self, grid: GridSpec) -> np.ndarray:
        """Centred lattice frequencies m/P, m in [-N/2, N/2)"""
        return (np.arange(grid.n) - grid.n // 2) / float(grid.period)

    def frequency_mesh(self, grid: GridSpec) -> Tuple[np.ndarray, ...]:
        axis = self.frequency_axis(grid)
        return np.meshgrid(*([axis] * grid.d), indexing="ij")

    def frequency_radius(self, grid: GridSpec) -> np.ndarray:
        return np.sqrt(sum(xi ** 2 for xi in self.frequency_mesh(grid)))

    def lattice_offset(self, grid: GridSpec, frequency: Fraction) -> int:
        """Centred array offset of a lattice frequency, or raise if off-lattice"""
        m = Fraction(frequency) * grid.period
        if m.denominator != 1:
            raise ValueError(f"frequency {frequency} is not on the lattice (1/{grid.period})Z")
        return int(m) + grid.n // 2

    # Transforms

    def spectrum(self, f: GridFunction) -> np.ndarray:
        """Centred samples of f^"""
        return np.fft.fftshift(np.fft.fftn(f.samples)) * f.grid.cell_volume

    def from_spectrum(self, grid: GridSpec, spectrum: np.ndarray) -> GridFunction:
        samples = np.fft.ifftn(np.fft.ifftshift(spectrum)) / grid.cell_volume
        return GridFunction(grid=grid, samples=samples)

    def from_function(self, grid: GridSpec, values: np.ndarray) -> GridFunction:
        return GridFunction(grid=grid, samples=values)

    def multiply(self, f: GridFunction, multiplier: np.ndarray) -> GridFunction:
        """Apply a centred Fourier multiplier"""
        return self.from_spectrum(f.grid, self.spectrum(f) * multiplier)

    def convolve(self, f: GridFunction, g: GridFunction) -> GridFunction:
        """Circular convolution int f(y) g(x-y) dy"""
        samples = np.fft.ifftn(np.fft.fftn(f.samples) * np.fft.fftn(g.samples)) * f.grid.cell_volume
        return GridFunction(grid=f.grid, samples=samples)

    # Lebesgue norms on the period cell

    def lp_norm(self, values: np.ndarray, u: Fraction, measure: float) -> float:
        """(measure * sum |values|^p)^(1/p) for p = 1/u; u = 0 gives the max"""
        magnitude = np.abs(values)
        if u == 0:
            return float(magnitude.max(initial=0.0))
        p = 1 / float(u)
        return float((measure * np.sum(magnitude ** p)) ** float(u))

    def l2_norm(self, f: GridFunction) -> float:
        return self.lp_norm(f.samples, Fraction(1, 2), f.grid.cell_volume)

    def spectral_l2_norm(self, f: GridFunction) -> float:
        spectrum = self.spectrum(f)
        return float(np.sqrt(np.sum(np.abs(spectrum) ** 2) / (2 * math.pi * float(f.grid.period)) ** f.grid.d))

    # Window profiles

    def smooth_step(self, t: np.ndarray, order: int) -> np.ndarray:
        """Polynomial step, 0 at t<=0 and 1 at t>=1, with `order` matching derivatives"""
        t = np.clip(t, 0.0, 1.0)
        return np.clip(np.polyval(_smooth_step_coefficients(order), t), 0.0, 1.0)

    def evaluate_profile(self, profile: WindowProfile, t: Union[np.ndarray, float]) -> np.ndarray:
        """Profile value at distance |t| from the centre"""
        t = np.abs(np.asarray(t, dtype=float))
        ramp = (t - profile.plateau) / (profile.support - profile.plateau)
        values = 1.0 - self.smooth_step(ramp, profile.order)
        return np.where(t <= profile.plateau, 1.0, np.where(t >= profile.support, 0.0, values))

    def profile(self, plateau: float, support: float) -> WindowProfile:
        return WindowProfile(plateau=plateau, support=support, order=settings.WINDOW_ORDER)

    def tensor_bump(self, grid: GridSpec, center: Tuple[float, ...], profile: WindowProfile, scale: float = 1.0) -> np.ndarray:
        """Centred spectrum prod_i profile((xi_i - c_i)/scale)"""
        axis = self.frequency_axis(grid)
        values = np.ones(grid.shape)
        for dim in range(grid.d):
            factor = self.evaluate_profile(profile, (axis - center[dim]) / scale)
            shape = [1] * grid.d
            shape[dim] = grid.n
            values = values * factor.reshape(shape)
        return values

    def radial_bump(self, grid: GridSpec, center: Tuple[float, ...], profile: WindowProfile, scale: float = 1.0) -> np.ndarray:
        mesh = self.frequency_mesh(grid)
        distance = np.sqrt(sum((xi - c) ** 2 for xi, c in zip(mesh, center)))
        return self.evaluate_profile(profile, distance / scale)

    # WGF1 files

    def write_wgf1(self, f: GridFunction, path: Union[str, Path]) -> None:
        header = _WGF1_HEADER.pack(WGF1_MAGIC, f.grid.d, f.grid.n, float(f.grid.period))
        payload = np.ascontiguousarray(f.samples, dtype="<c16").tobytes(order="C")
        Path(path).write_bytes(header + payload)
        logger.info("✅ wrote %s (%s)", path, f.grid)

    def read_wgf1(self, path: Union[str, Path]) -> GridFunction:
        data = Path(path).read_bytes()
        if len(data) < _WGF1_HEADER.size:
            raise DataFormatException(f"{path}: truncated WGF1 header")
        magic, d, n, period = _WGF1_HEADER.unpack_from(data)
        if magic != WGF1_MAGIC:
            raise DataFormatException(f"{path}: bad magic {magic!r}")
        if not math.isfinite(period) or period <= 0:
            raise DataFormatException(f"{path}: period must be positive, got {period}")
        try:
            grid = GridSpec(d=d, n=n, period=Fraction(period).limit_denominator(1 << 20))
        except ValueError as exc:
            raise DataFormatException(f"{path}: invalid grid header: {exc}") from exc
        expected = _WGF1_HEADER.size + 16 * n ** d
        if len(data) != expected:
            raise DataFormatException(f"{path}: expected {expected} bytes for {grid}, found {len(data)}")
        samples = np.frombuffer(data, dtype="<c16", offset=_WGF1_HEADER.size).reshape(grid.shape)
        if not np.all(np.isfinite(samples)):
            raise DataFormatException(f"{path}: non-finite samples")
        return GridFunction(grid=grid, samples=samples.astype(np.complex128))

    # Short-time Fourier transform

    def gaussian_window(self, grid: GridSpec) -> GridFunction:
        """Unit Gaussian normalized to ||g||_2 = 1 on the grid"""
        values = np.exp(-self.radius(grid) ** 2 / 2).astype(np.complex128)
        g = GridFunction(grid=grid, samples=values)
        return g.scaled(1 / self.l2_norm(g))

    def stft_grid(self, f: GridFunction, window: GridFunction, stride: int) -> np.ndarray:
        """V_g f on shifts x = stride*h*n (axis 0..d-1) by centred lattice frequencies (axes d..2d-1)"""
        grid = f.grid
        shifts = range(0, grid.n, stride)
        count = len(shifts)
        result = np.empty((count,) * grid.d + grid.shape, dtype=np.complex128)
        conjugate = np.conj(window.samples)
        for position in np.ndindex(*((count,) * grid.d)):
            offset = tuple(position[dim] * stride for dim in range(grid.d))
            product = f.samples * np.roll(conjugate, offset, axis=tuple(range(grid.d)))
            result[position] = np.fft.fftshift(np.fft.fftn(product)) * grid.cell_volume
        return result


# Global grid service instance
grid_service = GridService()
