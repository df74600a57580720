# amalgam/services/inequality_service.py
# Numerical checks of the Bernstein, Young-type, convolution and dilation inequalities

import logging
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from amalgam.core.config import settings
from amalgam.core.exceptions import NotBandLimited
from amalgam.models.grid import GridFunction, GridSpec, InequalityReport
from amalgam.models.indices import ReciprocalIndex
from amalgam.models.spaces import SpaceFamily, SpaceSpec
from amalgam.services.grid_service import grid_service
from amalgam.services.norm_service import norm_service
from amalgam.services.probe_service import probe_service

logger = logging.getLogger(__name__)

SpectrumRule = Callable[[Tuple[np.ndarray, ...]], np.ndarray]


class InequalityService:
    """Service for measuring the ratios behind the block-norm inequalities"""

    def band_limited(self, grid: GridSpec, radius: float) -> GridFunction:
        """F^-1 of a radial bump equal to 1 on |xi| <= R/2 and supported in |xi| <= R"""
        profile = grid_service.profile(0.5, 1.0)
        spectrum = grid_service.radial_bump(grid, (0.0,) * grid.d, profile, scale=radius)
        return grid_service.from_spectrum(grid, spectrum)

    def require_band_limit(self, f: GridFunction, radius: float) -> None:
        energy = np.abs(grid_service.spectrum(f)) ** 2
        total = float(energy.sum())
        outside = float(energy[grid_service.frequency_radius(f.grid) > radius].sum())
        if total > 0 and outside > settings.BANDLIMIT_TOL * total:
            raise NotBandLimited(f"{outside / total:.3g} of the spectral mass lies outside |xi| <= {radius}")

    # Bernstein

    def check_bernstein(self, f: GridFunction, radius: float, u: Fraction, v: Fraction) -> InequalityReport:
        """||f||_q / ||f||_p for f band-limited to B(0, R), p = 1/u <= q = 1/v"""
        if u < v:
            raise ValueError("Bernstein needs p <= q")
        self.require_band_limit(f, radius)
        ratio = norm_service.lebesgue_norm(f, v) / norm_service.lebesgue_norm(f, u)
        return InequalityReport(
            name="bernstein",
            parameters=[radius],
            ratios=[ratio],
            predicted_exponent=f.grid.d * float(u - v),
            max_ratio=ratio,
        )

    def bernstein_sweep(self, grid: GridSpec, radii: Sequence[float], u: Fraction, v: Fraction) -> InequalityReport:
        reports = [self.check_bernstein(self.band_limited(grid, radius), radius, u, v) for radius in radii]
        report = self._merge("bernstein", reports)
        logger.info("✅ Bernstein sweep p=1/%s q=1/%s: slope %.4f (predicted %.4f)", u, v, report.fitted_exponent, report.predicted_exponent)
        return report

    # Young-type inequality below p = 1

    def check_young_sub1(self, f: GridFunction, g: GridFunction, u: Fraction, radius_f: float, radius_g: float) -> InequalityReport:
        """||f * g||_p / (||f||_p ||g||_p) for 0 < p < 1, parameterized by R1 + R2"""
        if u <= 1:
            raise ValueError("the Young-type check is for 0 < p < 1")
        self.require_band_limit(f, radius_f)
        self.require_band_limit(g, radius_g)
        convolution = grid_service.convolve(f, g)
        ratio = norm_service.lebesgue_norm(convolution, u) / (
            norm_service.lebesgue_norm(f, u) * norm_service.lebesgue_norm(g, u)
        )
        return InequalityReport(
            name="young-sub1",
            parameters=[radius_f + radius_g],
            ratios=[ratio],
            predicted_exponent=f.grid.d * float(u - 1),
            max_ratio=ratio,
        )

    def young_sweep(self, grid: GridSpec, radii: Sequence[float], u: Fraction) -> InequalityReport:
        reports = []
        for radius in radii:
            f = self.band_limited(grid, radius)
            reports.append(self.check_young_sub1(f, f, u, radius, radius))
        report = self._merge("young-sub1", reports)
        logger.info("✅ Young sweep p=1/%s: slope %.4f (predicted %.4f)", u, report.fitted_exponent, report.predicted_exponent)
        return report

    def _merge(self, name: str, reports: List[InequalityReport]) -> InequalityReport:
        parameters = [report.parameters[0] for report in reports]
        ratios = [report.ratios[0] for report in reports]
        slope, _, _ = probe_service.fit_growth(parameters, ratios)
        return InequalityReport(
            name=name,
            parameters=parameters,
            ratios=ratios,
            predicted_exponent=reports[0].predicted_exponent,
            fitted_exponent=slope,
            max_ratio=max(ratios),
        )

    # Recorded, not asserted sharp

    def check_convolution_closure(self, pairs: Iterable[Tuple[GridFunction, GridFunction]], u: Fraction) -> InequalityReport:
        """||f * g||_{W_{p,inf}} / (||f||_{W_{p,inf}} ||g||_{W_{p,inf}}) per pair"""
        space = SpaceSpec(family=SpaceFamily.WIENER, p=ReciprocalIndex(u=u), q=ReciprocalIndex(u=0))
        ratios = []
        for f, g in pairs:
            product = norm_service.space_norm(space, f).value * norm_service.space_norm(space, g).value
            ratios.append(norm_service.space_norm(space, grid_service.convolve(f, g)).value / product)
        logger.info("✅ W_{p,inf} convolution closure at p=1/%s: max ratio %.4g over %d pairs", u, max(ratios), len(ratios))
        return InequalityReport(
            name="convolution-closure",
            parameters=list(range(len(ratios))),
            ratios=ratios,
            max_ratio=max(ratios),
        )

    def dilate(self, grid: GridSpec, spectrum_rule: SpectrumRule, scale: float) -> GridFunction:
        """f(scale * x) for f given by its continuous spectrum"""
        mesh = grid_service.frequency_mesh(grid)
        spectrum = spectrum_rule(tuple(xi / scale for xi in mesh)) * scale ** -grid.d
        return grid_service.from_spectrum(grid, spectrum)

    def default_spectrum(self, grid: GridSpec) -> SpectrumRule:
        profile = grid_service.profile(0.5, 1.0)

        def rule(mesh: Tuple[np.ndarray, ...]) -> np.ndarray:
            total = np.zeros(mesh[0].shape, dtype=np.complex128)
            for k in (2, 4, 6):
                shifted = (mesh[0] - k,) + tuple(mesh[1:])
                total += grid_service.evaluate_profile(profile, np.sqrt(sum(x ** 2 for x in shifted)))
            return total

        return rule

    def check_dilation_bound(
        self,
        grid: GridSpec,
        v: Fraction,
        scales: Sequence[float],
        spectrum_rule: Optional[SpectrumRule] = None,
    ) -> InequalityReport:
        """||f_lambda||_{M_{inf,q}} / ||f||_{M_{inf,q}} for lambda <= 1"""
        rule = spectrum_rule or self.default_spectrum(grid)
        space = SpaceSpec(family=SpaceFamily.MODULATION, p=ReciprocalIndex(u=0), q=ReciprocalIndex(u=v))
        base = norm_service.space_norm(space, self.dilate(grid, rule, 1.0)).value
        ratios = [norm_service.space_norm(space, self.dilate(grid, rule, scale)).value / base for scale in scales]
        logger.info("✅ M_{inf,q} dilation bound at q=1/%s: max ratio %.4g", v, max(ratios))
        return InequalityReport(
            name="dilation-bound",
            parameters=list(scales),
            ratios=ratios,
            max_ratio=max(ratios),
        )


# Global inequality service instance
inequality_service = InequalityService()
