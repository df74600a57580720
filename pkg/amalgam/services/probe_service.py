# amalgam/services/probe_service.py
# Extremal families and sharpness probes

import logging
import math
from fractions import Fraction
from itertools import groupby
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from amalgam.core.config import settings
from amalgam.core.exceptions import DegenerateFit, GridTooSmall, SweepDegenerate, UnsupportedPair
from amalgam.models.grid import GridFunction, GridSpec
from amalgam.models.probes import (
    CorroborationInstance,
    FamilyMember,
    FamilySpec,
    ProbeReport,
    SweepAxis,
)
from amalgam.models.spaces import (
    EmbeddingQuery,
    FamilyKind,
    SpaceFamily,
    SpaceSpec,
    VerdictRecord,
    VerdictStatus,
)
from amalgam.services.bank_service import bank_service
from amalgam.services.grid_service import grid_service
from amalgam.services.norm_service import norm_service
from amalgam.services.oracle_service import oracle_service

logger = logging.getLogger(__name__)

# Growth a Fails instance must show across its sweep
FAILS_GROWTH = 4.0


def _japanese(k: float) -> float:
    return math.sqrt(1 + k * k)


class ProbeService:
    """Service for extremal families and norm-ratio growth fits"""

    def __init__(self):
        self._builders: Dict[FamilyKind, Callable[[FamilySpec, GridSpec], List[FamilyMember]]] = {
            FamilyKind.MODULATED_BUMP: self._modulated_bump,
            FamilyKind.SCALED_BUMP: self._scaled_bump,
            FamilyKind.APPROX_IDENTITY: self._approx_identity,
            FamilyKind.DYADIC_SHELL_SUM: self._dyadic_shell_sum,
            FamilyKind.UNIFORM_LACUNARY: self._uniform_lacunary,
            FamilyKind.SPREAD_TRANSLATES: self._spread_translates,
            FamilyKind.RADEMACHER_SHELL: self._rademacher_shell,
            FamilyKind.ALPHA_CENTER_TRANSLATES: self._alpha_center_translates,
            FamilyKind.ALPHA_BLOCK_TRANSLATES: self._alpha_block_translates,
        }

    # Building blocks

    def eta_spectrum(self, grid: GridSpec, center: Tuple[float, ...]) -> np.ndarray:
        """Tensor bump equal to 1 on center + [-1/16, 1/16]^d, supported in center + [-1/8, 1/8]^d"""
        return grid_service.tensor_bump(grid, center, grid_service.profile(1 / 16, 1 / 8))

    def eta(self, grid: GridSpec, center: Optional[Tuple[float, ...]] = None) -> GridFunction:
        center = center or (0.0,) * grid.d
        return grid_service.from_spectrum(grid, self.eta_spectrum(grid, center))

    def _axis_point(self, grid: GridSpec, value: float) -> Tuple[float, ...]:
        return (value,) + (0.0,) * (grid.d - 1)

    def _uniform_block(self, grid: GridSpec, k: int) -> np.ndarray:
        bank = bank_service.build_uniform_bank(grid)
        position = bank.position((k,) + (0,) * (grid.d - 1))
        if position < 0:
            raise GridTooSmall(f"{grid}: uniform block {k} is outside K_max={bank.k_max}")
        block = bank.blocks[position]
        spectrum = np.zeros(grid.shape, dtype=np.complex128)
        spectrum[block.window] = block.values
        return spectrum

    def _shift(self, grid: GridSpec, distance: float) -> int:
        return int(round(distance / grid.spacing))

    def _check_span(self, grid: GridSpec, span: float) -> None:
        length = 2 * math.pi * float(grid.period)
        if span > length * 15 / 16:
            raise GridTooSmall(f"{grid}: translates spanning {span:.4g} do not fit in the period {length:.4g}")

    # Families

    def generate_family(self, spec: FamilySpec, grid: GridSpec) -> List[FamilyMember]:
        """Members in sweep order; randomized families yield one member per trial"""
        members = self._builders[spec.kind](spec, grid)
        logger.debug("Generated %d members of %s on %s", len(members), spec.kind.value, grid)
        return members

    def _modulated_bump(self, spec: FamilySpec, grid: GridSpec) -> List[FamilyMember]:
        k_max = bank_service.build_uniform_bank(grid).k_max
        members = []
        for k in spec.sweep:
            if k.denominator != 1 or abs(k) > k_max:
                raise GridTooSmall(f"{grid}: modulation {k} must be an integer with |k| <= {k_max}")
            function = grid_service.from_spectrum(grid, self.eta_spectrum(grid, self._axis_point(grid, float(k))))
            members.append(FamilyMember(parameter=_japanese(float(k)), function=function))
        return members

    def _scaled_bump(self, spec: FamilySpec, grid: GridSpec) -> List[FamilyMember]:
        profile = grid_service.profile(0.5, 1.0)
        members = []
        for scale in spec.sweep:
            if scale <= 0 or scale * grid.period < 4 or scale > grid.nyquist / 2:
                raise GridTooSmall(f"{grid}: dilation {scale} needs 4/P <= lambda <= Nyquist/2")
            spectrum = grid_service.tensor_bump(grid, (0.0,) * grid.d, profile, scale=float(scale))
            function = grid_service.from_spectrum(grid, spectrum * float(scale) ** -grid.d)
            members.append(FamilyMember(parameter=float(scale), function=function))
        return members

    def _approx_identity(self, spec: FamilySpec, grid: GridSpec) -> List[FamilyMember]:
        profile = grid_service.profile(1.0, 2.0)
        k_max = bank_service.build_uniform_bank(grid).k_max
        members = []
        for m in spec.sweep:
            if m.denominator != 1 or m < 1 or 2 ** (int(m) + 1) > k_max:
                raise GridTooSmall(f"{grid}: t = 2^-{m} needs m >= 1 and 2^(m+1) <= {k_max}")
            t = 2.0 ** -int(m)
            spectrum = grid_service.tensor_bump(grid, (0.0,) * grid.d, profile, scale=1 / t)
            members.append(FamilyMember(parameter=int(m) * math.log(2), function=grid_service.from_spectrum(grid, spectrum)))
        return members

    def _dyadic_shell_sum(self, spec: FamilySpec, grid: GridSpec) -> List[FamilyMember]:
        profile = grid_service.profile(1 / 8, 1 / 4)
        reach = min(bank_service.build_uniform_bank(grid).covered_radius, bank_service.build_dyadic_bank(grid).covered_radius)
        radius = grid_service.frequency_radius(grid)
        members = []
        for j in spec.sweep:
            if j.denominator != 1 or j < 1 or 1.25 * 2 ** int(j) > reach:
                raise GridTooSmall(f"{grid}: shell 2^{j} is outside the covered radius {reach:.4g}")
            spectrum = np.zeros(grid.shape)
            for i in range(1, int(j) + 1):
                shell = grid_service.evaluate_profile(profile, np.abs(radius - 2 ** i) / 2 ** i)
                spectrum += 2.0 ** (-i * float(spec.theta)) * shell
            members.append(FamilyMember(parameter=2.0 ** int(j), function=grid_service.from_spectrum(grid, spectrum)))
        return members

    def _uniform_lacunary(self, spec: FamilySpec, grid: GridSpec) -> List[FamilyMember]:
        members = []
        for j in spec.sweep:
            if j.denominator != 1 or j < 1:
                raise GridTooSmall(f"lacunary sweeps take integer j >= 1, got {j}")
            spectrum = sum(
                2.0 ** (-i * float(spec.theta)) * self._uniform_block(grid, 2 ** i) for i in range(1, int(j) + 1)
            )
            members.append(FamilyMember(parameter=2.0 ** int(j), function=grid_service.from_spectrum(grid, spectrum)))
        return members

    def _spread_translates(self, spec: FamilySpec, grid: GridSpec) -> List[FamilyMember]:
        """sum_k a_k T_{N k}(e^{ikx} eta), a_k = <k>^-theta"""
        k_max = bank_service.build_uniform_bank(grid).k_max
        members = []
        for value in spec.sweep:
            if spec.axis == SweepAxis.COUNT:
                count, spread = int(value), float(spec.spread or 0)
            else:
                count, spread = int(spec.count or 0), float(value)
            if count < 1 or spread <= 0:
                raise GridTooSmall("spread translates need a positive count and spread")
            if count - 1 > k_max:
                raise GridTooSmall(f"{grid}: {count} translates need frequencies up to {count - 1} > K_max={k_max}")
            self._check_span(grid, spread * (count - 1))
            samples = np.zeros(grid.shape, dtype=np.complex128)
            for k in range(count):
                bump = self.eta(grid, self._axis_point(grid, float(k))).samples
                samples += _japanese(k) ** -float(spec.theta) * np.roll(bump, self._shift(grid, spread * k), axis=0)
            members.append(FamilyMember(parameter=float(value), function=GridFunction(grid=grid, samples=samples)))
        return members

    def _rademacher_shell(self, spec: FamilySpec, grid: GridSpec) -> List[FamilyMember]:
        """sum over the shell's cells of eps_l F^-1 sigma_l; one member per (shell, trial)"""
        members = []
        for shell in spec.sweep:
            if shell.denominator != 1:
                raise GridTooSmall(f"shell index must be an integer, got {shell}")
            cells = self.shell_cells(spec, grid, int(shell))
            blocks = [self._cell_function(grid, cell) for cell in cells]
            rng = np.random.Generator(np.random.Philox(key=[spec.seed, int(shell)]))
            signs = rng.choice(np.array([-1.0, 1.0]), size=(spec.trials, len(cells)))
            stacked = np.stack(blocks)
            for trial in range(spec.trials):
                samples = np.tensordot(signs[trial], stacked, axes=1)
                members.append(FamilyMember(parameter=float(len(cells)), trial=trial, function=GridFunction(grid=grid, samples=samples)))
        return members

    def shell_cells(self, spec: FamilySpec, grid: GridSpec, shell: int) -> List[Tuple[int, ...]]:
        """Cells l in [2^j, 2^{j+1}) along e1, or Lambda_k for an alpha block k = shell"""
        if spec.alpha is not None:
            bank = bank_service.build_alpha_bank(grid, Fraction(spec.alpha))
            cells = bank_service.alpha_cells(bank, (shell,) + (0,) * (grid.d - 1))
            if not cells:
                raise GridTooSmall(f"alpha block {shell} owns no lattice cells on {grid}")
            return cells
        k_max = bank_service.build_uniform_bank(grid).k_max
        if shell < 0 or 2 ** (shell + 1) - 1 > k_max:
            raise GridTooSmall(f"{grid}: shell {shell} reaches past K_max={k_max}")
        return [(cell,) + (0,) * (grid.d - 1) for cell in range(2 ** shell, 2 ** (shell + 1))]

    def _cell_function(self, grid: GridSpec, cell: Tuple[int, ...]) -> np.ndarray:
        bank = bank_service.build_uniform_bank(grid)
        position = bank.position(tuple(cell))
        if position < 0:
            raise GridTooSmall(f"{grid}: cell {cell} is outside the uniform bank")
        block = bank.blocks[position]
        spectrum = np.zeros(grid.shape, dtype=np.complex128)
        spectrum[block.window] = block.values
        return grid_service.from_spectrum(grid, spectrum).samples

    def _alpha_center_translates(self, spec: FamilySpec, grid: GridSpec) -> List[FamilyMember]:
        """e^{i xi_k x} eta with xi_k = <k>^{alpha/(1-alpha)} k snapped to the lattice"""
        alpha = self._alpha(spec)
        bank = bank_service.build_alpha_bank(grid, alpha)
        beta = float(alpha / (1 - alpha))
        members = []
        for k in spec.sweep:
            center = _japanese(float(k)) ** beta * float(k)
            if abs(center) + 1 / 8 > bank.covered_radius:
                raise GridTooSmall(f"{grid}: alpha center {center:.4g} is outside R_cov={bank.covered_radius:.4g}")
            snapped = round(center * float(grid.period)) / float(grid.period)
            function = grid_service.from_spectrum(grid, self.eta_spectrum(grid, self._axis_point(grid, snapped)))
            members.append(FamilyMember(parameter=_japanese(float(k)), function=function))
        return members

    def _alpha_block_translates(self, spec: FamilySpec, grid: GridSpec) -> List[FamilyMember]:
        """sum_{k <= K} a_k T_{N k}(F^-1 eta_k), or the single block F^-1 eta_K without a spread"""
        alpha = self._alpha(spec)
        bank = bank_service.build_alpha_bank(grid, alpha)
        members = []
        for top in spec.sweep:
            indices = range(int(top) + 1) if spec.spread else [int(top)]
            if spec.spread:
                self._check_span(grid, float(spec.spread) * int(top))
            samples = np.zeros(grid.shape, dtype=np.complex128)
            for k in indices:
                position = bank.position((k,) + (0,) * (grid.d - 1))
                if position < 0:
                    raise GridTooSmall(f"alpha block {k} is not in the bank on {grid}")
                block = bank.blocks[position]
                spectrum = np.zeros(grid.shape, dtype=np.complex128)
                spectrum[block.window] = block.values
                bump = grid_service.from_spectrum(grid, spectrum).samples
                shift = self._shift(grid, float(spec.spread or 0) * k)
                samples += _japanese(k) ** -float(spec.theta) * np.roll(bump, shift, axis=0)
            members.append(FamilyMember(parameter=_japanese(float(top)), function=GridFunction(grid=grid, samples=samples)))
        return members

    def _alpha(self, spec: FamilySpec) -> Fraction:
        if spec.alpha is None or not 0 < spec.alpha < 1:
            raise GridTooSmall(f"{spec.kind.value} needs 0 < alpha < 1")
        return Fraction(spec.alpha)

    # Norms along a family

    def moment_exponent(self, space: SpaceSpec) -> float:
        """Integrability exponent used to average trials; 1 when it is infinite"""
        if space.family in (SpaceFamily.SEQ_WEIGHTED0, SpaceFamily.SEQ_WEIGHTED1):
            return 1.0
        u = space.exponent("r" if space.family in (SpaceFamily.SOBOLEV, SpaceFamily.LOCAL_HARDY) else "p")
        return 1.0 if u == 0 else 1 / float(u)

    def member_norms(self, members: Sequence[FamilyMember], space: SpaceSpec) -> Tuple[List[float], List[float]]:
        """(sweep coordinates, norms); trials collapse to (E ||f||^r)^{1/r}"""
        power = self.moment_exponent(space)
        xs, norms = [], []
        for parameter, group in groupby(members, key=lambda member: member.parameter):
            values = np.array([norm_service.space_norm(space, member.function).value for member in group])
            xs.append(parameter)
            norms.append(float(np.mean(values ** power) ** (1 / power)))
        return xs, norms

    def family_norms(self, spec: FamilySpec, space: SpaceSpec, grid: GridSpec) -> Tuple[List[float], List[float]]:
        return self.member_norms(self.generate_family(spec, grid), space)

    def fit_growth(self, xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float, float]:
        """Least-squares line through (log x, log y): (slope, intercept, r2)"""
        x = np.asarray(xs, dtype=float)
        y = np.asarray(ys, dtype=float)
        if len(x) < 4 or len(x) != len(y):
            raise DegenerateFit(f"need at least 4 paired points, got {len(x)}")
        if np.any(np.diff(x) <= 0):
            raise DegenerateFit("sweep coordinates must be strictly increasing")
        if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(y)):
            raise DegenerateFit("log-log fits need positive finite values")
        if x[-1] / x[0] < 4:
            raise DegenerateFit(f"sweep spans a factor {x[-1] / x[0]:.3g} < 4")
        log_x, log_y = np.log(x), np.log(y)
        slope, intercept = np.polyfit(log_x, log_y, 1)
        residual = log_y - (slope * log_x + intercept)
        ss_res = float(np.sum(residual ** 2))
        ss_tot = float(np.sum((log_y - log_y.mean()) ** 2))
        if ss_res <= 1e-24 * max(1.0, ss_tot) or ss_tot == 0:
            r2 = 1.0
        else:
            r2 = min(1.0, max(0.0, 1 - ss_res / ss_tot))
        return float(slope), float(intercept), r2

    def approx_identity_functional(self, d: int, v: Fraction, ms: Sequence[int]) -> List[float]:
        """||<k>^{-d/q}||_{l^q} over {k : |k|_inf <= 2^m - 1} for each m"""
        if v == 0:
            raise ValueError("the functional diverges only for q < inf")
        q = 1 / float(v)
        values = []
        for m in ms:
            reach = 2 ** m - 1
            axis = np.arange(-reach, reach + 1, dtype=float)
            mesh = np.meshgrid(*([axis] * d), indexing="ij")
            weights = (1 + sum(k ** 2 for k in mesh)) ** (-d / 2)
            values.append(float(np.sum(weights) ** (1 / q)))
        return values

    # Probes

    def run_probe(self, spec: FamilySpec, src: SpaceSpec, dst: SpaceSpec, grid: GridSpec) -> ProbeReport:
        """Fit ratio growth along the family and compare with the oracle's verdict"""
        members = self.generate_family(spec, grid)
        xs, src_norms = self.member_norms(members, src)
        _, dst_norms = self.member_norms(members, dst)

        usable = [
            (x, a, b) for x, a, b in zip(xs, src_norms, dst_norms)
            if a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)
        ]
        if len(usable) < 4:
            raise SweepDegenerate(f"only {len(usable)} usable sweep points for {spec.kind.value}")
        xs = [x for x, _, _ in usable]
        src_norms = [a for _, a, _ in usable]
        dst_norms = [b for _, _, b in usable]
        ratios = [b / a for a, b in zip(src_norms, dst_norms)]

        slope, intercept, r2 = self.fit_growth(xs, ratios)
        src_slope = self.fit_growth(xs, src_norms)[0]
        dst_slope = self.fit_growth(xs, dst_norms)[0]
        median = float(np.median(ratios))
        growth = ratios[-1] / ratios[0]
        spread = max(max(ratios) / median, median / min(ratios))

        record = self._verdict(src, dst, grid.d)
        corroborated = False
        if record is not None and record.status == VerdictStatus.FAILS:
            corroborated = slope > settings.PROBE_SLOPE_NOISE
        elif record is not None and record.status == VerdictStatus.HOLDS:
            corroborated = spread <= settings.PROBE_HOLDS_SPREAD

        logger.info(
            "%s %s: %s -> %s slope %.4f, growth %.3g, r2 %.3f",
            "✅" if corroborated else "⚠️", spec.kind.value, src, dst, slope, growth, r2,
        )
        return ProbeReport(
            family=spec,
            src=str(src),
            dst=str(dst),
            grid=str(grid),
            sweep=xs,
            src_norms=src_norms,
            dst_norms=dst_norms,
            ratios=ratios,
            loglog_slope=slope,
            intercept=intercept,
            fit_r2=r2,
            src_slope=src_slope,
            dst_slope=dst_slope,
            growth=growth,
            holds_spread=spread,
            trials=spec.trials if spec.kind == FamilyKind.RADEMACHER_SHELL else None,
            verdict=record,
            verdict_corroborated=corroborated,
        )

    def _verdict(self, src: SpaceSpec, dst: SpaceSpec, d: int) -> Optional[VerdictRecord]:
        query = EmbeddingQuery(src=src, dst=dst, d=d)
        try:
            return VerdictRecord.from_pair(query, oracle_service.decide(query))
        except UnsupportedPair:
            logger.warning("⚠️ no catalogue entry for %s -> %s; probe left uncorroborated", src, dst)
            return None

    def corroboration_instances(self) -> List[CorroborationInstance]:
        """Five failing and five holding oracle cases with the family that exhibits each"""
        spec = SpaceSpec.parse
        grid = GridSpec.parse

        def instance(name, expected, family, src, dst, grid_text):
            return CorroborationInstance(
                name=name,
                expected=expected,
                family=family,
                src=spec(src),
                dst=spec(dst),
                grid=grid(grid_text),
            )

        powers = [1, 2, 4, 8, 16]
        modulated = FamilySpec(kind=FamilyKind.MODULATED_BUMP, sweep=powers)
        translates = FamilySpec(kind=FamilyKind.SPREAD_TRANSLATES, sweep=powers, spread=100)
        shells = FamilySpec(kind=FamilyKind.DYADIC_SHELL_SUM, sweep=[1, 2, 3, 4, 5, 6], theta=-1)
        rademacher = FamilySpec(kind=FamilyKind.RADEMACHER_SHELL, sweep=[1, 2, 3, 4, 5, 6], trials=16)
        centers = FamilySpec(kind=FamilyKind.ALPHA_CENTER_TRANSLATES, sweep=powers, alpha="1/2")
        fails, holds = VerdictStatus.FAILS, VerdictStatus.HOLDS
        return [
            instance("modulated-bump-fails", fails, modulated, "L[r=2,s=0]", "W[p=2,q=2,s=1]", "d=1,N=4096,P=64"),
            instance("spread-translates-fails", fails, translates, "M[p=1,q=inf,s=0]", "W[p=1,q=inf]", "d=1,N=16384,P=256"),
            instance("dyadic-shell-sum-fails", fails, shells, "B[p=1,q=1,s=0]", "W[p=1,q=1]", "d=1,N=4096,P=16"),
            instance("rademacher-shell-fails", fails, rademacher, "L[r=4,s=0]", "W[p=4,q=1]", "d=1,N=8192,P=16"),
            instance("alpha-center-fails", fails, centers, "Ma[p=2,q=2,s=-1/2,alpha=1/2]", "W[p=2,q=2]", "d=1,N=8192,P=8"),
            instance("modulated-bump-holds", holds, modulated, "L[r=2,s=0]", "W[p=2,q=2]", "d=1,N=4096,P=64"),
            instance("spread-translates-holds", holds, translates, "M[p=1,q=1,s=0]", "W[p=1,q=1]", "d=1,N=16384,P=256"),
            instance("dyadic-shell-sum-holds", holds, shells, "B[p=2,q=2,s=0]", "W[p=2,q=2]", "d=1,N=4096,P=16"),
            instance("rademacher-shell-holds", holds, rademacher, "L[r=2,s=0]", "W[p=2,q=2]", "d=1,N=8192,P=16"),
            instance("alpha-center-holds", holds, centers, "Ma[p=2,q=2,s=0,alpha=1/2]", "W[p=2,q=2]", "d=1,N=8192,P=8"),
        ]


# Global probe service instance
probe_service = ProbeService()
