# amalgam/services/selftest_service.py
# Acceptance suite behind `amalgam selftest`

import logging
import math
import time
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from amalgam.core.config import settings
from amalgam.core.exceptions import AmalgamException
from amalgam.models.grid import GridFunction, GridSpec
from amalgam.models.indices import ReciprocalIndex
from amalgam.models.probes import FamilySpec
from amalgam.models.selftest import SelftestCheck, SelftestSummary
from amalgam.models.spaces import EmbeddingQuery, FamilyKind, SpaceFamily, SpaceSpec, VerdictStatus
from amalgam.services import lemma_service as lemmas
from amalgam.services import theorem_service as theorems
from amalgam.services.bank_service import bank_service
from amalgam.services.generator_service import generator_service
from amalgam.services.grid_service import grid_service
from amalgam.services.inequality_service import inequality_service
from amalgam.services.norm_service import norm_service
from amalgam.services.oracle_service import oracle_service
from amalgam.services.probe_service import FAILS_GROWTH, probe_service
from amalgam.services.region_service import SIGMA1, TAU1, region_service

logger = logging.getLogger(__name__)

F = SpaceFamily
Outcome = Tuple[bool, str, Dict[str, float]]


class _Check(NamedTuple):
    name: str
    run: Callable[[bool], Outcome]
    quick: bool


def _space(family: SpaceFamily, s: Fraction = Fraction(0), alpha: Optional[Fraction] = None, **exponents: Fraction) -> SpaceSpec:
    return SpaceSpec(family=family, s=s, alpha=alpha, **{name: ReciprocalIndex(u=u) for name, u in exponents.items()})


def _lattice(step: Fraction, interior: bool = False) -> List[Fraction]:
    points = [i * step for i in range(int(2 / step) + 1)]
    if interior:
        return [u for u in points if 0 < u < 1]
    return points


class SelftestService:
    """Service for running the acceptance checks and summarizing them"""

    def __init__(self):
        self._checks = [
            _Check("oracle-audit", self._oracle_audit, True),
            _Check("s-monotonicity", self._monotonicity, True),
            _Check("duality", self._duality, True),
            _Check("specialization", self._specialization, True),
            _Check("partition-of-unity", self._partition, True),
            _Check("reconstruction", self._reconstruction, True),
            _Check("plancherel-band", self._plancherel, True),
            _Check("compact-support-equivalence", self._compact_support, False),
            _Check("bernstein", self._bernstein, True),
            _Check("probe-slopes", self._probe_slopes, True),
            _Check("corroboration", self._corroboration, False),
            _Check("region-boundaries", self._regions, True),
        ]

    @property
    def names(self) -> List[str]:
        return [check.name for check in self._checks]

    def run(self, quick: bool = False, only: Optional[List[str]] = None) -> SelftestSummary:
        """Run the quick subset or every check; failures never raise"""
        results = []
        for check in self._checks:
            if (quick and not check.quick) or (only and check.name not in only):
                continue
            results.append(self._run_one(check, quick))
        failures = [result.name for result in results if not result.passed]
        summary = SelftestSummary(
            mode="quick" if quick else "full",
            passed=not failures,
            total=len(results),
            failures=failures,
            checks=results,
        )
        if failures:
            logger.error("❌ selftest %s: %d of %d checks failed: %s", summary.mode, len(failures), len(results), ", ".join(failures))
        else:
            logger.info("✅ selftest %s: %d checks passed", summary.mode, len(results))
        return summary

    def _run_one(self, check: _Check, quick: bool) -> SelftestCheck:
        started = time.perf_counter()
        try:
            passed, detail, metrics = check.run(quick)
        except (AmalgamException, ValueError, ArithmeticError) as exc:
            passed, detail, metrics = False, f"{type(exc).__name__}: {exc}", {}
        seconds = time.perf_counter() - started
        logger.info("%s %s (%.2fs) %s", "✅" if passed else "❌", check.name, seconds, detail)
        return SelftestCheck(name=check.name, passed=passed, seconds=seconds, detail=detail, metrics=metrics)

    # Oracle

    def _oracle_audit(self, quick: bool) -> Outcome:
        cases = [
            (SpaceSpec.parse("M[p=1,q=1,s=0]"), SpaceSpec.parse("W[p=2,q=2]"), VerdictStatus.HOLDS),
            (SpaceSpec.parse("M[p=2,q=4,s=0]"), SpaceSpec.parse("W[p=2,q=2]"), VerdictStatus.FAILS),
        ]
        cases += [(item.src, item.dst, item.expected) for item in probe_service.corroboration_instances()]
        mismatches = []
        for src, dst, expected in cases:
            verdict = oracle_service.decide(EmbeddingQuery(src=src, dst=dst, d=1))
            if verdict.status != expected:
                mismatches.append(f"{src} -> {dst}: {verdict.status.value}")
        return not mismatches, "; ".join(mismatches) or f"{len(cases)} verdicts match", {"cases": len(cases)}

    def _monotone_pairs(self, u: Fraction, v: Fraction, w: Fraction) -> Iterator[Tuple[SpaceSpec, SpaceSpec]]:
        yield _space(F.SOBOLEV, r=w), _space(F.WIENER, p=u, q=v)
        yield _space(F.WIENER, p=u, q=v), _space(F.SOBOLEV, r=w)
        yield _space(F.LOCAL_HARDY, r=w), _space(F.WIENER, p=u, q=v)
        yield _space(F.MODULATION, p=w, q=w), _space(F.WIENER, p=u, q=v)
        yield _space(F.WIENER, p=u, q=v), _space(F.MODULATION, p=w, q=w)
        yield _space(F.BESOV, p=w, q=v), _space(F.WIENER, p=u, q=v)
        yield _space(F.WIENER, p=u, q=v), _space(F.BESOV, p=w, q=v)
        yield _space(F.BESOV, p=u, q=w), _space(F.WIENER, p=u, q=v)
        yield _space(F.WIENER, p=u, q=v), _space(F.BESOV, p=u, q=w)
        yield _space(F.TRIEBEL, p=u, q=w), _space(F.WIENER, p=u, q=v)
        yield _space(F.WIENER, p=u, q=v), _space(F.TRIEBEL, p=u, q=w)
        yield _space(F.WIENER, p=u, q=v), _space(F.LOCAL_HARDY, r=w)
        yield _space(F.ALPHA_MODULATION, alpha=Fraction(1, 2), p=u, q=v), _space(F.WIENER, p=u, q=v)
        yield _space(F.WIENER, p=u, q=v), _space(F.ALPHA_MODULATION, alpha=Fraction(1, 2), p=u, q=v)

    def _monotonicity(self, quick: bool) -> Outcome:
        """Raising the source weight never turns Holds into Fails"""
        step = Fraction(1, 4) if quick else Fraction(1, 8)
        points = _lattice(step)
        smoothness = [Fraction(k, 4) for k in range(-8, 9)]
        violations, sequences = 0, 0
        for d in ((1,) if quick else (1, 2)):
            for u in points:
                for v in points:
                    for w in (points[::2] if quick else points):
                        for src, dst in self._monotone_pairs(u, v, w):
                            statuses = self._statuses(src, dst, d, smoothness)
                            if statuses is None:
                                continue
                            sequences += 1
                            seen_holds = False
                            for status in statuses:
                                seen_holds = seen_holds or status == VerdictStatus.HOLDS
                                if seen_holds and status == VerdictStatus.FAILS:
                                    violations += 1
                                    break
        return violations == 0, f"{violations} violations over {sequences} s-sweeps", {"violations": violations}

    def _statuses(self, src: SpaceSpec, dst: SpaceSpec, d: int, smoothness: List[Fraction]) -> Optional[List[VerdictStatus]]:
        try:
            return [oracle_service.decide(EmbeddingQuery(src=src.with_s(s), dst=dst, d=d)).status for s in smoothness]
        except AmalgamException:
            return None

    def _duality(self, quick: bool) -> Outcome:
        """Dual queries get the same status on strictly interior indices"""
        points = _lattice(Fraction(1, 4) if quick else Fraction(1, 8), interior=True)
        smoothness = [Fraction(k, 4) for k in range(-8, 9)]
        disagreements, compared = 0, 0
        for u in points:
            for v in points:
                for w in points:
                    pairs = [
                        (_space(F.SOBOLEV, r=w), _space(F.WIENER, p=u, q=v)),
                        (_space(F.LOCAL_HARDY, r=w), _space(F.WIENER, p=u, q=v)),
                        (_space(F.BESOV, p=w, q=v), _space(F.WIENER, p=u, q=v)),
                        (_space(F.MODULATION, p=w, q=w), _space(F.WIENER, p=u, q=v)),
                    ]
                    for src, dst in pairs:
                        for s in smoothness:
                            query = EmbeddingQuery(src=src.with_s(s), dst=dst, d=1)
                            compared += 1
                            forward = oracle_service.decide(query).status
                            backward = oracle_service.decide(oracle_service.dualize_query(query)).status
                            if forward != backward:
                                disagreements += 1
        return disagreements == 0, f"{disagreements} disagreements over {compared} queries", {"disagreements": disagreements}

    def _specialization(self, quick: bool) -> Outcome:
        points = _lattice(Fraction(1, 4) if quick else Fraction(1, 8))
        smoothness = [Fraction(k, 4) for k in range(-8, 9)]
        disagreements = []
        for u in points:
            for v in points:
                # Modulation into Wiener with matching indices and p >= q
                if u <= v:
                    query = EmbeddingQuery(src=_space(F.MODULATION, p=u, q=v), dst=_space(F.WIENER, p=u, q=v), d=1)
                    if oracle_service.decide(query).status != VerdictStatus.HOLDS:
                        disagreements.append(f"M->W at u={u}, v={v}")
                # Besov p0-theorem at p0 = p against the diagonal lemma
                for s in smoothness:
                    query = EmbeddingQuery(src=_space(F.BESOV, s=s, p=u, q=v), dst=_space(F.WIENER, p=u, q=v), d=1)
                    theorem = oracle_service.decide_with(theorems.BESOV_P0_TO_WIENER, query).status
                    lemma = oracle_service.decide_with(lemmas.BESOV_TO_WIENER_DIAGONAL, query).status
                    if theorem != lemma:
                        disagreements.append(f"B->W at u={u}, v={v}, s={s}")
                # F_{p,2} = h_p for 0 < p <= 1
                if u >= 1:
                    disagreements.extend(self._triebel_hardy_disagreements(u, v, smoothness))
        detail = "; ".join(disagreements[:5]) or "specializations agree"
        return not disagreements, detail, {"disagreements": len(disagreements)}

    def _triebel_hardy_disagreements(self, u: Fraction, v: Fraction, smoothness: List[Fraction]) -> List[str]:
        wiener = _space(F.WIENER, p=u, q=v)
        found = []
        for s in smoothness:
            triebel = _space(F.TRIEBEL, s=s, p=u, q=Fraction(1, 2))
            hardy = _space(F.LOCAL_HARDY, s=s, r=u)
            for label, left, right in (
                ("F->W", (triebel, wiener), (hardy, wiener)),
                ("W->F", (wiener, triebel), (wiener, hardy)),
            ):
                expected = oracle_service.decide(EmbeddingQuery(src=left[0], dst=left[1], d=1))
                if expected.status == VerdictStatus.OPEN_IN_PAPER:
                    continue
                actual = oracle_service.decide(EmbeddingQuery(src=right[0], dst=right[1], d=1))
                if (expected.status, expected.boundary) != (actual.status, actual.boundary):
                    found.append(f"{label} at u={u}, v={v}, s={s}")
        return found

    # Frequency and norms

    def _default_grid(self) -> GridSpec:
        return GridSpec(d=1, n=4096, period=Fraction(16))

    def _partition(self, quick: bool) -> Outcome:
        grid = self._default_grid()
        metrics = {
            "uniform": bank_service.partition_deviation(bank_service.build_uniform_bank(grid)),
            "dyadic": bank_service.partition_deviation(bank_service.build_dyadic_bank(grid)),
        }
        passed = metrics["uniform"] < settings.PARTITION_TOL and metrics["dyadic"] < settings.PARTITION_TOL
        for alpha in ([Fraction(1, 2)] if quick else [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]):
            deviation = bank_service.partition_deviation(bank_service.build_alpha_bank(grid, alpha))
            metrics[f"alpha={alpha}"] = deviation
            passed = passed and deviation < settings.ALPHA_PARTITION_TOL
        return passed, ", ".join(f"{key}: {value:.2e}" for key, value in metrics.items()), metrics

    def _corpus(self, grid: GridSpec) -> Dict[str, GridFunction]:
        return {name: generator_service.generate(name, grid) for name in generator_service.names}

    def _reconstruction(self, quick: bool) -> Outcome:
        grid = self._default_grid()
        banks = [bank_service.build_uniform_bank(grid), bank_service.build_dyadic_bank(grid)]
        metrics = {}
        for name, f in self._corpus(grid).items():
            for bank in banks:
                rebuilt = bank_service.reconstruct(bank, f)
                error = grid_service.l2_norm(GridFunction(grid=grid, samples=rebuilt.samples - f.samples))
                metrics[f"{name}/{bank.kind.value}"] = error / grid_service.l2_norm(f)
        worst = max(metrics.values())
        return worst < 1e-8, f"worst relative L2 error {worst:.2e}", metrics

    def _plancherel(self, quick: bool) -> Outcome:
        grid = self._default_grid()
        bank = bank_service.build_uniform_bank(grid)
        lower = math.sqrt(bank_service.bank_lower_constant(bank)) - 1e-8
        space = SpaceSpec.parse("W[p=2,q=2,s=0]")
        metrics = {}
        for name, f in self._corpus(grid).items():
            metrics[name] = norm_service.space_norm(space, f).value / grid_service.l2_norm(f)
        within = all(lower <= ratio <= 1 + 1e-8 for ratio in metrics.values())
        gaussian = grid_service.l2_norm(generator_service.gaussian(grid))
        metrics["gaussian-l2-error"] = abs(gaussian - math.pi ** 0.25)
        passed = within and metrics["gaussian-l2-error"] < 1e-8
        return passed, f"ratios in [{lower:.6f}, 1]: {within}; Gaussian L2 error {metrics['gaussian-l2-error']:.2e}", metrics

    def _compact_support(self, quick: bool) -> Outcome:
        grid = self._default_grid()
        profile = grid_service.profile(0.5, 1.0)
        x = grid_service.coordinates(grid)
        bump = grid_service.evaluate_profile(profile, np.abs(x))
        indices = [(Fraction(1), Fraction(1)), (Fraction(1, 2), Fraction(2)), (Fraction(0), Fraction(1, 2))]
        worst = 1.0
        for frequency in range(10):
            f = GridFunction(grid=grid, samples=bump * np.exp(1j * frequency * x))
            for u, v in indices:
                report = norm_service.compact_support_equivalence(f, u, v)
                worst = max(worst, max(max(ratio, 1 / ratio) for ratio in report.ratios.values()))
        return worst <= settings.STFT_BAND, f"largest pairwise ratio {worst:.3f} against band {settings.STFT_BAND}", {"worst": worst}

    def _bernstein(self, quick: bool) -> Outcome:
        grid = self._default_grid()
        radii = [2.0, 4.0, 8.0, 16.0]
        cases = [(Fraction(1), Fraction(0), 0.02), (Fraction(1), Fraction(1, 2), 0.02)]
        if not quick:
            cases.append((Fraction(2), Fraction(1), 0.10))
        metrics = {}
        passed = True
        for u, v, tolerance in cases:
            report = inequality_service.bernstein_sweep(grid, radii, u, v)
            error = abs(report.fitted_exponent - report.predicted_exponent) / report.predicted_exponent
            metrics[f"p=1/{u},q=1/{v}"] = error
            passed = passed and error <= tolerance
        return passed, ", ".join(f"{key}: {value:.2%}" for key, value in metrics.items()), metrics

    # Probes

    def _slope(self, spec: FamilySpec, space: SpaceSpec, grid: GridSpec) -> float:
        xs, norms = probe_service.family_norms(spec, space, grid)
        return probe_service.fit_growth(xs, norms)[0]

    def _probe_slopes(self, quick: bool) -> Outcome:
        metrics = {}
        fine = GridSpec(d=1, n=4096, period=Fraction(64))
        modulated = FamilySpec(kind=FamilyKind.MODULATED_BUMP, sweep=[1, 2, 4, 8, 16])
        metrics["modulated-bump"] = abs(self._slope(modulated, SpaceSpec.parse("W[p=2,q=2,s=1]"), fine) - 1)
        passed = metrics["modulated-bump"] < 1e-3

        # low-frequency dilations need a long period
        scaled = FamilySpec(kind=FamilyKind.SCALED_BUMP, sweep=["1/16", "1/8", "1/4", "1/2"])
        slope = self._slope(scaled, SpaceSpec.parse("L[r=2,s=0]"), GridSpec(d=1, n=8192, period=Fraction(128)))
        metrics["scaled-bump"] = abs(slope + 0.5) / 0.5
        passed = passed and metrics["scaled-bump"] <= 0.02

        for v in (Fraction(2), Fraction(1)):
            values = probe_service.approx_identity_functional(1, v, list(range(1, 11)))
            increasing = all(b > a for a, b in zip(values, values[1:]))
            metrics[f"approx-identity q=1/{v}"] = values[-1] / values[0]
            passed = passed and increasing and values[-1] >= 2 * values[0]

        if not quick:
            rademacher = FamilySpec(kind=FamilyKind.RADEMACHER_SHELL, sweep=[1, 2, 3, 4, 5, 6], trials=64)
            report = probe_service.run_probe(
                rademacher, SpaceSpec.parse("L[r=4,s=0]"), SpaceSpec.parse("W[p=4,q=1]"), GridSpec.parse("d=1,N=8192,P=16")
            )
            metrics["rademacher-shell"] = abs(report.loglog_slope - 0.5) / 0.5
            passed = passed and metrics["rademacher-shell"] <= 0.10
            for alpha, ks in ((Fraction(1, 4), [4, 8, 16, 32, 64]), (Fraction(1, 2), [2, 4, 8, 16])):
                error = self._alpha_mass_error(alpha, ks)
                metrics[f"alpha-mass alpha={alpha}"] = error
                passed = passed and error <= 0.15
        return passed, ", ".join(f"{key}: {value:.4g}" for key, value in metrics.items()), metrics

    def _alpha_mass_error(self, alpha: Fraction, ks: List[int]) -> float:
        """Relative error of the block-mass growth against alpha d / (1 - alpha)"""
        bank = bank_service.build_alpha_bank(GridSpec.parse("d=1,N=8192,P=8"), alpha)
        xs = [math.sqrt(1 + k * k) for k in ks]
        masses = [bank_service.alpha_block_mass(bank, (k,)) for k in ks]
        predicted = float(alpha / (1 - alpha))
        return abs(probe_service.fit_growth(xs, masses)[0] - predicted) / predicted

    def _corroboration(self, quick: bool) -> Outcome:
        metrics = {}
        failed = []
        for item in probe_service.corroboration_instances():
            report = probe_service.run_probe(item.family, item.src, item.dst, item.grid)
            metrics[item.name] = report.growth if item.expected == VerdictStatus.FAILS else report.holds_spread
            status = report.verdict.status if report.verdict else None
            agrees = status == item.expected and report.verdict_corroborated
            if item.expected == VerdictStatus.FAILS:
                agrees = agrees and report.growth >= FAILS_GROWTH
            if not agrees:
                failed.append(item.name)
        return not failed, ("uncorroborated: " + ", ".join(failed)) if failed else "all instances corroborated", metrics

    # Regions

    def _regions(self, quick: bool) -> Outcome:
        step = Fraction(1, 16) if quick else Fraction(1, 64)
        metrics = {}
        passed = True
        for kind in (TAU1, SIGMA1):
            scan = region_service.scan_theorem_region(kind, {}, step)
            distance = region_service.boundary_hausdorff(scan, region_service.symbolic_boundaries(kind))
            metrics[kind] = distance
            stable = region_service.emit_region_svg(scan) == region_service.emit_region_svg(scan)
            passed = passed and distance <= float(step) and stable
        return passed, f"Hausdorff distances {metrics} at step {step}", metrics


# Global selftest service instance
selftest_service = SelftestService()
