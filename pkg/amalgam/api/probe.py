# amalgam/api/probe.py
# `amalgam probe`: ratio growth along extremal families

import logging

import pandas as pd

from amalgam.api.common import emit_model, parse_fraction, parse_fraction_list, parse_grid, parse_space
from amalgam.core.config import settings
from amalgam.core.exceptions import AmalgamException, UsageException, handle_amalgam_exception
from amalgam.models.probes import FamilySpec, ProbeReport, SweepAxis
from amalgam.models.spaces import FamilyKind
from amalgam.services.probe_service import probe_service

logger = logging.getLogger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("probe", parents=parents, help="Fit norm-ratio growth along a family")
    parser.add_argument("--family", required=True, choices=[kind.value for kind in FamilyKind], help="Family kind")
    parser.add_argument("--src", required=True, help="Source space")
    parser.add_argument("--dst", required=True, help="Target space")
    parser.add_argument("--sweep", required=True, help="Comma-separated sweep values, strictly increasing")
    parser.add_argument("--trials", type=int, default=settings.PROBE_TRIALS, help="Rademacher trials")
    parser.add_argument("--seed", type=int, default=settings.PROBE_SEED, help="RNG key")
    parser.add_argument("--theta", default="0", help="Coefficient decay exponent")
    parser.add_argument("--spread", help="Translation distance of translate families")
    parser.add_argument("--count", type=int, help="Number of translates for spread sweeps")
    parser.add_argument("--axis", choices=[axis.value for axis in SweepAxis], default=SweepAxis.COUNT.value,
                        help="What a SpreadTranslates sweep varies")
    parser.add_argument("--alpha", help="Covering parameter of the alpha families")
    parser.add_argument("--grid", help="Grid, e.g. d=1,N=4096,P=16")
    parser.add_argument("--csv", help="Also write the per-member table here")
    parser.set_defaults(handler=cmd_probe)


def build_family(args) -> FamilySpec:
    try:
        return FamilySpec(
            kind=FamilyKind(args.family),
            sweep=parse_fraction_list(args.sweep, "--sweep"),
            theta=parse_fraction(args.theta, "--theta"),
            trials=args.trials,
            seed=args.seed,
            spread=parse_fraction(args.spread, "--spread") if args.spread else None,
            count=args.count,
            axis=SweepAxis(args.axis),
            alpha=parse_fraction(args.alpha, "--alpha") if args.alpha else None,
        )
    except ValueError as exc:
        raise UsageException(f"invalid family: {exc}") from exc


def report_frame(report: ProbeReport) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "parameter": report.sweep,
            "src_norm": report.src_norms,
            "dst_norm": report.dst_norms,
            "ratio": report.ratios,
        }
    )


def cmd_probe(args) -> int:
    try:
        family = build_family(args)
        report = probe_service.run_probe(family, parse_space(args.src), parse_space(args.dst), parse_grid(args.grid))
        emit_model(report)
        if args.csv:
            report_frame(report).to_csv(args.csv, index=False, lineterminator="\n")
            logger.info("✅ wrote %s", args.csv)
        return 0

    except AmalgamException as e:
        return handle_amalgam_exception(e)
    except OSError:
        return handle_amalgam_exception(UsageException(f"cannot write {args.csv}"))
