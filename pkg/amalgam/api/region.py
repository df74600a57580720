# amalgam/api/region.py
# `amalgam region`: index-plane scans as SVG or CSV

import logging
from pathlib import Path

from amalgam.api.common import emit_text, parse_fraction
from amalgam.core.exceptions import AmalgamException, UsageException, handle_amalgam_exception
from amalgam.services.region_service import region_service

logger = logging.getLogger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("region", parents=parents, help="Scan a theorem over the (1/p, 1/q) window")
    parser.add_argument("--theorem", required=True, help="Catalogue id, tau1, sigma1 or alpha-reading-discrepancy")
    parser.add_argument("--fix", default="", help="Fixed parameters k=v,... (rationals, inf, ties p/q, s=crit+1/8)")
    parser.add_argument("--step", default="1/32", help="Lattice step 1/n")
    parser.add_argument("--out", help="Output path ending in .svg or .csv; stdout when omitted")
    parser.add_argument("--format", choices=["svg", "csv"], help="Output format; inferred from --out by default")
    parser.set_defaults(handler=cmd_region)


def _format(args) -> str:
    if args.format:
        return args.format
    if args.out:
        suffix = Path(args.out).suffix.lower().lstrip(".")
        if suffix not in ("svg", "csv"):
            raise UsageException(f"cannot infer the format of {args.out!r}; use .svg, .csv or --format")
        return suffix
    return "csv"


def cmd_region(args) -> int:
    try:
        output_format = _format(args)
        step = parse_fraction(args.step, "--step")
        params = region_service.parse_fixed_params(args.fix)
        scan = region_service.scan_theorem_region(args.theorem, params, step)
        if output_format == "svg":
            emit_text(region_service.emit_region_svg(scan), args.out)
        else:
            emit_text(region_service.emit_region_csv(scan), args.out)
        if args.out:
            logger.info("✅ wrote %s (%d cells)", args.out, len(scan.cells))
        return 0

    except AmalgamException as e:
        return handle_amalgam_exception(e)
