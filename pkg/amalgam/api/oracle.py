# amalgam/api/oracle.py
# `amalgam oracle`: exact embedding verdicts

import json
import logging

from amalgam.api.common import emit_model, emit_text, parse_space
from amalgam.core.exceptions import AmalgamException, UsageException, handle_amalgam_exception
from amalgam.models.spaces import EmbeddingQuery, OracleOptions, Thm111Reading, VerdictRecord, VerdictStatus
from amalgam.services.oracle_service import oracle_service

logger = logging.getLogger(__name__)

READINGS = {
    "as-written": Thm111Reading.AS_WRITTEN_TAU,
    "tau1": Thm111Reading.ALTERNATE_TAU1,
}

EXIT_CODES = {
    VerdictStatus.HOLDS: 0,
    VerdictStatus.FAILS: 1,
    VerdictStatus.OUTSIDE_HYPOTHESIS: 2,
    VerdictStatus.OPEN_IN_PAPER: 2,
}


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("oracle", parents=parents, help="Decide an embedding src -> dst exactly")
    parser.add_argument("--src", help="Source space, e.g. 'M[p=1,q=1,s=0]'")
    parser.add_argument("--dst", help="Target space, e.g. 'W[p=2,q=2]'")
    parser.add_argument("--d", type=int, default=1, help="Ambient dimension")
    parser.add_argument("--thm111-reading", choices=sorted(READINGS), default="as-written",
                        help="Threshold reading of the strict alpha-modulation clause")
    parser.add_argument("--remark-sufficiency", action="store_true",
                        help="Refine the open regions with the remarks' sufficient conditions")
    parser.add_argument("--theorem", help="Force a catalogue entry instead of dispatching on the family pair")
    parser.add_argument("--list", action="store_true", help="Print the theorem catalogue and exit")
    parser.set_defaults(handler=cmd_oracle)


def cmd_oracle(args) -> int:
    """Print the verdict record; the exit code encodes the status"""
    try:
        if args.list:
            catalogue = [entry.model_dump(mode="json") for entry in oracle_service.list_theorems()]
            emit_text(json.dumps(catalogue, indent=2))
            return 0
        if not args.src or not args.dst:
            raise UsageException("oracle needs --src and --dst (or --list)")
        if args.d < 1:
            raise UsageException(f"--d must be positive, got {args.d}")

        query = EmbeddingQuery(
            src=parse_space(args.src),
            dst=parse_space(args.dst),
            d=args.d,
            options=OracleOptions(
                thm111_reading=READINGS[args.thm111_reading],
                use_remark_sufficiency=args.remark_sufficiency,
            ),
        )
        if args.theorem:
            verdict = oracle_service.decide_with(args.theorem, query)
        else:
            verdict = oracle_service.decide(query)
        emit_model(VerdictRecord.from_pair(query, verdict))
        logger.info("✅ %s -> %s: %s by %s %s", query.src, query.dst, verdict.status.value, verdict.theorem_id, verdict.clause or "")
        return EXIT_CODES[verdict.status]

    except AmalgamException as e:
        return handle_amalgam_exception(e)
