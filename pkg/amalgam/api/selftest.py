# amalgam/api/selftest.py
# `amalgam selftest`: acceptance suite

from amalgam.api.common import emit_model
from amalgam.core.exceptions import AmalgamException, handle_amalgam_exception
from amalgam.services.selftest_service import selftest_service


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("selftest", parents=parents, help="Run the acceptance checks")
    parser.add_argument("--quick", action="store_true", help="Fast subset on reduced lattices")
    parser.add_argument("--only", action="append", choices=selftest_service.names, help="Run only this check (repeatable)")
    parser.add_argument("--out", help="Write the JSON summary here instead of stdout")
    parser.set_defaults(handler=cmd_selftest)


def cmd_selftest(args) -> int:
    try:
        summary = selftest_service.run(quick=args.quick, only=args.only)
        emit_model(summary, args.out)
        return 0 if summary.passed else 1

    except AmalgamException as e:
        return handle_amalgam_exception(e)
