# amalgam/main.py
# Command-line application entry point

import argparse
import logging
import sys
from typing import List, Optional

from amalgam import __version__
from amalgam.api import norm, oracle, probe, region, selftest
from amalgam.core.config import settings
from amalgam.core.exceptions import AmalgamException, EX_SOFTWARE, UsageException, handle_amalgam_exception
from amalgam.core.logging_config import setup_logging

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as UsageException"""

    def error(self, message: str):
        raise UsageException(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper,
                        help="Log level on stderr (default: AMALGAM_LOG_LEVEL)")

    parser = _Parser(
        prog="amalgam",
        description="Exact embedding oracle and periodic-grid numerics for Wiener amalgam spaces",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for module in (oracle, region, norm, probe, selftest):
        module.register(subparsers, [common])
    return parser


def run_cli(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run one subcommand and return its exit code"""
    try:
        args = build_parser().parse_args(argv)
    except AmalgamException as e:
        return handle_amalgam_exception(e)
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    setup_logging(args.log_level)
    try:
        settings.validate()
        return args.handler(args)
    except AmalgamException as e:
        return handle_amalgam_exception(e)
    except Exception as e:
        logger.exception("❌ unexpected failure in %s", args.command)
        return handle_amalgam_exception(AmalgamException(f"internal error: {e}", EX_SOFTWARE))


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
