# amalgam/core/logging_config.py
# Logger setup shared by the CLI and services

import logging
import sys

from amalgam.core.config import settings

_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def setup_logging(level: str = None) -> None:
    """Configure the root logger on stderr; stdout stays machine-readable"""
    level_name = (level or settings.LOG_LEVEL).upper()
    if settings.DEBUG:
        level_name = "DEBUG"
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    logging.basicConfig(level=getattr(logging, level_name, logging.WARNING), format=_FORMAT, stream=sys.stderr)
