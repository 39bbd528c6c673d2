# hamlim/core/logging.py
from __future__ import annotations

import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str | int = "WARNING") -> logging.Logger:
    """
    Attach a single stderr handler to the package logger.

    stdout is reserved for report output, so nothing here ever writes to it.
    Calling this twice replaces the handler instead of stacking a second one.
    """
    logger = logging.getLogger("hamlim")
    if isinstance(level, str):
        level = level.upper()
    logger.setLevel(level)

    for handler in list(logger.handlers):
        if getattr(handler, "_hamlim_handler", False):
            logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._hamlim_handler = True  # type: ignore[attr-defined]
    logger.addHandler(handler)
    return logger
