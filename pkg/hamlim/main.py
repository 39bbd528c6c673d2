# hamlim/main.py
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from hamlim import __version__
from hamlim.cli.commands import bounds, demos, evolution, make, norms
from hamlim.cli.common import CommandResult
from hamlim.core.config import get_settings
from hamlim.core.logging import configure_logging
from hamlim.services.serialization import dumps_csv, dumps_json, flatten_scalars, to_jsonable

logger = logging.getLogger(__name__)

TIMESTAMP_FIELDS = ("generated_at", "wall_time_seconds")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def create_parser() -> argparse.ArgumentParser:
    """
    Parser factory for the hamlim command line.
    """
    settings = get_settings()

    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description=(
            "Desk-scale toolkit for the limits of Hamiltonian simulation:\n"
            "norm inequalities, hard instances, star-forest decompositions,\n"
            "query-bound arithmetic and end-to-end experiments."
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    # Command groups
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    make.register(subparsers)
    norms.register(subparsers)
    evolution.register(subparsers)
    demos.register(subparsers)
    bounds.register(subparsers)

    return parser


def render(result: CommandResult, fmt: str, *, no_timestamp: bool = False) -> str:
    drop = TIMESTAMP_FIELDS if no_timestamp else ()
    if fmt == "csv":
        if result.csv_rows is not None:
            return dumps_csv(result.csv_rows, result.csv_columns)
        return dumps_csv([flatten_scalars(to_jsonable(result.payload, drop=drop))])
    return dumps_json(result.payload, drop=drop) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run one command and return its exit code.

    Rules
    -----
    - 0: the command ran and every check it performs passed
    - 1: a check failed, or a numerical routine gave up (RuntimeError)
    - 2: bad usage, invalid input values, or unreadable / unwritable files
    """
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        configure_logging(args.log_level or get_settings().HAMLIM_LOG_LEVEL)
        result = args.handler(args)
        text = render(result, args.fmt, no_timestamp=args.no_timestamp)
    except RuntimeError as exc:
        print(f"{parser.prog} {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (ValueError, OSError) as exc:
        print(f"{parser.prog} {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    sys.stdout.write(text)
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"{parser.prog} {args.command}: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE

    if not result.passed:
        logger.warning("%s: checks failed", args.command)
        return EXIT_FAILED
    return EXIT_OK
