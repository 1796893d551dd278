"""Command-line entry point for MultiDilworth."""

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

from src.commands import bounds, dot, find, gen, multi, profile, verify
from src.errors import DilworthError, UsageError

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# Load environment variables
load_dotenv()

# Configure logging
logger = logging.getLogger(__name__)


class CliParser(argparse.ArgumentParser):
    """Argument parser that raises UsageError instead of exiting with status 2."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def configure_logging() -> None:
    """
    Configure logging from the environment.

    MULTIDILWORTH_LOG_LEVEL picks the level (WARNING by default);
    MULTIDILWORTH_LOG_FILE adds a file handler. Diagnostics go to standard
    error so that data on standard output stays clean.

    Raises:
        ValueError: If the log level is not a standard level name
    """
    level = os.getenv("MULTIDILWORTH_LOG_LEVEL", "WARNING").upper()
    if level not in LOG_LEVELS:
        raise ValueError(f"MULTIDILWORTH_LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}")

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    log_file = os.getenv("MULTIDILWORTH_LOG_FILE")
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)


def build_parser() -> CliParser:
    parser = CliParser(
        prog="multidilworth",
        description="Extract chains of sets and totally incomparable families from partial orders",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    # one module per subcommand
    for command in (find, multi, gen, verify, bounds, dot, profile):
        command.register(subparsers)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    configure_logging()

    try:
        args = build_parser().parse_args(argv)
        return args.handler(args)
    except DilworthError as exc:
        logger.debug(f"{type(exc).__name__}: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
