"""Command-line entry point: ``rimc <subcommand> [flags]``"""

import argparse
import logging
import sys

from rimc_calibration.commands import COMMANDS
from rimc_calibration.config import LOG_LEVEL
from rimc_calibration.exceptions import (
    DatasetError,
    ModelFormatError,
    NumericError,
    RimcError,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    """argparse reports usage errors with exit code 1"""

    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rimc", description="RRAM drift simulation and adapter calibration")
    parser.add_argument(
        "--log-level",
        default=LOG_LEVEL,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging verbosity (default from RIMC_LOG_LEVEL)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the process exit code"""
    if isinstance(error, NumericError):
        return EXIT_NUMERIC
    if isinstance(error, (OSError, ModelFormatError, DatasetError)):
        return EXIT_IO
    return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, configure logging and dispatch

    Args:
        argv (list[str] | None): arguments without the program name

    Returns:
        int: exit code (0 success, 1 usage, 2 I/O, 3 numeric failure)
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.handler(args)
    except (RimcError, OSError, ValueError) as e:
        logging.error(f"rimc {args.command}: {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
