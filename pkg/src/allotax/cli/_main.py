# Copyright (c) 2025, Tom Ouellette
# Licensed under the MIT License

import argparse
import logging
import sys

from pathlib import Path
from typing import Sequence

from .. import __version__
from .._errors import AllotaxError, InvalidArgumentError
from ._config import RunConfig
from ._tree import register, runner

logger = logging.getLogger("allotax")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageErrorParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser(formatter_class=argparse.HelpFormatter) -> argparse.ArgumentParser:
    """Build the root parser with global flags and one subparser per command."""
    parser = UsageErrorParser(
        prog="allotax",
        description="Compare corpora by rank-turbulence divergence.",
        formatter_class=formatter_class,
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="JSON config file")
    parser.add_argument("--out-dir", dest="out_dir", help="Directory for relative output paths")
    parser.add_argument("--threads", type=int, help="Worker processes")
    parser.add_argument("--seed", type=int, help="Seed of every random draw")
    parser.add_argument(
        "--log-level",
        dest="log_level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging threshold (default: WARNING)",
    )
    parser.add_argument(
        "--progress",
        action="store_true",
        default=None,
        help="Show progress bars",
    )

    subparsers = parser.add_subparsers(
        dest="command", metavar="<command>", help="Available commands", required=True
    )
    register(subparsers, formatter_class=formatter_class)
    return parser


def configure_logging(level: str) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(level)
    logger.propagate = False


def main(argv: Sequence[str] | None = None) -> int:
    """Parse `argv`, run the selected subcommand and return an exit status.

    Returns
    -------
    int
        0 on success, 1 on a usage error (printed with usage text), 2 when
        a command fails on its inputs.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        config = RunConfig.resolve(
            args.config,
            out_dir=args.out_dir,
            threads=args.threads,
            seed=args.seed,
            log_level=args.log_level,
            progress=args.progress,
        )
    except InvalidArgumentError as e:
        parser.print_usage(sys.stderr)
        print(f"allotax: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except AllotaxError as e:
        print(f"allotax: error: {e}", file=sys.stderr)
        return EXIT_DATA

    try:
        configure_logging(config.log_level)
        config.check_paths()
        runner(args, config)
    except AllotaxError as e:
        print(f"allotax {args.command}: error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"allotax {args.command}: error: {e}", file=sys.stderr)
        return EXIT_DATA

    return EXIT_OK


def run() -> None:
    sys.exit(main())
