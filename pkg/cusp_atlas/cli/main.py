#!/usr/bin/env python3
"""
Command-line front end

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 domain error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from cusp_atlas.cli.commands import COMMANDS
from cusp_atlas.core.config import settings
from cusp_atlas.core.errors import CuspAtlasError, ParseError

logger = logging.getLogger("cusp_atlas")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cusp_atlas",
        description="Abelian subgroups of PGL4(R), cusp Lie groups and their normal forms",
    )
    parser.add_argument("--seed", type=int, help=f"PRNG seed (default {settings.SEED})")
    parser.add_argument("--tol", type=float, help=f"relative rank tolerance (default {settings.TAU_RANK:g})")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug")
    parser.add_argument("--version", action="version", version=f"{settings.PROJECT_NAME} {settings.VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def configure_logging(verbosity: int) -> None:
    level = settings.LOG_LEVEL
    if verbosity == 1:
        level = "INFO"
    elif verbosity >= 2:
        level = "DEBUG"
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")


def apply_overrides(args: argparse.Namespace) -> None:
    if args.seed is not None:
        if args.seed < 0:
            raise ParseError(f"--seed must be non-negative, got {args.seed}")
        settings.SEED = args.seed
    if args.tol is not None:
        if not 0.0 < args.tol < 1.0:
            raise ParseError(f"--tol must lie in (0, 1), got {args.tol}")
        settings.TAU_RANK = args.tol


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help / --version
        return int(e.code or 0)

    configure_logging(args.verbose)
    try:
        apply_overrides(args)
        return args.run(args)
    except ValidationError as e:
        logger.error(f"invalid input: {e.errors()[0]['msg']}")
        return ParseError.exit_code
    except CuspAtlasError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
