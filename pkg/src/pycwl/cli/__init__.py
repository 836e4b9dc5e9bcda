"""`cwl` command-line front end.

Exit codes: 0 success, 1 failed check, 2 usage or domain error, 3 resource
budget exceeded.
"""
from __future__ import annotations

import logging
import sys
from typing import Optional, Sequence

from pycwl.cli.commands import Output, handler_of
from pycwl.cli.config import RunConfig, parse_args
from pycwl.cli.serialize import dumps_csv, dumps_json, write_text
from pycwl.typings import BudgetError, CheckFailure, DomainError

logger = logging.getLogger('pycwl')

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def render(output: Output, cfg: RunConfig) -> str:
    if cfg.format == 'csv':
        return dumps_csv(output.columns, output.rows)
    return dumps_json(output.payload)


def run(cfg: RunConfig) -> int:
    """Run one parsed command; results go to `cfg.out` or stdout. """
    logger.info("%s: start", cfg.command)
    try:
        output = handler_of(cfg.command)(cfg)
    except CheckFailure as e:
        logger.error("check failed: %s", e)
        return EXIT_CHECK
    except DomainError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except BudgetError as e:
        if e.achieved_width is not None:
            logger.error("%s (achieved width %.3g)", e, e.achieved_width)
        else:
            logger.error("%s", e)
        return EXIT_BUDGET
    except RuntimeError as e:
        logger.error("consistency check failed: %s", e)
        return EXIT_CHECK
    write_text(render(output, cfg), cfg.out)
    if output.failure is not None:
        logger.error("check failed: %s", output.failure)
        return EXIT_CHECK
    logger.info("%s: done", cfg.command)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    _configure_logging(cfg.verbose)
    return run(cfg)


__all__ = [
    'main',
    'run',
    'render',
    'RunConfig',
    'parse_args',
    'EXIT_OK',
    'EXIT_CHECK',
    'EXIT_USAGE',
    'EXIT_BUDGET',
]
