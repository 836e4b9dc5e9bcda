from __future__ import annotations

import argparse
import os
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Tuple

from pycwl.settings import DEFAULT_EPS

COMMANDS = (
    'pmf',
    'pgf',
    'moments',
    'corr',
    'avg-corr',
    'constants',
    'empirical',
    'shifted-density',
    'invisible',
    'cesaro',
    'verify',
)

SUITES = ('core', 'cesaro', 'waring', 'evaluators', 'constants')

Format = Literal['json', 'csv']


@dataclass(frozen=True)
class RunConfig():
    """One CLI invocation. Fields a command does not use keep defaults. """
    command: str
    M: Optional[int] = None
    n: Optional[int] = None
    N: Optional[int] = None
    eps: float = DEFAULT_EPS
    precision_bits: Optional[int] = None
    threads: int = 1
    format: Format = 'json'
    out: Optional[str] = None
    seed: int = 0
    verbose: bool = False
    limit: Optional[int] = None
    suite: str = 'core'
    z: Optional[float] = None
    k: int = 0
    l: int = 0
    check: Optional[str] = None
    grid: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.eps <= 0:
            raise ValueError(f"--eps must be positive, got {self.eps}")
        if self.threads < 1:
            raise ValueError(f"--threads must be >= 1, got {self.threads}")


def default_threads() -> int:
    """Thread budget from CWL_THREADS, else 1. """
    value = os.environ.get('CWL_THREADS')
    if not value:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got "
                                         f"{text}")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, "
                                         f"got {text}")
    return value


def _grid(text: str) -> List[int]:
    return [_positive(part) for part in text.split(',') if part]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--M", type=_positive, help="Window side length.")
    common.add_argument("--n", type=_positive, help="Scan range {1..n}^2.")
    common.add_argument("--N", type=_positive, help="Frame side for sums.")
    common.add_argument("--eps", type=float, default=DEFAULT_EPS,
                        help=f"Enclosure width (default: {DEFAULT_EPS:g}).")
    common.add_argument("--precision-bits", type=_positive,
                        dest="precision_bits",
                        help="Starting working precision in bits.")
    common.add_argument("--threads", type=_positive,
                        help="Worker processes (default: $CWL_THREADS or 1).")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="Write to this path instead of stdout.")
    common.add_argument("--seed", type=int, default=0,
                        help="Seed for sampled scans.")
    common.add_argument("--verbose", action="store_true",
                        help="Log at DEBUG level.")

    parser = argparse.ArgumentParser(
        prog="cwl",
        description="Certified limit law of coprime pairs in M x M windows "
        "of the lattice.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("pmf", parents=[common],
                        help="Limit pmf of Z*_M with certified entries.")
    pgf = commands.add_parser("pgf", parents=[common],
                              help="Probability generating function.")
    pgf.add_argument("--z", type=float, required=True)
    commands.add_parser("moments", parents=[common],
                        help="Mean, factorial moments, variance ratio.")
    commands.add_parser("corr", parents=[common],
                        help="Correlation grid over cell offsets.")
    commands.add_parser("avg-corr", parents=[common],
                        help="Average correlation over an N x N frame.")
    commands.add_parser("constants", parents=[common],
                        help="1/zeta(2), F and 1/(zeta(2) F).")
    empirical = commands.add_parser(
        "empirical", parents=[common],
        help="Empirical pmf, or a convergence table with --check.")
    empirical.add_argument("--check", help="Registered convergence check.")
    empirical.add_argument("--grid", type=_grid, default=[],
                           help="Comma-separated n values for --check.")
    shifted = commands.add_parser("shifted-density", parents=[common],
                                  help="Density of gcd(i+k, j+l) = 1.")
    shifted.add_argument("--k", type=_nonnegative, default=0)
    shifted.add_argument("--l", type=_nonnegative, default=0)
    commands.add_parser("invisible", parents=[common],
                        help="A fully invisible window by CRT.")
    cesaro = commands.add_parser("cesaro", parents=[common],
                                 help="Cesaro identity against direct sums on "
                                 "every box A <= B <= limit.")
    cesaro.add_argument("--limit", type=_positive, default=50)
    verify = commands.add_parser("verify", parents=[common],
                                 help="Run a verification suite.")
    verify.add_argument("--suite", choices=SUITES, default="core")
    verify.add_argument("--limit", type=_positive)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """RunConfig from command-line arguments; argparse exits with status 2
    on usage errors. """
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return RunConfig(
            command=args.command,
            M=args.M,
            n=args.n,
            N=args.N,
            eps=args.eps,
            precision_bits=args.precision_bits,
            threads=args.threads or default_threads(),
            format=args.format,
            out=args.out,
            seed=args.seed,
            verbose=args.verbose,
            limit=getattr(args, 'limit', None),
            suite=getattr(args, 'suite', 'core'),
            z=getattr(args, 'z', None),
            k=getattr(args, 'k', 0),
            l=getattr(args, 'l', 0),
            check=getattr(args, 'check', None),
            grid=tuple(getattr(args, 'grid', ())),
        )
    except ValueError as e:
        parser.error(str(e))
        raise


__all__ = ['RunConfig', 'COMMANDS', 'SUITES', 'parse_args', 'build_parser']
