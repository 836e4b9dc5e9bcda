"""Finite-n scans over base points (a, b) in {1..n}^2.

Exhaustive scans cut the rows a into blocks. A block evaluates each gcd
of its strip once and sums windows with cumulative sums along both axes,
so a cell is shared by every window that covers it. Counts are exact
integers and the merge is a key-wise sum, so the result does not depend on
the blocking or the number of workers.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Dict, List, Optional, Tuple

import numpy as np

from pycwl.numtheory.primes import primorial
from pycwl.settings import DEFAULT_BUDGET, Budget
from pycwl.typings import BudgetError, DomainError, Histogram
from pycwl.utils import map_blocks, merge_histograms, partition_range
from pycwl.windows.residues import ResiduePair

logger = logging.getLogger(__name__)

BLOCK_CELLS = 4_000_000
"""Target number of gcd evaluations per block."""


@dataclass(frozen=True)
class ScanConfig():
    n: int
    parallel_blocks: int = 1
    """Worker processes; 1 scans inline."""
    seed: int = 0
    """Seed for sampled scans."""

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if self.parallel_blocks < 1:
            raise DomainError(
                f"parallel_blocks must be >= 1, got {self.parallel_blocks}"
            )


@dataclass(frozen=True)
class EmpiricalPmf():
    """Counts of Z_M = r over the scanned base points. """
    M: int
    n: int
    counts: Histogram
    total: int
    sampled: bool = False
    class_frequency: Optional[Fraction] = None
    """Share of {1..n}^2 in the scanned residue class, when conditioned."""

    @property
    def frequencies(self) -> Dict[int, Fraction]:
        if not self.total:
            return {}
        return {r: Fraction(c, self.total) for r, c in self.counts.items()}

    def standard_error(self, r: int) -> float:
        """Binomial standard error of the frequency of r; 0 for exhaustive
        scans. """
        if not self.sampled or not self.total:
            return 0.0
        p = self.counts.get(r, 0) / self.total
        return sqrt(p * (1 - p) / self.total)


def row_blocks(start: int, stop: int, width: int,
               parallel_blocks: int) -> List[Tuple[int, int]]:
    rows = stop - start
    blocks = max(parallel_blocks, (rows * width) // BLOCK_CELLS + 1)
    return partition_range(start, stop, blocks)


def _window_block(task: Tuple[int, int, int, int]) -> Histogram:
    M, n, lo, hi = task
    xs = np.arange(lo + 1, hi + M, dtype=np.int64)
    ys = np.arange(2, n + M + 1, dtype=np.int64)
    visible = (np.gcd.outer(xs, ys) == 1).astype(np.int32)
    rows = np.vstack([np.zeros((1, len(ys)), dtype=np.int32),
                      np.cumsum(visible, axis=0, dtype=np.int32)])
    strips = rows[M:] - rows[:-M]
    cols = np.hstack([np.zeros((hi - lo, 1), dtype=np.int32),
                      np.cumsum(strips, axis=1, dtype=np.int32)])
    z = cols[:, M:M + n] - cols[:, :n]
    counts = np.bincount(z.ravel(), minlength=M * M + 1)
    return {r: int(c) for r, c in enumerate(counts) if c}


def _sampled_counts(M: int, n: int, samples: int, seed: int) -> Histogram:
    rng = np.random.default_rng(seed)
    a = rng.integers(1, n + 1, size=samples, dtype=np.int64)
    b = rng.integers(1, n + 1, size=samples, dtype=np.int64)
    z = np.zeros(samples, dtype=np.int64)
    for k in range(1, M + 1):
        for l in range(1, M + 1):
            z += np.gcd(a + k, b + l) == 1
    counts = np.bincount(z, minlength=M * M + 1)
    return {r: int(c) for r, c in enumerate(counts) if c}


def empirical_pmf(
    M: int, cfg: ScanConfig, budget: Budget = DEFAULT_BUDGET
) -> EmpiricalPmf:
    """Distribution of Z_M(a, b) over (a, b) in {1..n}^2.

    Exhaustive up to `budget.scan_cells` base points, sampled with
    `cfg.seed` beyond.
    """
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")
    n = cfg.n
    if n * n > budget.scan_cells:
        logger.debug("Z_%d on n=%d: sampling %d base points", M, n,
                     budget.scan_samples)
        counts = _sampled_counts(M, n, budget.scan_samples, cfg.seed)
        return EmpiricalPmf(M, n, counts, budget.scan_samples, sampled=True)
    tasks = [(M, n, lo, hi)
             for lo, hi in row_blocks(1, n + 1, n + M, cfg.parallel_blocks)]
    logger.debug("Z_%d on n=%d: %d blocks", M, n, len(tasks))
    counts = merge_histograms(
        map_blocks(_window_block, tasks, cfg.parallel_blocks)
    )
    return EmpiricalPmf(M, n, counts, n * n)


def residue_class(u: int, P: int, n: int) -> np.ndarray:
    """The x in {1..n} with x ≡ u (mod P). """
    first = u if u >= 1 else P
    return np.arange(first, n + 1, P, dtype=np.int64)


def conditional_pmf(
    M: int,
    r: ResiduePair,
    cfg: ScanConfig,
    budget: Budget = DEFAULT_BUDGET,
) -> EmpiricalPmf:
    """Distribution of Z_M over the base points with R_M(a, b) = (u, v).

    An empty class gives an empty table with total 0.
    """
    if r.M != M:
        raise DomainError(f"residue pair is for M = {r.M}, not {M}")
    P = primorial(M)
    a = residue_class(r.u, P, cfg.n)
    b = residue_class(r.v, P, cfg.n)
    if len(a) * len(b) > budget.scan_cells:
        raise BudgetError(
            f"conditional scan of {len(a) * len(b)} base points",
            required=len(a) * len(b),
            limit=budget.scan_cells,
        )
    frequency = Fraction(len(a) * len(b), cfg.n * cfg.n)
    if not len(a) or not len(b):
        return EmpiricalPmf(M, cfg.n, {}, 0, class_frequency=frequency)
    counts = np.zeros(M * M + 1, dtype=np.int64)
    step = max(1, BLOCK_CELLS // len(b))
    for start in range(0, len(a), step):
        rows = a[start:start + step]
        z = np.zeros((len(rows), len(b)), dtype=np.int64)
        for k in range(1, M + 1):
            for l in range(1, M + 1):
                z += np.gcd.outer(rows + k, b + l) == 1
        counts += np.bincount(z.ravel(), minlength=M * M + 1)
    return EmpiricalPmf(
        M,
        cfg.n,
        {s: int(c) for s, c in enumerate(counts) if c},
        len(a) * len(b),
        class_frequency=frequency,
    )


__all__ = [
    'ScanConfig',
    'EmpiricalPmf',
    'empirical_pmf',
    'conditional_pmf',
    'residue_class',
    'row_blocks',
]
