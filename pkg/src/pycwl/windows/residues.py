"""Residue classes of the base point modulo the primorial, and the split of
the window frame they induce.

Cells where some prime p < M divides both coordinates can never be visible;
these form the B-set. The rest form the A-set, of size Φ_M(u, v).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Tuple

import numpy as np

from pycwl.numtheory.primes import primes_below, primorial, squarefree_divisors
from pycwl.settings import DEFAULT_BUDGET, Budget
from pycwl.typings import BudgetError, Cell, DomainError, Histogram
from pycwl.utils import map_blocks, merge_histograms, partition_range
from pycwl.windows.window import WindowSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResiduePair():
    """(a mod P_M, b mod P_M). """
    u: int
    v: int
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise DomainError(f"M must be >= 1, got {self.M}")
        P = primorial(self.M)
        if not (0 <= self.u < P and 0 <= self.v < P):
            raise DomainError(
                f"residues ({self.u}, {self.v}) outside [0, {P}) for "
                f"M = {self.M}"
            )


@dataclass(frozen=True)
class SplitSets():
    a_set: FrozenSet[Cell]
    """Cells not hit by any prime p < M."""
    b_set: FrozenSet[Cell]
    """Cells where some prime p < M divides both coordinates."""


def residue_pair(w: WindowSpec) -> ResiduePair:
    P = primorial(w.M)
    return ResiduePair(w.a % P, w.b % P, w.M)


def split_sets(r: ResiduePair) -> SplitSets:
    primes = primes_below(r.M)
    cells = WindowSpec(r.M).cells()
    a_set, b_set = set(), set()
    for k, l in cells:
        if any((r.u + k) % p == 0 and (r.v + l) % p == 0 for p in primes):
            b_set.add((k, l))
        else:
            a_set.add((k, l))
    return SplitSets(frozenset(a_set), frozenset(b_set))


def phi(r: ResiduePair) -> int:
    """Φ_M(u, v) = Σ_{d|P_M} μ(d) ⌊(M + r_d(u))/d⌋ ⌊(M + r_d(v))/d⌋. """
    M = r.M
    return sum(
        mu * ((M + r.u % d) // d) * ((M + r.v % d) // d)
        for d, mu in squarefree_divisors(primes_below(M))
    )


def phi_bound(M: int) -> int:
    """The (non-sharp) upper bound M^2 - ⌊(M-1)/2⌋^2 on Φ_M. """
    return M * M - ((M - 1) // 2)**2


def _floor_factors(M: int, P: int) -> List[Tuple[int, np.ndarray]]:
    residues = np.arange(P, dtype=np.int64)
    return [(mu, (M + residues % d) // d)
            for d, mu in squarefree_divisors(primes_below(M))]


def _phi_block(task: Tuple[int, int, int]) -> Histogram:
    M, lo, hi = task
    factors = _floor_factors(M, primorial(M))
    block = np.zeros((hi - lo, len(factors[0][1])), dtype=np.int64)
    for mu, f in factors:
        block += mu * np.outer(f[lo:hi], f)
    keys, counts = np.unique(block, return_counts=True)
    return {int(k): int(c) for k, c in zip(keys, counts)}


def phi_histogram(
    M: int, threads: int = 1, budget: Budget = DEFAULT_BUDGET
) -> Histogram:
    """Counts of Φ_M over all P_M^2 residue pairs.

    Rows u are split into blocks, one task per block; the merge does not
    depend on the split.

    Raises:
        BudgetError: if P_M^2 exceeds `budget.phi_pairs`.
    """
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")
    P = primorial(M)
    if P * P > budget.phi_pairs:
        raise BudgetError(
            f"phi_histogram({M}) needs {P * P} residue pairs, "
            f"budget is {budget.phi_pairs}",
            required=P * P,
            limit=budget.phi_pairs,
        )
    blocks = max(threads, (P * P) // 1_000_000 + 1)
    tasks = [(M, lo, hi) for lo, hi in partition_range(0, P, blocks)]
    logger.debug("phi_histogram(%d): %d blocks over %d rows", M, len(tasks), P)
    return merge_histograms(map_blocks(_phi_block, tasks, threads))


__all__ = [
    'ResiduePair',
    'SplitSets',
    'residue_pair',
    'split_sets',
    'phi',
    'phi_bound',
    'phi_histogram',
]
