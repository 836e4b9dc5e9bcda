from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Tuple

import numpy as np

from pycwl.correlation.pairs import PairOffsets
from pycwl.empirical.scan import row_blocks
from pycwl.settings import DEFAULT_BUDGET, Budget
from pycwl.typings import BudgetError, DomainError, Real
from pycwl.utils import map_blocks


def _shifted_block(task: Tuple[int, ...]) -> int:
    k, l, n, lo, hi = task
    xs = np.arange(lo, hi, dtype=np.int64) + k
    ys = np.arange(1, n + 1, dtype=np.int64) + l
    return int((np.gcd.outer(xs, ys) == 1).sum())


def _pair_block(task: Tuple[int, ...]) -> int:
    i, j, k, l, n, lo, hi = task
    xs = np.arange(lo, hi, dtype=np.int64)
    ys = np.arange(1, n + 1, dtype=np.int64)
    first = np.gcd.outer(xs + i, ys + j) == 1
    second = np.gcd.outer(xs + k, ys + l) == 1
    return int((first & second).sum())


def _gcd_block(task: Tuple[int, ...]) -> int:
    g, n, lo, hi = task
    xs = np.arange(lo, hi, dtype=np.int64)
    ys = np.arange(1, n + 1, dtype=np.int64)
    return int((np.gcd.outer(xs, ys) == g).sum())


def _scan(
    block: Callable[[Tuple[int, ...]], int],
    params: Tuple[int, ...],
    n: int,
    threads: int,
    budget: Budget,
) -> Fraction:
    """Share of (a, b) in {1..n}^2 counted by `block`, rows split into
    blocks. """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if n * n > budget.scan_cells:
        raise BudgetError(
            f"scan of {n * n} base points, budget is {budget.scan_cells}",
            required=n * n,
            limit=budget.scan_cells,
        )
    tasks = [params + (n, lo, hi)
             for lo, hi in row_blocks(1, n + 1, n, threads)]
    return Fraction(sum(map_blocks(block, tasks, threads)), n * n)


def empirical_density_shifted(
    k: int,
    l: int,
    n: int,
    threads: int = 1,
    budget: Budget = DEFAULT_BUDGET,
) -> Fraction:
    """Share of (i, j) in {1..n}^2 with gcd(i + k, j + l) = 1. """
    if k < 0 or l < 0:
        raise DomainError(f"shifts must be nonnegative, got {k}, {l}")
    return _scan(_shifted_block, (k, l), n, threads, budget)


def empirical_pair_expectation(
    po: PairOffsets,
    n: int,
    threads: int = 1,
    budget: Budget = DEFAULT_BUDGET,
) -> Fraction:
    """Share of (a, b) in {1..n}^2 with both (a+i, b+j) and (a+k, b+l)
    visible. """
    return _scan(_pair_block, (po.i, po.j, po.k, po.l), n, threads, budget)


def gcd_value_frequency(
    k: int,
    n: int,
    threads: int = 1,
    budget: Budget = DEFAULT_BUDGET,
) -> Fraction:
    """Share of (a, b) in {1..n}^2 with gcd(a, b) = k. """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if k > n:
        return Fraction(0)
    return _scan(_gcd_block, (k, ), n, threads, budget)


def residue_joint_frequency(
    primes: Sequence[int],
    residues: Sequence[Tuple[int, int]],
    n: int,
) -> Fraction:
    """Share of (a, b) in {1..n}^2 with a ≡ u_j and b ≡ v_j (mod q_j) for
    every j. """
    if len(set(primes)) != len(primes):
        raise DomainError(f"primes must be distinct, got {list(primes)}")
    if len(primes) != len(residues):
        raise DomainError("one residue pair per prime is required")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    x = np.arange(1, n + 1, dtype=np.int64)
    in_a = np.ones(n, dtype=bool)
    in_b = np.ones(n, dtype=bool)
    for q, (u, v) in zip(primes, residues):
        if not (0 <= u < q and 0 <= v < q):
            raise DomainError(f"residues ({u}, {v}) out of range mod {q}")
        in_a &= x % q == u
        in_b &= x % q == v
    return Fraction(int(in_a.sum()) * int(in_b.sum()), n * n)


def total_variation(p: Mapping[int, Real], q: Mapping[int, Real]) -> float:
    """Half the l1 distance between two pmfs given as value -> mass. """
    keys = set(p) | set(q)
    return 0.5 * math.fsum(
        abs(float(p.get(r, 0)) - float(q.get(r, 0))) for r in keys
    )


__all__ = [
    'empirical_density_shifted',
    'empirical_pair_expectation',
    'gcd_value_frequency',
    'residue_joint_frequency',
    'total_variation',
]
