from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, Iterator, Tuple

import numpy as np

from pycwl.numtheory.primes import (
    mobius_table, prime_factors, squarefree_divisors
)
from pycwl.typings import Cell, DomainError


@dataclass(frozen=True)
class WindowSpec():
    """The window {a+1..a+M} x {b+1..b+M} with base point (a, b). """
    M: int
    a: int = 0
    b: int = 0

    def __post_init__(self):
        if self.M < 1:
            raise DomainError(f"window side must be >= 1, got {self.M}")
        if self.a < 0 or self.b < 0:
            raise DomainError(
                f"base point must be nonnegative, got ({self.a}, {self.b})"
            )

    def cells(self) -> Iterator[Cell]:
        """Cells (k, l) of the frame, row-major. """
        for k in range(1, self.M + 1):
            for l in range(1, self.M + 1):
                yield k, l


def visible(a: int, b: int) -> int:
    """1 if (a, b) is visible from the origin, else 0. """
    if a < 1 or b < 1:
        raise DomainError(f"visible takes positive coordinates, got {a}, {b}")
    return 1 if gcd(a, b) == 1 else 0


def z_count_direct(w: WindowSpec) -> int:
    """Number of coprime pairs in the window, cell by cell. """
    return sum(visible(w.a + k, w.b + l) for k, l in w.cells())


def _multiples(x: int, M: int, d: int) -> int:
    """Multiples of d in {x+1..x+M}. """
    return (M + x % d) // d


# largest max(a, b) + M served from a Möbius table
MOBIUS_TABLE_LIMIT = 1 << 20


@lru_cache(maxsize=8)
def _squarefree_up_to(limit: int) -> Tuple[np.ndarray, np.ndarray]:
    """Square-free d <= limit and mobius(d), as parallel int64 arrays. """
    mu = np.asarray(mobius_table(limit), dtype=np.int64)
    d = np.flatnonzero(mu).astype(np.int64)
    return d, mu[d]


def _z_count_truncated(w: WindowSpec, bound: int) -> int:
    d, mu = _squarefree_up_to(max(64, 1 << (bound - 1).bit_length()))
    k = int(np.searchsorted(d, bound, side='right'))
    d, mu = d[:k], mu[:k]
    rows = (w.M + w.a % d) // d
    cols = (w.M + w.b % d) // d
    return int(np.dot(mu, rows * cols))


def _z_count_gcd_divisors(w: WindowSpec) -> int:
    # a term is nonzero only if d divides some gcd(a+k, b+l)
    divisors: Dict[int, int] = {1: 1}
    for g in {gcd(w.a + k, w.b + l) for k, l in w.cells()}:
        if g > 1:
            divisors.update(squarefree_divisors(tuple(prime_factors(g))))
    return sum(
        mu * _multiples(w.a, w.M, d) * _multiples(w.b, w.M, d)
        for d, mu in divisors.items()
    )


def z_count_mobius(w: WindowSpec, limit: int = MOBIUS_TABLE_LIMIT) -> int:
    """Number of coprime pairs in the window by Möbius inclusion-exclusion.

    Σ_{d <= max(a,b)+M} μ(d) ⌊(M + r_d(a))/d⌋ ⌊(M + r_d(b))/d⌋, summed over
    a Möbius table. Base points with max(a, b) + M above `limit` (CRT-sized
    windows) restrict d to the square-free divisors of the cell gcds.
    """
    bound = max(w.a, w.b) + w.M
    if bound > limit:
        return _z_count_gcd_divisors(w)
    return _z_count_truncated(w, bound)


__all__ = ['WindowSpec', 'visible', 'z_count_direct', 'z_count_mobius']
