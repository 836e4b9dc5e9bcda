from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Tuple

from pycwl.numtheory.primes import primorial
from pycwl.settings import DEFAULT_BUDGET, Budget
from pycwl.typings import DomainError, Histogram
from pycwl.windows.residues import phi_histogram


@dataclass(frozen=True)
class XiTable():
    """ξ(M, s) for s = 0..M^2: the mean over residue pairs (u, v) of
    C(Φ_M(u, v), s). """
    M: int
    values: Tuple[Fraction, ...]
    histogram: Tuple[Tuple[int, int], ...]

    def __getitem__(self, s: int) -> Fraction:
        return self.values[s]

    @property
    def support_upper(self) -> int:
        """Largest Φ_M(u, v) over all residue pairs. """
        return max(phi for phi, _ in self.histogram)


@lru_cache(maxsize=32)
def _build_xi_table(M: int, threads: int, budget: Budget) -> XiTable:
    histogram: Histogram = phi_histogram(M, threads, budget)
    pairs = primorial(M)**2
    values = tuple(
        sum((Fraction(count * comb(phi, s), pairs)
             for phi, count in histogram.items()), Fraction(0))
        for s in range(M * M + 1)
    )
    return XiTable(M, values, tuple(histogram.items()))


def xi_table(
    M: int, threads: int = 1, budget: Budget = DEFAULT_BUDGET
) -> XiTable:
    """ξ(M, ·) from the Φ histogram; cached per M. """
    return _build_xi_table(M, threads, budget)


def xi(M: int, s: int, budget: Budget = DEFAULT_BUDGET) -> Fraction:
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")
    if s < 0 or s > M * M:
        raise DomainError(f"s must lie in [0, {M * M}], got {s}")
    return xi_table(M, budget=budget)[s]


def support_upper(M: int, budget: Budget = DEFAULT_BUDGET) -> int:
    """Maximum of Φ_M; the limit law puts no mass above it. """
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")
    return xi_table(M, budget=budget).support_upper


__all__ = ['XiTable', 'xi_table', 'xi', 'support_upper']
