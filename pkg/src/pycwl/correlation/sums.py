"""Second-order statistics of Z*_M.

A_N = Σ Υ(gcd(|i-k|, |j-l|)) over all pairs of cells of an N x N frame
depends on the cells only through the offsets (c, d) = (|i-k|, |j-l|); an
offset c occurs w(0) = N times for c = 0 and w(c) = 2(N - c) times
otherwise. So A_N = Σ_{c,d<N} w(c) w(d) Υ(gcd(c, d)).
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, Union

import numpy as np

from pycwl.correlation.pairs import with_constants
from pycwl.numtheory.arith import upsilon_table
from pycwl.numtheory.certified import CertifiedValue, Constants, constants
from pycwl.numtheory.primes import mobius_table, radical
from pycwl.settings import DEFAULT_BUDGET, DEFAULT_EPS, Budget
from pycwl.typings import AnSumMode, BudgetError, DomainError, Real

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UpsilonLinear():
    """q0 X + q1 with X = Υ(0) = 1/(ζ(2) F) kept symbolic. """
    q0: Fraction
    q1: Fraction

    def enclose(self, eps: float = DEFAULT_EPS) -> CertifiedValue:
        return with_constants(lambda c: self.evaluate(c), eps,
                              "q0 X + q1")

    def evaluate(self, c: Constants) -> CertifiedValue:
        return c.inv_zeta2_f * self.q0 + self.q1


def _weight(N: int, c: int) -> int:
    return N if c == 0 else 2 * (N - c)


def offset_gcd_weights(N: int) -> Dict[int, int]:
    """S_g = Σ_{gcd(c, d) = g} w(c) w(d) over 0 <= c, d < N.

    The pairs with m | c and m | d weigh (Σ_{m|c} w(c))^2, counting (0, 0)
    for every m; Möbius inversion over the multiples of g isolates gcd g.
    """
    divisible = [0] * N
    for m in range(1, N):
        divisible[m] = sum(_weight(N, c) for c in range(0, N, m))
    zero = _weight(N, 0)**2
    mu = mobius_table(N)
    weights = {0: zero}
    for g in range(1, N):
        weights[g] = sum(
            mu[k] * (divisible[g * k]**2 - zero)
            for k in range(1, (N - 1) // g + 1) if mu[k]
        )
    return weights


def a_n_sum(
    N: int,
    mode: AnSumMode = 'certified',
    eps: float = DEFAULT_EPS,
    budget: Budget = DEFAULT_BUDGET,
) -> Union[UpsilonLinear, CertifiedValue]:
    """A_N, as q0 X + q1 (exact) or as an enclosure (certified).

    Raises:
        BudgetError: if N^2 exceeds `budget.gcd_terms`.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if N * N > budget.gcd_terms:
        raise BudgetError(
            f"A_{N} spans {N * N} offsets, budget is {budget.gcd_terms}",
            required=N * N,
            limit=budget.gcd_terms,
        )
    weights = offset_gcd_weights(N)
    upsilon = upsilon_table(max(N - 1, 1))
    by_radical: Dict[int, int] = defaultdict(int)
    representative: Dict[int, int] = {}
    for g, weight in weights.items():
        if g and weight:
            rad = radical(g)
            by_radical[rad] += weight
            representative[rad] = g
    q1 = sum((upsilon[representative[rad]] * weight
              for rad, weight in by_radical.items()), Fraction(0))
    linear = UpsilonLinear(Fraction(weights[0]), q1)
    logger.debug("A_%d: %d radical classes", N, len(by_radical))
    if mode == 'exact':
        return linear
    if mode == 'certified':
        return linear.enclose(eps)
    raise DomainError(f"unknown mode {mode!r}")


def a_n_sum_direct(N: int, eps: float = DEFAULT_EPS) -> UpsilonLinear:
    """A_N from the literal sum over all pairs of cells of 𝒦_N. """
    counts: Dict[int, int] = defaultdict(int)
    cells = [(i, j) for i in range(N) for j in range(N)]
    for i, j in cells:
        for k, l in cells:
            counts[gcd(abs(i - k), abs(j - l))] += 1
    upsilon = upsilon_table(max(N - 1, 1))
    q1 = sum((upsilon[g] * count for g, count in counts.items() if g),
             Fraction(0))
    return UpsilonLinear(Fraction(counts[0]), q1)


def second_moment(
    M: int, eps: float = DEFAULT_EPS, budget: Budget = DEFAULT_BUDGET
) -> CertifiedValue:
    """E[(Z*_M)^2] = F A_M. With F X = 1/ζ(2) this is q0/ζ(2) + q1 F. """
    linear = a_n_sum(M, 'exact', budget=budget)
    assert isinstance(linear, UpsilonLinear)
    return with_constants(
        lambda c: c.inv_zeta2 * linear.q0 + c.feller_tornier * linear.q1,
        eps, f"E[Z*_{M}^2]"
    )


def _variance_ratio(linear: UpsilonLinear, M: int,
                    c: Constants) -> CertifiedValue:
    second = c.inv_zeta2 * linear.q0 + c.feller_tornier * linear.q1
    mean = c.inv_zeta2 * (M * M)
    return second / (mean * mean) - 1


def variance_ratio(
    M: int, eps: float = DEFAULT_EPS, budget: Budget = DEFAULT_BUDGET
) -> CertifiedValue:
    """V(Z*_M)/E(Z*_M)^2. """
    linear = a_n_sum(M, 'exact', budget=budget)
    assert isinstance(linear, UpsilonLinear)
    return with_constants(
        lambda c: _variance_ratio(linear, M, c), eps, f"V/E^2 at M={M}"
    )


def _normalized(linear: UpsilonLinear, N: int,
                c: Constants) -> CertifiedValue:
    zeta2 = 1 / c.inv_zeta2
    scaled = zeta2 * linear.q0 + zeta2 * zeta2 * c.feller_tornier * linear.q1
    return scaled / N**4


def avg_correlation(
    N: int, eps: float = DEFAULT_EPS, budget: Budget = DEFAULT_BUDGET
) -> CertifiedValue:
    """Mean of ρ over all N^4 pairs of cells of 𝒦_N:
    (ζ(2)^2 F A_N / N^4 - 1)/(ζ(2) - 1). """
    if N < 2:
        raise DomainError(f"avg_correlation needs N >= 2, got {N}")
    linear = a_n_sum(N, 'exact', budget=budget)
    assert isinstance(linear, UpsilonLinear)

    def compute(c: Constants) -> CertifiedValue:
        return (_normalized(linear, N, c) - 1) / (1 / c.inv_zeta2 - 1)

    return with_constants(compute, eps, f"average correlation N={N}")


def a_n_normalized(
    N: int, eps: float = DEFAULT_EPS, budget: Budget = DEFAULT_BUDGET
) -> CertifiedValue:
    """ζ(2)^2 F A_N / N^4, which tends to 1. """
    linear = a_n_sum(N, 'exact', budget=budget)
    assert isinstance(linear, UpsilonLinear)
    return with_constants(
        lambda c: _normalized(linear, N, c), eps, f"normalized A_{N}"
    )


def concentration_bound(
    M: int,
    delta: Real,
    eps: float = DEFAULT_EPS,
    budget: Budget = DEFAULT_BUDGET,
) -> CertifiedValue:
    """Chebyshev bound on P(|Z*_M/M^2 - 1/ζ(2)| >= delta): V(Z*_M)/(M^4
    delta^2), which tends to 0. """
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    linear = a_n_sum(M, 'exact', budget=budget)
    assert isinstance(linear, UpsilonLinear)
    d2 = Fraction(delta)**2

    def compute(c: Constants) -> CertifiedValue:
        ratio = _variance_ratio(linear, M, c)
        return ratio * c.inv_zeta2 * c.inv_zeta2 / d2

    return with_constants(compute, eps, f"concentration bound M={M}")


def upsilon_weighted_average(
    n: int,
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    eps: float = DEFAULT_EPS,
    budget: Budget = DEFAULT_BUDGET,
) -> float:
    """(1/n^2) Σ_{0<=i,j<=n} f(i/n, j/n) Υ(gcd(i, j)).

    `f` takes two coordinate grids and returns the weights on them.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if (n + 1)**2 > budget.gcd_terms:
        raise BudgetError(
            f"weighted average over {(n + 1) ** 2} points, budget is "
            f"{budget.gcd_terms}",
            required=(n + 1)**2,
            limit=budget.gcd_terms,
        )
    upsilon = np.array(
        [constants(eps).inv_zeta2_f.mid] +
        [float(u) for u in upsilon_table(n)[1:]]
    )
    index = np.arange(n + 1)
    gcds = np.gcd.outer(index, index)
    x, y = np.meshgrid(index / n, index / n, indexing='ij')
    return float((np.asarray(f(x, y), dtype=float) * upsilon[gcds]).sum() /
                 (n * n))


__all__ = [
    'UpsilonLinear',
    'offset_gcd_weights',
    'a_n_sum',
    'a_n_sum_direct',
    'a_n_normalized',
    'second_moment',
    'variance_ratio',
    'avg_correlation',
    'concentration_bound',
    'upsilon_weighted_average',
]
