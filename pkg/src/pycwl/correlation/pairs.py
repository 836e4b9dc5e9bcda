from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List

from pycwl.numtheory.arith import upsilon_exact
from pycwl.numtheory.certified import (
    CertifiedValue, Constants, constants, working_precision
)
from pycwl.numtheory.primes import gcd_conv
from pycwl.settings import DEFAULT_EPS
from pycwl.typings import BudgetError, DomainError


@dataclass(frozen=True)
class PairOffsets():
    """Two cells (i, j) and (k, l) of a window frame. """
    i: int
    j: int
    k: int
    l: int

    def __post_init__(self):
        if min(self.i, self.j, self.k, self.l) < 0:
            raise DomainError(f"offsets must be nonnegative: {self}")

    @property
    def gcd(self) -> int:
        return gcd_conv(abs(self.i - self.k), abs(self.j - self.l))


def with_constants(
    compute: Callable[[Constants], CertifiedValue],
    eps: float,
    what: str,
    bits: int = 256,
) -> CertifiedValue:
    """Evaluate `compute` on ever tighter constants until the result is at
    most `eps` wide. """
    tolerance = eps / 64
    for _ in range(6):
        with working_precision(bits):
            value = compute(constants(tolerance))
        if value.width <= eps:
            return value
        tolerance /= 4096
        bits *= 2
    raise BudgetError(
        f"{what}: width {value.width:.3g}, target {eps:.3g}",
        required=eps,
        achieved_width=value.width,
    )


def pair_expectation(po: PairOffsets,
                     eps: float = DEFAULT_EPS) -> CertifiedValue:
    """Limit of E[V(a+i, b+j) V(a+k, b+l)]: F Υ(g), or 1/ζ(2) when both
    cells coincide. """
    g = po.gcd
    if g == 0:
        return constants(eps).inv_zeta2
    upsilon = upsilon_exact(g)
    return with_constants(
        lambda c: c.feller_tornier * upsilon, eps, f"F * Upsilon({g})"
    )


def _rho_of(upsilon: Fraction, c: Constants) -> CertifiedValue:
    zeta2 = 1 / c.inv_zeta2
    return (zeta2 * zeta2 * c.feller_tornier * upsilon - 1) / (zeta2 - 1)


@lru_cache(maxsize=4096)
def rho_of_gcd(g: int, eps: float = DEFAULT_EPS) -> CertifiedValue:
    """Correlation of two distinct cells whose offsets have gcd g >= 1. """
    if g < 1:
        raise DomainError(f"distinct cells have offset gcd >= 1, got {g}")
    upsilon = upsilon_exact(g)
    return with_constants(
        lambda c: _rho_of(upsilon, c), eps, f"rho(g={g})"
    )


def rho(po: PairOffsets, eps: float = DEFAULT_EPS) -> CertifiedValue:
    """(ζ(2)^2 F Υ(g) - 1)/(ζ(2) - 1); exactly 1 for a cell with itself. """
    g = po.gcd
    if g == 0:
        return CertifiedValue.exact(1)
    return rho_of_gcd(g, eps)


def rho_lower_bound(eps: float = DEFAULT_EPS) -> CertifiedValue:
    """(ζ(2)^2 F - 1)/(ζ(2) - 1), attained at g = 1. """
    return rho_of_gcd(1, eps)


def rho_grid(N: int, eps: float = DEFAULT_EPS) -> List[List[CertifiedValue]]:
    """`grid[dx][dy]` = correlation of cells offset by (dx, dy), for
    0 <= dx, dy < N; this covers all pairs of cells of an N x N frame. """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    return [[rho(PairOffsets(0, 0, dx, dy), eps) for dy in range(N)]
            for dx in range(N)]


__all__ = [
    'PairOffsets',
    'pair_expectation',
    'rho',
    'rho_of_gcd',
    'rho_lower_bound',
    'rho_grid',
    'with_constants',
]
