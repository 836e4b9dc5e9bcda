"""The limit law of Z*_M.

P(Z*_M = r) = Σ_{s>=r} (-1)^{s-r} C(s, r) ξ(M, s) ∏_{p>=M} (1 - s/p^2).

Every coefficient (-1)^{s-r} C(s, r) ξ(M, s) is exact, and so is the finite
part of each Euler product, because all s share one truncation prime. The
only inexact inputs are the per-s tail enclosures, so the width of an entry
is Σ_s |coefficient| * (tail width) plus rounding at the working precision.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Tuple

from mpmath import iv

from pycwl.limitdist.xi import xi_table
from pycwl.numtheory.certified import (
    CertifiedValue, EulerProduct, certified_sum, choose_trunc_prime,
    constants, euler_product_tail, euler_products, refine, tail_bound,
    to_interval, working_precision
)
from pycwl.numtheory.primes import primorial
from pycwl.settings import (
    DEFAULT_BUDGET, DEFAULT_EPS, Budget, max_precision_bits, precision_bits
)
from pycwl.typings import BudgetError, DomainError, Real

logger = logging.getLogger(__name__)

Row = Dict[int, Fraction]


@dataclass(frozen=True)
class DistTable():
    """Certified pmf of Z*_M on r = 0..M^2. """
    M: int
    pmf: Tuple[CertifiedValue, ...]
    exact_zero: Tuple[Optional[str], ...]
    """Why an entry is exactly 0, or None when it is not forced to be."""
    trunc_prime: int
    tail_bound: float
    """Largest Euler tail bound over the s in the alternating sum."""
    precision_bits: int
    support_upper: int

    def __getitem__(self, r: int) -> CertifiedValue:
        return self.pmf[r]

    def __len__(self) -> int:
        return len(self.pmf)

    @property
    def total(self) -> CertifiedValue:
        return certified_sum(self.pmf)

    @property
    def midpoints(self) -> List[float]:
        return [value.mid for value in self.pmf]

    def moment(self, k: int) -> CertifiedValue:
        """Σ_r r^k P(Z*_M = r). """
        with working_precision(self.precision_bits):
            return certified_sum(r**k * value
                                 for r, value in enumerate(self.pmf))


@dataclass(frozen=True)
class _Assembly():
    values: List[CertifiedValue]
    products: Dict[int, EulerProduct]
    trunc_prime: int
    bits: int


def _assemble(
    M: int,
    rows: List[Row],
    eps: float,
    what: str,
    budget: Budget,
    start_bits: Optional[int] = None,
) -> _Assembly:
    """Enclose Σ_s row[s] ∏_{p>=M}(1 - s/p^2) for each row, each within
    `eps`. """
    s_values = sorted({s for row in rows for s in row})
    weights = {
        s: max(abs(float(row.get(s, 0))) for row in rows)
        for s in s_values
    }
    N = choose_trunc_prime(M, weights, eps / 4, budget=budget)
    bits = start_bits or precision_bits(M)
    ceiling = max(bits, max_precision_bits(M))
    while True:
        with working_precision(bits):
            products = euler_products(M, s_values, N)
            values = []
            for row in rows:
                total = iv.mpf(0)
                for s, c in row.items():
                    product = products[s]
                    if c and product.finite:
                        total += to_interval(c * product.finite) * \
                            product.tail.interval
                values.append(CertifiedValue.from_interval(total))
        widest = max((v.width for v in values), default=0.0)
        if widest <= eps:
            logger.debug("%s: N=%d, %d bits, widest %.3g", what, N, bits,
                         widest)
            return _Assembly(values, products, N, bits)
        if bits >= ceiling:
            raise BudgetError(
                f"{what}: width {widest:.3g} at {bits} bits, target "
                f"{eps:.3g}",
                required=eps,
                limit=ceiling,
                achieved_width=widest,
            )
        logger.debug("%s: width %.3g at %d bits, raising precision", what,
                     widest, bits)
        bits = min(2 * bits, ceiling)


def _check_M(M: int):
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")


def pmf(
    M: int,
    eps: float = DEFAULT_EPS,
    threads: int = 1,
    budget: Budget = DEFAULT_BUDGET,
    bits: Optional[int] = None,
) -> DistTable:
    """The limit pmf of Z*_M, every entry enclosed within `eps`.

    `bits` overrides the starting working precision.

    Raises:
        BudgetError: if the Φ histogram, truncation prime or precision would
            exceed the budget.
    """
    _check_M(M)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    return _build_pmf(M, eps, threads, budget, bits)


@lru_cache(maxsize=64)
def _build_pmf(
    M: int, eps: float, threads: int, budget: Budget, bits: Optional[int]
) -> DistTable:
    xis = xi_table(M, threads, budget)
    upper = xis.support_upper
    rows: List[Row] = []
    for r in range(upper + 1):
        rows.append({
            s: (-1)**(s - r) * comb(s, r) * xis[s]
            for s in range(r, upper + 1) if xis[s]
        })
    assembly = _assemble(M, rows, eps, f"pmf(M={M})", budget, bits)
    values, reasons = [], []
    for r in range(M * M + 1):
        if r > upper:
            values.append(CertifiedValue.exact(0))
            reasons.append(f"r > support_upper = {upper}")
        elif all(not assembly.products[s].finite for s in rows[r]):
            values.append(CertifiedValue.exact(0))
            reasons.append(f"vanishing Euler factor 1 - {M * M}/p^2 at p = M")
        else:
            values.append(assembly.values[r])
            reasons.append(None)
    table = DistTable(
        M,
        tuple(values),
        tuple(reasons),
        assembly.trunc_prime,
        max(
            float(tail_bound(s, assembly.trunc_prime))
            for s in assembly.products
        ),
        assembly.bits,
        upper,
    )
    return table


def pgf_eval(
    M: int,
    z: Real,
    eps: float = DEFAULT_EPS,
    budget: Budget = DEFAULT_BUDGET,
    bits: Optional[int] = None,
) -> CertifiedValue:
    """E[z^{Z*_M}] = Σ_s (z - 1)^s ξ(M, s) ∏_{p>=M}(1 - s/p^2). """
    _check_M(M)
    q = Fraction(z)
    if abs(q) > 1:
        raise DomainError(f"z must lie in [-1, 1], got {z}")
    xis = xi_table(M, budget=budget)
    row = {
        s: (q - 1)**s * xis[s]
        for s in range(xis.support_upper + 1) if xis[s]
    }
    return _assemble(M, [row], eps, f"pgf(M={M}, z={z})", budget,
                     bits).values[0]


def mean(
    M: int,
    eps: float = DEFAULT_EPS,
    cross_check: bool = True,
    budget: Budget = DEFAULT_BUDGET,
) -> CertifiedValue:
    """E[Z*_M] = M^2/ζ(2).

    With `cross_check`, and when the Φ histogram fits the budget, the value
    is compared with Σ r P(Z*_M = r).

    Raises:
        RuntimeError: if the two evaluations do not overlap.
    """
    _check_M(M)
    square = M * M
    inv_zeta2 = constants(eps / (4 * square)).inv_zeta2
    value = refine(
        lambda: inv_zeta2.interval * square, eps, 64, 1024, f"mean(M={M})"
    )
    if cross_check and primorial(M)**2 <= budget.phi_pairs:
        other = pmf(M, eps, budget=budget).moment(1)
        if not value.overlaps(other):
            raise RuntimeError(
                f"mean(M={M}): M^2/zeta(2) = {value} misses "
                f"sum r P(r) = {other}"
            )
    return value


def factorial_moment(
    M: int,
    s: int,
    eps: float = DEFAULT_EPS,
    budget: Budget = DEFAULT_BUDGET,
) -> CertifiedValue:
    """E[C(Z*_M, s)] = ξ(M, s) ∏_{p>=M}(1 - s/p^2). """
    _check_M(M)
    if s < 0 or s > M * M:
        raise DomainError(f"s must lie in [0, {M * M}], got {s}")
    x = xi_table(M, budget=budget)[s]
    if s == 0:
        return CertifiedValue.exact(1)
    if not x:
        return CertifiedValue.exact(0)
    scale = max(1.0, float(x))
    tail = euler_product_tail(M, s, eps / (2 * scale), budget=budget)
    with working_precision(precision_bits(M) + 64):
        return tail * x


def poisson_tv_distance(
    M: int, eps: float = DEFAULT_EPS, budget: Budget = DEFAULT_BUDGET
) -> CertifiedValue:
    """Total variation distance between Z*_M and a Poisson law whose
    parameter is the midpoint of the M^2/ζ(2) enclosure.

    Poisson mass above M^2 enters as 1 minus the mass on 0..M^2.
    """
    dist = pmf(M, eps, budget=budget)
    lam = mean(M, eps, cross_check=False)
    midpoint = (lam.lo_fraction + lam.hi_fraction) / 2
    with working_precision(dist.precision_bits + 64):
        L = to_interval(midpoint)
        q = iv.exp(-L)
        distance = iv.mpf(0)
        poisson_mass = iv.mpf(0)
        for r, value in enumerate(dist.pmf):
            if r:
                q = q * L / r
            distance += abs(value.interval - q)
            poisson_mass += q
        distance += 1 - poisson_mass
        return CertifiedValue.from_interval(distance / 2)


def zero_probability(
    M: int, eps: float = DEFAULT_EPS, budget: Budget = DEFAULT_BUDGET
) -> Tuple[CertifiedValue, CertifiedValue]:
    """P(Z*_M = 0) next to exp(-M^2/ζ(2)), the value a Poisson law with the
    same mean would give. """
    dist = pmf(M, eps, budget=budget)
    lam = mean(M, eps, cross_check=False)
    with working_precision(dist.precision_bits + 64):
        poisson = CertifiedValue.from_interval(iv.exp(-lam.interval))
    return dist[0], poisson


__all__ = [
    'DistTable',
    'pmf',
    'pgf_eval',
    'mean',
    'factorial_moment',
    'poisson_tv_distance',
    'zero_probability',
]
