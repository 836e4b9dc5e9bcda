from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate
from typing import Callable, List, Union

from pycwl.numtheory.certified import CertifiedValue, constants
from pycwl.numtheory.primes import (
    mobius_table, prime_factors, primes_up_to, radical
)
from pycwl.settings import DEFAULT_EPS
from pycwl.typings import ArithmeticTable, DomainError, Real


@lru_cache(maxsize=None)
def _upsilon_of_radical(rad: int) -> Fraction:
    value = Fraction(1)
    for p in prime_factors(rad):
        q = p * p
        value *= Fraction(q - 1, q - 2)
    return value


def upsilon(n: int,
            eps: float = DEFAULT_EPS) -> Union[Fraction, CertifiedValue]:
    """Υ(n) = ∏_{p|n} (1 - 1/p^2) / (1 - 2/p^2).

    Exact for n >= 1. Υ(0) is by convention 1/(ζ(2) F), returned as an
    enclosure of width `eps`.
    """
    if n < 0:
        raise DomainError(f"upsilon takes n >= 0, got {n}")
    if n == 0:
        return constants(eps).inv_zeta2_f
    return _upsilon_of_radical(radical(n))


def upsilon_exact(n: int) -> Fraction:
    """Υ(n) for n >= 1. """
    if n < 1:
        raise DomainError(f"Υ({n}) is not rational")
    return _upsilon_of_radical(radical(n))


def upsilon_star_mu(n: int) -> Fraction:
    """(Υ⋆μ)(n) = |μ(n)| ∏_{p|n} 1/(p^2 - 2). """
    if n < 1:
        raise DomainError(f"upsilon_star_mu takes n >= 1, got {n}")
    value = Fraction(1)
    for p in prime_factors(n):
        if n % (p * p) == 0:
            return Fraction(0)
        value /= p * p - 2
    return value


def delta_one(n: int) -> int:
    return 1 if n == 1 else 0


def one(n: int) -> int:
    return 1


def identity(n: int) -> int:
    return n


def table(f: Callable[[int], Real], limit: int) -> ArithmeticTable:
    """Dense table `[_, f(1), ..., f(limit)]` of exact values. """
    if limit < 1:
        raise DomainError(f"table limit must be >= 1, got {limit}")
    return [Fraction(0)] + [Fraction(f(n)) for n in range(1, limit + 1)]


def mobius_fraction_table(limit: int) -> ArithmeticTable:
    return [Fraction(m) for m in mobius_table(limit)]


def upsilon_table(limit: int) -> ArithmeticTable:
    """Υ on 1..limit, sieved over primes. """
    values = [Fraction(1)] * (limit + 1)
    values[0] = Fraction(0)
    for p in primes_up_to(limit):
        factor = Fraction(p * p - 1, p * p - 2)
        for m in range(p, limit + 1, p):
            values[m] *= factor
    return values


def dirichlet_convolve(f: ArithmeticTable, g: ArithmeticTable,
                       limit: int) -> ArithmeticTable:
    """(f⋆g)(n) = Σ_{d|n} f(d) g(n/d) for 1 <= n <= limit. """
    if len(f) != len(g):
        raise DomainError(
            f"tables differ in length: {len(f) - 1} and {len(g) - 1}"
        )
    if limit < 1 or limit > len(f) - 1:
        raise DomainError(f"limit {limit} outside 1..{len(f) - 1}")
    result = [Fraction(0)] * (limit + 1)
    for d in range(1, limit + 1):
        fd = f[d]
        if not fd:
            continue
        for e in range(1, limit // d + 1):
            if g[e]:
                result[d * e] += fd * g[e]
    return result


def cesaro_sum(h: ArithmeticTable, A: int, B: int) -> Fraction:
    """Σ_{k>=1} h(k) ⌊A/k⌋ ⌊B/k⌋, which equals Σ_{i<=A, j<=B} f(gcd(i, j))
    for h = f⋆μ. """
    if A < 1 or B < 1:
        raise DomainError(f"box sides must be >= 1, got {A} x {B}")
    K = min(A, B)
    if len(h) <= K:
        raise DomainError(f"table covers 1..{len(h) - 1}, needs 1..{K}")
    return sum((h[k] * (A // k) * (B // k) for k in range(1, K + 1) if h[k]),
               Fraction(0))


def direct_gcd_sum(f: Callable[[int], Real], A: int, B: int) -> Fraction:
    """Σ_{i<=A, j<=B} f(gcd(i, j)), literally. """
    counts: dict = {}
    for i in range(1, A + 1):
        for j in range(1, B + 1):
            g = math.gcd(i, j)
            counts[g] = counts.get(g, 0) + 1
    return sum((Fraction(f(g)) * c for g, c in counts.items()), Fraction(0))


def direct_gcd_box_sums(f: Callable[[int], Real],
                        L: int) -> List[List[Fraction]]:
    """`sums[A][B]` = Σ_{i<=A, j<=B} f(gcd(i, j)) for 0 <= A, B <= L. """
    sums = [[Fraction(0)] * (L + 1)]
    for i in range(1, L + 1):
        row = accumulate(
            (Fraction(f(math.gcd(i, j))) for j in range(1, L + 1)),
            initial=Fraction(0),
        )
        sums.append([above + here for above, here in zip(sums[-1], row)])
    return sums


def dirichlet_series_partial(values: ArithmeticTable, s: int,
                             exact: bool = True) -> Union[Fraction, float]:
    """Σ_{k=1}^{K} f(k)/k^s with K = len(values) - 1; `exact=False` sums in
    floating point. """
    if exact:
        return sum(
            (values[k] / k**s for k in range(1, len(values)) if values[k]),
            Fraction(0)
        )
    return math.fsum(
        float(values[k]) / k**s for k in range(1, len(values)) if values[k]
    )


def upsilon_star_mu_table(limit: int) -> ArithmeticTable:
    """Υ⋆μ on 1..limit, sieved over primes. """
    values = [Fraction(1)] * (limit + 1)
    values[0] = Fraction(0)
    for p in primes_up_to(limit):
        q = p * p
        for m in range(p, limit + 1, p):
            values[m] /= q - 2
        for m in range(q, limit + 1, q):
            values[m] = Fraction(0)
    return values


__all__ = [
    'upsilon',
    'upsilon_exact',
    'upsilon_star_mu',
    'delta_one',
    'one',
    'identity',
    'table',
    'mobius_fraction_table',
    'upsilon_table',
    'upsilon_star_mu_table',
    'dirichlet_convolve',
    'cesaro_sum',
    'direct_gcd_sum',
    'direct_gcd_box_sums',
    'dirichlet_series_partial',
]
