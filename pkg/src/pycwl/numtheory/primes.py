from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
from typing import List, Tuple

from pycwl.typings import DomainError


@dataclass(frozen=True)
class PrimeTable():
    """All primes up to `limit`, ascending. """
    limit: int
    primes: Tuple[int, ...]

    def __contains__(self, n: object) -> bool:
        if not isinstance(n, int) or n > self.limit:
            return False
        i = bisect.bisect_left(self.primes, n)
        return i < len(self.primes) and self.primes[i] == n

    def __len__(self) -> int:
        return len(self.primes)

    def between(self, lo: int, hi: int) -> Tuple[int, ...]:
        """Primes p with lo <= p <= hi (hi must not exceed `limit`)."""
        if hi > self.limit:
            raise DomainError(f"{hi} exceeds the sieve limit {self.limit}")
        i = bisect.bisect_left(self.primes, lo)
        j = bisect.bisect_right(self.primes, hi)
        return self.primes[i:j]


@lru_cache(maxsize=32)
def _sieve(limit: int) -> Tuple[int, ...]:
    is_prime = bytearray(b"\x01") * (limit + 1)
    is_prime[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if is_prime[p]:
            start = p * p
            is_prime[start::p] = b"\x00" * ((limit - start) // p + 1)
    return tuple(i for i in range(2, limit + 1) if is_prime[i])


def sieve_primes(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes.

    Raises:
        DomainError: if `limit < 2`, where the table would be empty.
    """
    if limit < 2:
        raise DomainError(f"no primes below {limit}: limit must be >= 2")
    return PrimeTable(limit, _sieve(limit))


def primes_up_to(limit: int) -> Tuple[int, ...]:
    """Like `sieve_primes`, but an empty tuple for limit < 2. """
    if limit < 2:
        return ()
    return _sieve(limit)


def primes_below(M: int) -> Tuple[int, ...]:
    """Primes strictly below M. """
    return primes_up_to(M - 1)


def next_prime(n: int) -> int:
    """Smallest prime >= n. """
    limit = max(2 * n, 16)
    while True:
        primes = primes_up_to(limit)
        i = bisect.bisect_left(primes, n)
        if i < len(primes):
            return primes[i]
        limit *= 2


def prime_factors(n: int) -> List[int]:
    """Distinct prime factors of n >= 1, ascending, by trial division. """
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    factors: List[int] = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            factors.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors.append(n)
    return factors


def mobius(n: int) -> int:
    """Möbius function: 0 unless n is square-free, else (-1)^(number of prime
    factors). """
    if n < 1:
        raise DomainError(f"mobius is defined for n >= 1, got {n}")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1 if p == 2 else 2
    if n > 1:
        result = -result
    return result


def mobius_table(limit: int) -> List[int]:
    """`table[n] = mobius(n)` for 1 <= n <= limit (index 0 holds 0). """
    mu = [1] * (limit + 1)
    mu[0] = 0
    for p in primes_up_to(limit):
        for m in range(p, limit + 1, p):
            mu[m] = -mu[m]
        for m in range(p * p, limit + 1, p * p):
            mu[m] = 0
    return mu


def gcd_conv(a: int, b: int) -> int:
    """gcd with gcd(a, 0) = a and gcd(0, 0) = 0. """
    if a < 0 or b < 0:
        raise DomainError(f"gcd_conv takes nonnegative integers, got {a}, {b}")
    return gcd(a, b)


def primorial(M: int) -> int:
    """P_M, the product of the primes strictly below M (P_1 = P_2 = 1). """
    if M < 1:
        raise DomainError(f"primorial needs M >= 1, got {M}")
    result = 1
    for p in primes_below(M):
        result *= p
    return result


def radical(n: int) -> int:
    """Product of the distinct primes dividing n >= 1. """
    result = 1
    for p in prime_factors(n):
        result *= p
    return result


def squarefree_divisors(primes: Tuple[int, ...]) -> List[Tuple[int, int]]:
    """All (d, mobius(d)) for d a product of a subset of `primes`. """
    divisors = [(1, 1)]
    for p in primes:
        divisors += [(d * p, -mu) for d, mu in divisors]
    return divisors


__all__ = [
    'PrimeTable',
    'sieve_primes',
    'primes_up_to',
    'primes_below',
    'next_prime',
    'prime_factors',
    'mobius',
    'mobius_table',
    'gcd_conv',
    'primorial',
    'radical',
    'squarefree_divisors',
]
