"""Certified enclosures on top of mpmath's interval context.

All rounding in the package happens here. Exact rationals stay exact until
they are multiplied into an interval, and every interval operation rounds
outward at the current `iv.prec`.
"""
from __future__ import annotations

import contextlib
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, List, Tuple, Union

import mpmath
import numpy as np
from mpmath import iv, mp

from pycwl.numtheory.primes import (
    mobius, next_prime, primes_up_to
)
from pycwl.settings import (
    DEFAULT_BUDGET, DEFAULT_EPS, ZETA_TERMS, Budget, max_precision_bits,
    precision_bits
)
from pycwl.typings import BudgetError, DomainError, Real, TailMethod

logger = logging.getLogger(__name__)

Interval = Union['CertifiedValue', Real, mpmath.mpf]


@contextlib.contextmanager
def working_precision(bits: int) -> Iterator[int]:
    """Set the interval precision for the duration of a with-block."""
    saved = iv.prec
    iv.prec = bits
    try:
        yield bits
    finally:
        iv.prec = saved


def _fraction(raw: tuple) -> Fraction:
    sign, man, exp, _ = raw
    if not man:
        if exp:
            raise DomainError("infinite or NaN endpoint")
        return Fraction(0)
    value = Fraction(man) * (Fraction(2)**exp)
    return -value if sign else value


def to_fraction(x: Union[Real, mpmath.mpf]) -> Fraction:
    """Exact rational value of a binary float, int, float or Fraction. """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float)):
        return Fraction(x)
    if hasattr(x, '_mpf_'):
        return _fraction(x._mpf_)
    raise TypeError(f"cannot convert {type(x).__name__} exactly")


def to_interval(x: Interval):
    """Enclose `x` in an mpmath interval at the current precision. """
    if isinstance(x, CertifiedValue):
        return x.interval
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return iv.mpf(x.numerator)
        return iv.mpf(x.numerator) / x.denominator
    if hasattr(x, '_mpf_'):
        return iv.mpf([x, x])
    return iv.mpf(x)


def _directed(q: Fraction, digits: int, up: bool) -> str:
    if q == 0:
        return "0"
    negative = q < 0
    a = -q if negative else q
    e = len(str(a.numerator)) - len(str(a.denominator))
    if a < Fraction(10)**e:
        e -= 1
    shift = e - digits + 1
    scaled = a / (Fraction(10)**shift)
    if up != negative:
        m = -((-scaled.numerator) // scaled.denominator)
    else:
        m = scaled.numerator // scaled.denominator
    text = str(m)
    exponent = shift + len(text) - 1
    mantissa = text[0] + ("." + text[1:] if len(text) > 1 else "")
    return f"{'-' if negative else ''}{mantissa}e{exponent:+03d}"


@dataclass(frozen=True)
class CertifiedValue():
    """A real number known to lie in `[lo, hi]`.

    Endpoints are exact binary floats, so comparisons and widths are exact.
    Arithmetic goes through mpmath's `iv` context at its current precision.
    """
    lo: mpmath.mpf
    hi: mpmath.mpf

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @staticmethod
    def from_interval(x) -> CertifiedValue:
        lo, hi = x._mpi_
        return CertifiedValue(mp.make_mpf(lo), mp.make_mpf(hi))

    @staticmethod
    def exact(x: Interval) -> CertifiedValue:
        """Enclosure of a known number; a point when it is representable."""
        if isinstance(x, CertifiedValue):
            return x
        return CertifiedValue.from_interval(to_interval(x))

    @staticmethod
    def hull(values: Iterable[CertifiedValue]) -> CertifiedValue:
        values = list(values)
        return CertifiedValue(
            min(v.lo for v in values), max(v.hi for v in values)
        )

    @property
    def interval(self):
        return iv.mpf([self.lo, self.hi])

    @property
    def lo_fraction(self) -> Fraction:
        return to_fraction(self.lo)

    @property
    def hi_fraction(self) -> Fraction:
        return to_fraction(self.hi)

    @property
    def width(self) -> float:
        """Width rounded up to a float. """
        w = self.hi_fraction - self.lo_fraction
        f = float(w)
        return f if Fraction(f) >= w else float(np.nextafter(f, np.inf))

    @property
    def mid(self) -> float:
        return float((self.lo_fraction + self.hi_fraction) / 2)

    @property
    def is_zero(self) -> bool:
        return self.lo == 0 and self.hi == 0

    def contains(self, x: Union[Real, mpmath.mpf]) -> bool:
        q = to_fraction(x)
        return self.lo_fraction <= q <= self.hi_fraction

    def encloses(self, other: CertifiedValue) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: CertifiedValue) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def within(self, lo: Real, hi: Real) -> bool:
        """Whether the whole enclosure lies in [lo, hi]. """
        return Fraction(lo) <= self.lo_fraction and \
            self.hi_fraction <= Fraction(hi)

    def decimal(self, digits: int = 17) -> Tuple[str, str]:
        """Decimal strings for lo (rounded down) and hi (rounded up)."""
        return (
            _directed(self.lo_fraction, digits, up=False),
            _directed(self.hi_fraction, digits, up=True),
        )

    def _binary(self, other: Interval, op: Callable) -> CertifiedValue:
        return CertifiedValue.from_interval(
            op(self.interval, to_interval(other))
        )

    def __add__(self, other: Interval) -> CertifiedValue:
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other: Interval) -> CertifiedValue:
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other: Interval) -> CertifiedValue:
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other: Interval) -> CertifiedValue:
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other: Interval) -> CertifiedValue:
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other: Interval) -> CertifiedValue:
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self) -> CertifiedValue:
        return CertifiedValue.from_interval(-self.interval)

    def __pow__(self, n: int) -> CertifiedValue:
        return CertifiedValue.from_interval(self.interval**n)

    def __str__(self) -> str:
        lo, hi = self.decimal(12)
        return f"[{lo}, {hi}]"


def certified_sum(values: Iterable[Interval]) -> CertifiedValue:
    total = iv.mpf(0)
    for value in values:
        total += to_interval(value)
    return CertifiedValue.from_interval(total)


def refine(
    compute: Callable[[], object],
    eps: float,
    bits: int,
    max_bits: int,
    what: str,
) -> CertifiedValue:
    """Evaluate `compute` at doubling precision until its enclosure is at
    most `eps` wide.

    Raises:
        BudgetError: if `max_bits` is reached first.
    """
    while True:
        with working_precision(bits):
            value = CertifiedValue.exact(compute())  # type: ignore
        if value.width <= eps:
            return value
        if bits >= max_bits:
            raise BudgetError(
                f"{what}: width {value.width:.3g} at {bits} bits, "
                f"target {eps:.3g}",
                required=eps,
                limit=max_bits,
                achieved_width=value.width,
            )
        logger.debug("%s: width %.3g at %d bits", what, value.width, bits)
        bits = min(2 * bits, max_bits)


def _zeta_even_interval(k: int):
    num, den = mpmath.bernfrac(2 * k)
    coefficient = abs(Fraction(int(num), int(den))) / \
        (2 * math.factorial(2 * k))
    return to_interval(coefficient) * (iv.pi * 2)**(2 * k)


def zeta_even(k: int, eps: float = DEFAULT_EPS) -> CertifiedValue:
    """ζ(2k) from the exact Bernoulli number B_2k. """
    if k < 1:
        raise DomainError(f"zeta_even needs k >= 1, got {k}")
    return refine(
        lambda: _zeta_even_interval(k), eps, 64, 8192, f"zeta({2 * k})"
    )


def necklace_exponents(s: int, K: int) -> List[int]:
    """`[a_1, ..., a_K]` with 1 - s x = ∏_k (1 - x^k)^a_k up to x^K. """
    exponents = []
    for k in range(1, K + 1):
        total = sum(
            mobius(k // d) * s**d for d in range(1, k + 1) if k % d == 0
        )
        exponents.append(total // k)
    return exponents


def tail_bound(s: int, N: int, method: TailMethod = 'accelerated',
               K: int = ZETA_TERMS) -> Fraction:
    """Upper bound on Σ_{p>N} -log(1 - s/p^2) left after splitting off the
    zeta factors (accelerated) or nothing (plain). Needs N^2 > s. """
    if N * N <= s:
        raise DomainError(f"truncation prime {N} too small for s = {s}")
    if s == 0:
        return Fraction(0)
    margin = 1 - Fraction(s, N * N)
    if method == 'plain':
        return Fraction(s, N - 1) / margin
    if s == 1:
        return Fraction(0)
    return Fraction(s**(K + 1), (K + 1) * (2 * K + 1) * N**(2 * K + 1)) / margin


@lru_cache(maxsize=512)
def _zeta_factor_tail(k: int, N: int, prec: int):
    """∏_{p>N} (1 - p^{-2k}) at precision `prec`. """
    with working_precision(prec):
        finite = iv.mpf(1)
        for p in primes_up_to(N):
            finite *= 1 - to_interval(Fraction(1, p**(2 * k)))
        return 1 / (_zeta_even_interval(k) * finite)


def choose_trunc_prime(
    M: int,
    weights: Dict[int, float],
    target: float,
    method: TailMethod = 'accelerated',
    budget: Budget = DEFAULT_BUDGET,
) -> int:
    """Smallest prime N >= M, with N^2 above every s, such that
    Σ_s weights[s] * tail_bound(s, N) <= target.

    Raises:
        BudgetError: if N would exceed `budget.trunc_prime`.
    """
    s_max = max(weights, default=0)
    low = max(M, math.isqrt(s_max) + 1, 2)

    def total(N: int) -> float:
        return sum(
            w * float(tail_bound(s, N, method)) for s, w in weights.items()
        )

    high = low
    while total(high) > target:
        if high > budget.trunc_prime:
            raise BudgetError(
                f"truncation prime beyond {budget.trunc_prime} needed for "
                f"tail {target:.3g}",
                required=high,
                limit=budget.trunc_prime,
            )
        high *= 2
    while low < high:
        middle = (low + high) // 2
        if total(middle) <= target:
            high = middle
        else:
            low = middle + 1
    N = next_prime(low)
    if N > budget.trunc_prime:
        raise BudgetError(
            f"truncation prime {N} exceeds {budget.trunc_prime}",
            required=N,
            limit=budget.trunc_prime,
        )
    logger.debug(
        "M=%d s<=%d: truncation prime %d (%s tail)", M, s_max, N, method
    )
    return N


@dataclass(frozen=True)
class EulerProduct():
    """∏_{p>=M} (1 - s/p^2) as an exact finite part over M <= p <= N times
    an enclosure of the part over p > N. """
    M: int
    s: int
    trunc_prime: int
    finite: Fraction
    tail: CertifiedValue
    tail_bound: Fraction
    method: TailMethod

    @property
    def value(self) -> CertifiedValue:
        return self.tail * self.finite


def euler_products(
    M: int,
    s_values: Iterable[int],
    N: int,
    method: TailMethod = 'accelerated',
    K: int = ZETA_TERMS,
) -> Dict[int, EulerProduct]:
    """Euler products for several s sharing the truncation prime N,
    enclosed at the current precision. """
    primes = [p for p in primes_up_to(N) if p >= M]
    squares = [p * p for p in primes]
    denominator = math.prod(squares)
    products: Dict[int, EulerProduct] = {}
    for s in s_values:
        finite = Fraction(math.prod(q - s for q in squares), denominator)
        bound = tail_bound(s, N, method, K)
        if method == 'accelerated' and s > 0:
            tail = iv.mpf(1)
            for k, a in enumerate(necklace_exponents(s, K), start=1):
                if a:
                    tail *= _zeta_factor_tail(k, N, iv.prec)**a
        else:
            tail = iv.mpf(1)
        if bound:
            low = iv.exp(-to_interval(bound)).a
            tail *= iv.mpf([low, 1])
        products[s] = EulerProduct(
            M, s, N, finite, CertifiedValue.from_interval(tail), bound,
            method
        )
    return products


def _check_product_args(M: int, s: int):
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")
    if s < 0 or s > M * M:
        raise DomainError(f"s must lie in [0, M^2] = [0, {M * M}], got {s}")


def euler_product_tail(
    M: int,
    s: int,
    eps: float = DEFAULT_EPS,
    method: TailMethod = 'accelerated',
    budget: Budget = DEFAULT_BUDGET,
) -> CertifiedValue:
    """Enclosure of ∏_{p>=M} (1 - s/p^2) of width at most `eps`.

    Raises:
        DomainError: if `s > M^2`.
        BudgetError: if the truncation prime or precision ceiling is hit.
    """
    _check_product_args(M, s)
    if s == 0:
        return CertifiedValue.exact(1)
    if s == M * M and M in primes_up_to(M):
        return CertifiedValue.exact(0)
    N = choose_trunc_prime(M, {s: 1.0}, eps / 2, method, budget)
    return refine(
        lambda: euler_products(M, [s], N, method)[s].value.interval,
        eps,
        precision_bits(M),
        max_precision_bits(M),
        f"product over p >= {M} of (1 - {s}/p^2)",
    )


@dataclass(frozen=True)
class Constants():
    inv_zeta2: CertifiedValue
    """1/ζ(2) = 6/π^2"""
    feller_tornier: CertifiedValue
    """F = ∏_p (1 - 2/p^2)"""
    inv_zeta2_f: CertifiedValue
    """1/(ζ(2) F), the conventional value of Υ(0)"""


@lru_cache(maxsize=16)
def constants(eps: float = DEFAULT_EPS) -> Constants:
    """The three constants, each enclosed within `eps`.

    Raises:
        RuntimeError: if 1/ζ(2) disagrees with mpmath's own ζ(2).
    """
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    inv_zeta2 = euler_product_tail(1, 1, eps / 16)
    feller = euler_product_tail(2, 2, eps / 16)
    inv_zeta2_f = refine(
        lambda: inv_zeta2.interval / feller.interval, eps, 128, 1024,
        "1/(zeta(2) F)"
    )
    with mp.workprec(128):
        reference = 1 / mp.zeta(2)
    if not inv_zeta2.contains(reference):
        raise RuntimeError(
            f"1/zeta(2) enclosure {inv_zeta2} misses 6/pi^2 = {reference}"
        )
    return Constants(inv_zeta2, feller, inv_zeta2_f)


__all__ = [
    'CertifiedValue',
    'Constants',
    'EulerProduct',
    'certified_sum',
    'choose_trunc_prime',
    'constants',
    'euler_product_tail',
    'euler_products',
    'necklace_exponents',
    'refine',
    'tail_bound',
    'to_fraction',
    'to_interval',
    'working_precision',
    'zeta_even',
]
