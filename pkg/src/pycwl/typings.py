from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Literal, Optional, Tuple, Union

ExactRational = Fraction
"""Arbitrary-precision rational, always in lowest terms."""

ArithmeticTable = List[Fraction]
"""Dense table of an arithmetic function. Index 0 is unused; `table[n]` holds
f(n) for 1 <= n <= limit."""

Histogram = Dict[int, int]
"""Map from an integer value to the number of times it was observed."""

Cell = Tuple[int, int]
"""Cell (k, l) of the M x M window frame, 1 <= k, l <= M."""

Real = Union[int, float, Fraction]

AnSumMode = Literal['exact', 'certified']

TailMethod = Literal['accelerated', 'plain']


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class BudgetError(RuntimeError):
    """A configured resource ceiling would be exceeded.

    `required` is what the call would need and `limit` the configured
    ceiling; precision exhaustion also reports the `achieved_width`.
    """

    def __init__(
        self,
        message: str,
        required: Optional[float] = None,
        limit: Optional[float] = None,
        achieved_width: Optional[float] = None,
    ):
        super().__init__(message)
        self.required = required
        self.limit = limit
        self.achieved_width = achieved_width


class CheckFailure(AssertionError):
    """A verification check failed; `counterexample` describes the first
    failing instance."""

    def __init__(self, check: str, counterexample: str):
        super().__init__(f"{check}: {counterexample}")
        self.check = check
        self.counterexample = counterexample


__all__ = [
    'ExactRational',
    'ArithmeticTable',
    'Histogram',
    'Cell',
    'Real',
    'AnSumMode',
    'TailMethod',
    'DomainError',
    'BudgetError',
    'CheckFailure',
]
