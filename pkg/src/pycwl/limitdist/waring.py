"""Counting how many of t events occur, by inclusion-exclusion.

With S_s = Σ_{|J|=s} P(∩_{j∈J} A_j), the number C of events that occur
satisfies E[C(C, s)] = S_s, so

    P(C = r) = Σ_{s>=r} (-1)^{s-r} C(s, r) S_s      (Waring)
    E[c_C]   = Σ_s (Δ^s c)(0) S_s                  (Schuette-Nesbitt)
    E[z^C]   = Σ_s (z - 1)^s S_s.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, List, Sequence, Tuple, Union

from pycwl.typings import DomainError, Real

Number = Union[Fraction, float]


@dataclass(frozen=True)
class MembershipMatrix():
    """t sets over the ground set {0..size-1}; row j is the bitmask of A_j. """
    rows: Tuple[int, ...]
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise DomainError("ground set must be nonempty")
        for row in self.rows:
            if row < 0 or row >> self.size:
                raise DomainError(
                    f"row {row:b} has bits outside a ground set of "
                    f"{self.size}"
                )

    @staticmethod
    def from_sets(sets: Iterable[Iterable[int]], size: int) -> MembershipMatrix:
        return MembershipMatrix(
            tuple(sum(1 << x for x in set(members)) for members in sets),
            size
        )

    @property
    def t(self) -> int:
        return len(self.rows)

    def multiplicity(self, x: int) -> int:
        """Number of sets containing x. """
        return sum((row >> x) & 1 for row in self.rows)


def _stochastic(weights: Sequence[Real], size: int) -> List[Number]:
    if len(weights) != size:
        raise DomainError(
            f"{len(weights)} weights for a ground set of {size}"
        )
    if any(w < 0 for w in weights):
        raise DomainError("weights must be nonnegative")
    if all(isinstance(w, (int, Fraction)) for w in weights):
        exact = [Fraction(w) for w in weights]
        if sum(exact) != 1:
            raise DomainError(f"weights sum to {sum(exact)}, not 1")
        return list(exact)
    values = [float(w) for w in weights]
    if abs(sum(values) - 1) > 1e-12:
        raise DomainError(f"weights sum to {sum(values)}, not 1")
    return list(values)


def binomial_moments(mm: MembershipMatrix,
                     weights: Sequence[Real]) -> List[Number]:
    """[S_0, ..., S_t], by enumerating every subset of the sets. """
    w = _stochastic(weights, mm.size)
    ground = (1 << mm.size) - 1

    def mass(mask: int) -> Number:
        return sum((w[x] for x in range(mm.size) if (mask >> x) & 1),
                   type(w[0])(0))

    moments: List[Number] = []
    for s in range(mm.t + 1):
        total = type(w[0])(0)
        for subset in combinations(mm.rows, s):
            mask = ground
            for row in subset:
                mask &= row
            total += mass(mask)
        moments.append(total)
    return moments


def _waring(moments: Sequence[Number]) -> List[Number]:
    t = len(moments) - 1
    return [
        sum(((-1)**(s - r) * comb(s, r) * moments[s]
             for s in range(r, t + 1)), type(moments[0])(0))
        for r in range(t + 1)
    ]


def waring_distribution(mm: MembershipMatrix,
                        weights: Sequence[Real]) -> List[Number]:
    """P(C = r) for r = 0..t, C the number of sets containing a point drawn
    with the given weights. Exact when all weights are rational. """
    return _waring(binomial_moments(mm, weights))


def direct_distribution(mm: MembershipMatrix,
                        weights: Sequence[Real]) -> List[Number]:
    """P(C = r) by counting memberships point by point. """
    w = _stochastic(weights, mm.size)
    result = [type(w[0])(0)] * (mm.t + 1)
    for x in range(mm.size):
        result[mm.multiplicity(x)] += w[x]
    return result


def exchangeable_distribution(t: int,
                              alpha: Sequence[Real]) -> List[Fraction]:
    """P(C = r) when every s-fold intersection has probability alpha[s]. """
    if len(alpha) != t + 1:
        raise DomainError(f"need alpha(0..{t}), got {len(alpha)} values")
    return _waring([comb(t, s) * Fraction(alpha[s]) for s in range(t + 1)])


def pgf_from_binomial_moments(moments: Sequence[Real], z: Real) -> Number:
    """E[z^C] = Σ_s (z - 1)^s S_s. """
    if all(isinstance(m, (int, Fraction)) for m in moments) and \
            isinstance(z, (int, Fraction)):
        q = Fraction(z)
        return sum((Fraction(m) * (q - 1)**s for s, m in enumerate(moments)),
                   Fraction(0))
    return sum(float(m) * (float(z) - 1)**s for s, m in enumerate(moments))


def schuette_nesbitt(mm: MembershipMatrix, weights: Sequence[Real],
                     c: Sequence[Real]) -> Number:
    """E[c_C] = Σ_s (Δ^s c)(0) S_s for a sequence c_0..c_t. """
    if len(c) != mm.t + 1:
        raise DomainError(f"need c_0..c_{mm.t}, got {len(c)} values")
    moments = binomial_moments(mm, weights)
    total = type(moments[0])(0)
    for s, moment in enumerate(moments):
        difference = sum((-1)**(s - j) * comb(s, j) * c[j]
                         for j in range(s + 1))
        total += difference * moment
    return total


__all__ = [
    'MembershipMatrix',
    'binomial_moments',
    'waring_distribution',
    'direct_distribution',
    'exchangeable_distribution',
    'pgf_from_binomial_moments',
    'schuette_nesbitt',
]
