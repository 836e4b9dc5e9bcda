from fractions import Fraction
from math import comb

import numpy as np
import pytest

from pycwl.limitdist import (
    MembershipMatrix, binomial_moments, direct_distribution,
    exchangeable_distribution, pgf_from_binomial_moments, schuette_nesbitt,
    waring_distribution
)
from pycwl.typings import DomainError


def uniform(n):
    return [Fraction(1, n)] * n


def test_membership_matrix() -> None:
    mm = MembershipMatrix.from_sets([{0, 1}, {1, 2}, {1}], 4)
    assert mm.t == 3
    assert [mm.multiplicity(x) for x in range(4)] == [1, 3, 1, 0]
    with pytest.raises(DomainError):
        MembershipMatrix((1 << 5, ), 4)
    with pytest.raises(DomainError):
        MembershipMatrix((), 0)


def test_binomial_moments() -> None:
    mm = MembershipMatrix.from_sets([{0, 1}, {1, 2}, {1}], 4)
    moments = binomial_moments(mm, uniform(4))
    assert moments[0] == 1
    assert moments[1] == Fraction(5, 4)
    assert moments[3] == Fraction(1, 4)


def test_waring_matches_direct_count() -> None:
    mm = MembershipMatrix.from_sets([{0, 1}, {1, 2}, {1}], 4)
    expected = [Fraction(1, 4), Fraction(1, 2), Fraction(0), Fraction(1, 4)]
    assert waring_distribution(mm, uniform(4)) == expected
    assert direct_distribution(mm, uniform(4)) == expected


def test_waring_on_random_families() -> None:
    rng = np.random.default_rng(11)
    for _ in range(20):
        size = int(rng.integers(1, 9))
        t = int(rng.integers(1, 7))
        rows = tuple(int(x) for x in rng.integers(0, 1 << size, t))
        mm = MembershipMatrix(rows, size)
        raw = [int(x) for x in rng.integers(1, 10, size)]
        weights = [Fraction(x, sum(raw)) for x in raw]
        assert waring_distribution(mm, weights) == \
            direct_distribution(mm, weights)


def test_float_weights() -> None:
    mm = MembershipMatrix.from_sets([{0}, {0, 1}], 2)
    dist = waring_distribution(mm, [0.25, 0.75])
    assert dist == pytest.approx([0.0, 0.75, 0.25])


def test_weights_are_validated() -> None:
    mm = MembershipMatrix.from_sets([{0}], 2)
    with pytest.raises(DomainError):
        waring_distribution(mm, [Fraction(1, 2)])
    with pytest.raises(DomainError):
        waring_distribution(mm, [Fraction(1, 2), Fraction(1, 3)])
    with pytest.raises(DomainError):
        waring_distribution(mm, [Fraction(3, 2), Fraction(-1, 2)])


def test_schuette_nesbitt() -> None:
    mm = MembershipMatrix.from_sets([{0, 1}, {1, 2}, {1}], 4)
    dist = direct_distribution(mm, uniform(4))
    c = [Fraction(k * k + 1) for k in range(4)]
    assert schuette_nesbitt(mm, uniform(4), c) == \
        sum(p * ck for p, ck in zip(dist, c))
    with pytest.raises(DomainError):
        schuette_nesbitt(mm, uniform(4), c[:2])


def test_pgf_from_binomial_moments() -> None:
    mm = MembershipMatrix.from_sets([{0, 1}, {1, 2}, {1}], 4)
    moments = binomial_moments(mm, uniform(4))
    dist = direct_distribution(mm, uniform(4))
    z = Fraction(1, 3)
    assert pgf_from_binomial_moments(moments, z) == \
        sum(p * z**r for r, p in enumerate(dist))
    assert pgf_from_binomial_moments(moments, 1) == 1
    assert pgf_from_binomial_moments(moments, 0.5) == \
        pytest.approx(float(pgf_from_binomial_moments(moments,
                                                      Fraction(1, 2))))


def test_exchangeable_distribution() -> None:
    t, p = 5, Fraction(1, 3)
    binomial = [comb(t, r) * p**r * (1 - p)**(t - r) for r in range(t + 1)]
    assert exchangeable_distribution(t, [p**s for s in range(t + 1)]) == \
        binomial
    with pytest.raises(DomainError):
        exchangeable_distribution(t, [1, p])
