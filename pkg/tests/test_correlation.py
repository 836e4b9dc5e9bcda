from fractions import Fraction

import pytest
from mpmath import mp

from pycwl.correlation import (
    PairOffsets, UpsilonLinear, a_n_normalized, a_n_sum, a_n_sum_direct,
    avg_correlation, concentration_bound, offset_gcd_weights,
    pair_expectation, rho, rho_grid, rho_lower_bound, rho_of_gcd,
    second_moment, upsilon_weighted_average, variance_ratio
)
from pycwl.limitdist import pmf
from pycwl.numtheory.certified import constants
from pycwl.settings import Budget
from pycwl.typings import BudgetError, DomainError


def test_pair_offsets() -> None:
    assert PairOffsets(1, 2, 4, 8).gcd == 3
    assert PairOffsets(3, 3, 3, 3).gcd == 0
    with pytest.raises(DomainError):
        PairOffsets(-1, 0, 0, 0)


def test_pair_expectation() -> None:
    c = constants(1e-12)
    assert pair_expectation(PairOffsets(2, 2, 2, 2)).overlaps(c.inv_zeta2)
    assert pair_expectation(PairOffsets(0, 0, 0, 1)).overlaps(
        c.feller_tornier
    )
    two = pair_expectation(PairOffsets(0, 0, 2, 4))
    assert two.overlaps(c.feller_tornier * Fraction(3, 2))


def test_rho_values() -> None:
    assert rho(PairOffsets(1, 1, 1, 1)).contains(1)
    assert rho(PairOffsets(0, 0, 1, 0)).mid == pytest.approx(-0.196941,
                                                             abs=1e-5)
    assert rho_of_gcd(2).mid == pytest.approx(0.479857, abs=1e-4)
    assert rho_of_gcd(4).overlaps(rho_of_gcd(2))
    assert rho_lower_bound().overlaps(rho_of_gcd(1))
    with pytest.raises(DomainError):
        rho_of_gcd(0)


def test_rho_is_a_correlation() -> None:
    lower = rho_lower_bound()
    for g in range(1, 60):
        value = rho_of_gcd(g)
        assert value.width <= 1e-10
        assert lower.lo <= value.hi and value.lo <= 1


def test_rho_grid() -> None:
    grid = rho_grid(16)
    assert len(grid) == 16 and all(len(row) == 16 for row in grid)
    assert grid[0][0].contains(1)
    assert grid[3][5].overlaps(grid[5][3])
    smallest = min((value for row in grid for value in row),
                   key=lambda v: v.mid)
    assert smallest.overlaps(rho_lower_bound())
    with pytest.raises(DomainError):
        rho_grid(0)


def test_offset_gcd_weights() -> None:
    for N in range(1, 9):
        weights = offset_gcd_weights(N)
        assert weights[0] == N * N
        assert sum(weights.values()) == N**4


@pytest.mark.parametrize("N", [1, 2, 3, 5, 8])
def test_a_n_sum_matches_the_literal_sum(N) -> None:
    assert a_n_sum(N, 'exact') == a_n_sum_direct(N)


@pytest.mark.parametrize("N", [1, 2, 7, 30])
def test_a_n_sum_modes_agree(N) -> None:
    exact = a_n_sum(N, 'exact').enclose(1e-10)
    assert exact.overlaps(a_n_sum(N, 'certified', 1e-10))


def test_a_n_sum_one() -> None:
    linear = a_n_sum(1, 'exact')
    assert linear == UpsilonLinear(Fraction(1), Fraction(0))
    value = a_n_sum(1, 'certified', 1e-10)
    assert f"{value.mid:.5f}" == "1.88426"
    c = constants(1e-12)
    assert (c.feller_tornier * value).overlaps(c.inv_zeta2)


def test_a_n_sum_modes_and_budget() -> None:
    with pytest.raises(DomainError):
        a_n_sum(3, 'fast')
    with pytest.raises(DomainError):
        a_n_sum(0)
    with pytest.raises(BudgetError):
        a_n_sum(100, budget=Budget(gcd_terms=100))


@pytest.mark.parametrize("M", [1, 2, 3])
def test_second_moment_matches_pmf(M) -> None:
    assert second_moment(M).overlaps(pmf(M).moment(2))


def test_variance_ratio() -> None:
    with mp.workprec(200):
        zeta2_minus_one = mp.pi**2 / 6 - 1
    assert variance_ratio(1).contains(zeta2_minus_one)
    ten = variance_ratio(10)
    hundred = variance_ratio(100)
    assert hundred.hi < ten.lo
    assert hundred.lo >= 0
    assert hundred.hi < 0.01


def test_avg_correlation() -> None:
    assert abs(avg_correlation(200).mid) < 0.05
    with pytest.raises(DomainError):
        avg_correlation(1)


@pytest.mark.slow
def test_avg_correlation_vanishes() -> None:
    assert abs(avg_correlation(1000).mid) < 0.01
    assert a_n_normalized(1000).mid == pytest.approx(1, abs=0.02)


def test_a_n_normalized_tends_to_one() -> None:
    gaps = [a_n_normalized(N).mid - 1 for N in (10, 40, 160)]
    assert all(g >= 0 for g in gaps)
    assert gaps[0] > gaps[2]


def test_concentration_bound() -> None:
    small = concentration_bound(10, Fraction(1, 10))
    large = concentration_bound(100, Fraction(1, 10))
    assert large.hi < small.lo
    assert large.lo >= 0
    with pytest.raises(DomainError):
        concentration_bound(10, 0)


def test_upsilon_weighted_average() -> None:
    c = constants(1e-12)
    limit = (c.inv_zeta2 * c.inv_zeta2_f).mid
    assert limit == pytest.approx(1.145494, abs=1e-6)
    ones = upsilon_weighted_average(2000, lambda x, y: x * 0 + 1)
    assert ones == pytest.approx(limit, abs=0.02)
    tent = upsilon_weighted_average(2000, lambda x, y: (1 - x) * (1 - y))
    assert tent == pytest.approx(0.2864, abs=0.01)
    with pytest.raises(DomainError):
        upsilon_weighted_average(0, lambda x, y: x)


@pytest.mark.parametrize("x0, x1, y0, y1", [
    (0.25, 0.75, 0.5, 1.0),
    (0.0, 0.5, 0.0, 0.5),
    (0.1, 0.9, 0.3, 0.6),
])
def test_upsilon_weighted_average_of_a_rectangle(x0, x1, y0, y1) -> None:
    c = constants(1e-12)
    limit = (c.inv_zeta2 * c.inv_zeta2_f).mid * (x1 - x0) * (y1 - y0)

    def rectangle(x, y):
        return (x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)

    assert upsilon_weighted_average(1000, rectangle) == \
        pytest.approx(limit, abs=0.02)
