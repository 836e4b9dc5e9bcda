from fractions import Fraction

import pytest

from pycwl.correlation import PairOffsets
from pycwl.empirical import (
    ScanConfig, conditional_pmf, convergence_report, dirichlet_error_constant,
    empirical_density_shifted, empirical_pair_expectation, empirical_pmf,
    gcd_value_frequency, registered_checks, residue_joint_frequency,
    total_variation
)
from pycwl.limitdist import pmf
from pycwl.settings import Budget
from pycwl.typings import DomainError
from pycwl.windows import ResiduePair, WindowSpec, z_count_direct


def test_scan_config_validation() -> None:
    with pytest.raises(DomainError):
        ScanConfig(0)
    with pytest.raises(DomainError):
        ScanConfig(10, 0)


def test_empirical_pmf_counts_every_base_point() -> None:
    result = empirical_pmf(3, ScanConfig(100))
    assert result.total == 10_000
    assert sum(result.counts.values()) == 10_000
    assert not result.sampled
    assert sum(result.frequencies.values()) == 1
    assert result.standard_error(5) == 0.0


def test_empirical_pmf_matches_window_counts() -> None:
    n, M = 12, 3
    expected = {}
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            z = z_count_direct(WindowSpec(M, a, b))
            expected[z] = expected.get(z, 0) + 1
    assert empirical_pmf(M, ScanConfig(n)).counts == dict(sorted(
        expected.items()
    ))


def test_empirical_pmf_is_worker_independent() -> None:
    one = empirical_pmf(3, ScanConfig(150, 1))
    two = empirical_pmf(3, ScanConfig(150, 2))
    assert one == two


def test_sampled_scan() -> None:
    budget = Budget(scan_cells=100, scan_samples=1000)
    first = empirical_pmf(2, ScanConfig(50, seed=4), budget)
    again = empirical_pmf(2, ScanConfig(50, seed=4), budget)
    assert first.sampled and first.total == 1000
    assert first == again
    assert any(first.standard_error(r) > 0 for r in first.counts)


def test_empirical_density_shifted() -> None:
    assert empirical_density_shifted(0, 0, 1) == 1
    assert empirical_density_shifted(0, 0, 100) == Fraction(6087, 10_000)
    assert empirical_density_shifted(0, 0, 1000, threads=2) == \
        Fraction(608_383, 1_000_000)
    assert abs(float(empirical_density_shifted(5, 9, 1000)) - 0.6079) < 0.01
    with pytest.raises(DomainError):
        empirical_density_shifted(-1, 0, 10)


def test_empirical_pair_expectation() -> None:
    value = empirical_pair_expectation(PairOffsets(0, 0, 1, 0), 2000)
    assert abs(float(value) - 0.3226) < 0.01


def test_gcd_value_frequency() -> None:
    assert abs(float(gcd_value_frequency(2, 2000)) - 0.152) < 0.005
    assert gcd_value_frequency(11, 10) == 0
    with pytest.raises(DomainError):
        gcd_value_frequency(0, 10)


def test_residue_joint_frequency() -> None:
    assert residue_joint_frequency([2, 3], [(0, 1), (2, 0)], 6000) == \
        Fraction(1, 36)
    with pytest.raises(DomainError):
        residue_joint_frequency([2, 2], [(0, 0), (1, 1)], 10)
    with pytest.raises(DomainError):
        residue_joint_frequency([3], [(3, 0)], 10)


def test_conditional_pmf() -> None:
    odd = conditional_pmf(3, ResiduePair(1, 1, 3), ScanConfig(60))
    assert odd.class_frequency == Fraction(1, 4)
    assert odd.total == 900
    assert max(odd.counts) <= 5
    trivial = conditional_pmf(2, ResiduePair(0, 0, 2), ScanConfig(40))
    assert trivial.counts == empirical_pmf(2, ScanConfig(40)).counts
    with pytest.raises(DomainError):
        conditional_pmf(4, ResiduePair(0, 0, 3), ScanConfig(10))


def test_total_variation() -> None:
    assert total_variation({0: 0.5, 1: 0.5}, {1: 1}) == 0.5
    assert total_variation({2: Fraction(1)}, {2: 1.0}) == 0


def test_convergence_report() -> None:
    assert 'dirichlet' in registered_checks()
    report = convergence_report('dirichlet', [1000, 100])
    assert [row.n for row in report] == [100, 1000]
    assert report[1].gap < report[0].gap
    assert 0 < dirichlet_error_constant(report) < 1
    with pytest.raises(DomainError):
        convergence_report('riemann', [10])


def test_class_frequency_probe() -> None:
    report = convergence_report('class-frequency-3', [10, 11])
    assert report[0].gap == 0
    assert report[1].gap > 0


@pytest.mark.slow
def test_empirical_pmf_approaches_the_limit() -> None:
    empirical = empirical_pmf(2, ScanConfig(5000, 4))
    limit = dict(enumerate(pmf(2).midpoints))
    assert total_variation(empirical.frequencies, limit) < 0.01


@pytest.mark.slow
@pytest.mark.parametrize("M", [1, 2, 3, 4])
def test_empirical_pmf_at_large_n(M) -> None:
    empirical = empirical_pmf(M, ScanConfig(20_000, 4))
    limit = dict(enumerate(pmf(M).midpoints))
    assert total_variation(empirical.frequencies, limit) < 0.01


@pytest.mark.slow
def test_empirical_gap_shrinks_with_n() -> None:
    limit = dict(enumerate(pmf(2).midpoints))
    small, large = (
        total_variation(empirical_pmf(2, ScanConfig(n, 4)).frequencies, limit)
        for n in (500, 5000)
    )
    assert large < small
