from math import prod

import numpy as np
import pytest

from pycwl.numtheory.primes import primorial
from pycwl.settings import Budget
from pycwl.typings import BudgetError, DomainError
from pycwl.windows import (
    ResiduePair, WindowSpec, crt, find_invisible_window, invisible_primes,
    phi, phi_bound, phi_histogram, residue_pair, split_sets, visible,
    z_count_direct, z_count_mobius
)


@pytest.mark.parametrize("a, b, v", [(1, 1, 1), (2, 4, 0), (21, 16, 1)])
def test_visible(a, b, v) -> None:
    assert visible(a, b) == v


def test_visible_rejects_origin_axes() -> None:
    with pytest.raises(DomainError):
        visible(0, 3)


def test_window_spec_validation() -> None:
    with pytest.raises(DomainError):
        WindowSpec(0)
    with pytest.raises(DomainError):
        WindowSpec(2, -1, 0)
    assert list(WindowSpec(2).cells()) == [(1, 1), (1, 2), (2, 1), (2, 2)]


@pytest.mark.parametrize("M, a, b, z", [
    (3, 0, 0, 7),
    (1, 1, 1, 0),
    (2, 0, 0, 3),
    (1, 0, 0, 1),
])
def test_z_counts(M, a, b, z) -> None:
    w = WindowSpec(M, a, b)
    assert z_count_direct(w) == z
    assert z_count_mobius(w) == z


def test_evaluators_agree_on_a_grid() -> None:
    for M in range(1, 5):
        for a in range(40):
            for b in range(40):
                w = WindowSpec(M, a, b)
                assert z_count_direct(w) == z_count_mobius(w), w


@pytest.mark.parametrize("high", [10**5, 10**9])
def test_evaluators_agree_on_random_windows(high) -> None:
    rng = np.random.default_rng(7)
    for M, a, b in zip(rng.integers(1, 13, 300).tolist(),
                       rng.integers(0, high, 300).tolist(),
                       rng.integers(0, high, 300).tolist()):
        w = WindowSpec(M, a, b)
        assert z_count_direct(w) == z_count_mobius(w), w


def test_mobius_sum_and_gcd_divisor_sum_agree() -> None:
    rng = np.random.default_rng(11)
    for M, a, b in zip(rng.integers(1, 9, 200).tolist(),
                       rng.integers(0, 5000, 200).tolist(),
                       rng.integers(0, 5000, 200).tolist()):
        w = WindowSpec(M, a, b)
        assert z_count_mobius(w) == z_count_mobius(w, limit=0), w


@pytest.mark.slow
def test_evaluators_agree_on_the_full_grid() -> None:
    for M in range(1, 7):
        for a in range(501):
            for b in range(501):
                w = WindowSpec(M, a, b)
                assert z_count_direct(w) == z_count_mobius(w), w


@pytest.mark.parametrize("M, a, b, r", [
    (3, 4, 7, (0, 1)),
    (4, 10, 3, (4, 3)),
    (2, 5, 9, (0, 0)),
])
def test_residue_pair(M, a, b, r) -> None:
    assert residue_pair(WindowSpec(M, a, b)) == ResiduePair(*r, M)


def test_residue_pair_validation() -> None:
    with pytest.raises(DomainError):
        ResiduePair(2, 0, 3)


def test_split_sets() -> None:
    assert len(split_sets(ResiduePair(0, 0, 2)).a_set) == 4
    assert len(split_sets(ResiduePair(1, 1, 3)).a_set) == 5
    even = split_sets(ResiduePair(0, 0, 3))
    assert len(even.a_set) == 8
    assert even.b_set == frozenset({(2, 2)})


@pytest.mark.parametrize("M, u, v, value", [
    (3, 0, 1, 7),
    (3, 1, 1, 5),
    (3, 0, 0, 8),
    (1, 0, 0, 1),
    (2, 0, 0, 4),
])
def test_phi(M, u, v, value) -> None:
    assert phi(ResiduePair(u, v, M)) == value


def test_phi_matches_split_sets() -> None:
    for M in range(1, 7):
        P = primorial(M)
        for u in range(P):
            for v in range(0, P, 7 if P > 6 else 1):
                r = ResiduePair(u, v, M)
                assert phi(r) == len(split_sets(r).a_set)
                assert 9 <= phi(r) <= 12 or M != 4


def test_windows_in_one_class_share_split_sets() -> None:
    rng = np.random.default_rng(3)
    for a, b in rng.integers(0, 10**6, (50, 2)).tolist():
        w = WindowSpec(5, a, b)
        r = residue_pair(w)
        shifted = WindowSpec(5, a + 6 * 17, b + 6 * 5)
        assert residue_pair(shifted) == r
        for k, l in split_sets(r).b_set:
            assert visible(a + k, b + l) == 0
        assert z_count_direct(w) <= phi(r)


def test_phi_histogram() -> None:
    assert phi_histogram(1) == {1: 1}
    assert phi_histogram(2) == {4: 1}
    assert phi_histogram(3) == {5: 1, 7: 2, 8: 1}
    h4 = phi_histogram(4)
    assert set(h4) <= {9, 10, 11, 12}
    assert sum(h4.values()) == 36


def test_phi_histogram_is_partition_independent() -> None:
    assert phi_histogram(7, threads=1) == phi_histogram(7, threads=3)
    assert sum(phi_histogram(7).values()) == 30**2


def test_phi_histogram_budget() -> None:
    with pytest.raises(BudgetError):
        phi_histogram(8, budget=Budget(phi_pairs=1000))


def test_phi_bound() -> None:
    assert phi_bound(3) == 8
    assert phi_bound(4) == 15
    for M in range(1, 8):
        assert max(phi_histogram(M)) <= phi_bound(M)


def test_crt() -> None:
    assert crt([2, 3], [3, 5]) == (8, 15)
    assert crt([], []) == (0, 1)
    with pytest.raises(DomainError):
        crt([1, 1], [4, 6])


def test_invisible_primes() -> None:
    assert invisible_primes(2) == [[2, 3], [5, 7]]
    assert invisible_primes(3)[0] == [3, 5, 7]


@pytest.mark.parametrize("M", [2, 3, 4])
def test_find_invisible_window(M) -> None:
    window, modulus = find_invisible_window(M)
    assert window.M == M
    assert z_count_direct(window) == 0
    assert z_count_mobius(window) == 0
    assert modulus == prod(p for row in invisible_primes(M) for p in row)
    assert 0 <= window.a < modulus and 0 <= window.b < modulus


def test_find_invisible_window_limits() -> None:
    with pytest.raises(DomainError):
        find_invisible_window(1)
    with pytest.raises(BudgetError):
        find_invisible_window(5, Budget(crt_side=4))
