from fractions import Fraction

import pytest
from mpmath import iv, mp

from pycwl.numtheory.certified import (
    CertifiedValue, certified_sum, choose_trunc_prime, constants,
    euler_product_tail, euler_products, necklace_exponents, refine,
    tail_bound, to_fraction, working_precision, zeta_even
)
from pycwl.settings import Budget
from pycwl.typings import BudgetError, DomainError


def six_over_pi2():
    with mp.workprec(200):
        return 6 / mp.pi**2


def test_working_precision_restores() -> None:
    before = iv.prec
    with working_precision(300):
        assert iv.prec == 300
    assert iv.prec == before
    with pytest.raises(KeyError):
        with working_precision(100):
            raise KeyError()
    assert iv.prec == before


def test_exact_values() -> None:
    third = CertifiedValue.exact(Fraction(1, 3))
    assert third.contains(Fraction(1, 3))
    assert 0 < third.width < 1e-15
    half = CertifiedValue.exact(Fraction(1, 2))
    assert half.width == 0
    assert half.lo_fraction == Fraction(1, 2)
    assert CertifiedValue.exact(0).is_zero


def test_decimal_rounds_outward() -> None:
    third = CertifiedValue.exact(Fraction(1, 3))
    lo, hi = third.decimal(10)
    assert Fraction(lo) <= third.lo_fraction
    assert third.hi_fraction <= Fraction(hi)
    assert Fraction(lo) < Fraction(1, 3) < Fraction(hi)
    neg_lo, neg_hi = (-third).decimal(10)
    assert Fraction(neg_lo) == -Fraction(hi)
    assert Fraction(neg_hi) == -Fraction(lo)
    assert CertifiedValue.exact(0).decimal() == ("0", "0")


def test_arithmetic_encloses_exact_results() -> None:
    a = CertifiedValue.exact(Fraction(1, 3))
    b = CertifiedValue.exact(Fraction(2, 7))
    assert (a + b).contains(Fraction(13, 21))
    assert (a - b).contains(Fraction(1, 21))
    assert (a * b).contains(Fraction(2, 21))
    assert (a / b).contains(Fraction(7, 6))
    assert (1 - a).contains(Fraction(2, 3))
    assert (1 / a).contains(3)
    assert (a**2).contains(Fraction(1, 9))
    assert certified_sum([a, a, a]).contains(1)


def test_overlap_and_hull() -> None:
    a = CertifiedValue(mp.mpf(0), mp.mpf(1))
    b = CertifiedValue(mp.mpf("0.5"), mp.mpf(2))
    c = CertifiedValue(mp.mpf(3), mp.mpf(4))
    assert a.overlaps(b) and not a.overlaps(c)
    assert CertifiedValue.hull([a, c]).encloses(b)
    assert b.within(0, 2) and not b.within(1, 2)
    with pytest.raises(ValueError):
        CertifiedValue(mp.mpf(1), mp.mpf(0))


def test_to_fraction() -> None:
    assert to_fraction(0.5) == Fraction(1, 2)
    assert to_fraction(mp.mpf(3)) == 3
    assert to_fraction(Fraction(2, 3)) == Fraction(2, 3)


def test_refine_gives_up_at_the_ceiling() -> None:
    with pytest.raises(BudgetError) as info:
        refine(lambda: iv.mpf([0, 1]), 1e-3, 64, 128, "unit interval")
    assert info.value.achieved_width == 1.0


@pytest.mark.parametrize("k, reference", [
    (1, lambda: mp.pi**2 / 6),
    (2, lambda: mp.pi**4 / 90),
    (3, lambda: mp.pi**6 / 945),
])
def test_zeta_even(k, reference) -> None:
    value = zeta_even(k, 1e-20)
    assert value.width <= 1e-20
    with mp.workprec(200):
        assert value.contains(reference())


def test_necklace_exponents() -> None:
    assert necklace_exponents(1, 4) == [1, 0, 0, 0]
    assert necklace_exponents(2, 4) == [2, 1, 2, 3]
    assert necklace_exponents(3, 3) == [3, 3, 8]


def test_tail_bound() -> None:
    assert tail_bound(0, 3) == 0
    assert tail_bound(1, 3) == 0
    assert tail_bound(2, 3, 'plain') == Fraction(9, 7)
    assert 0 < tail_bound(4, 5) < tail_bound(4, 5, 'plain')
    with pytest.raises(DomainError):
        tail_bound(9, 3)


def test_choose_trunc_prime() -> None:
    N = choose_trunc_prime(3, {4: 1.0}, 1e-10)
    assert N >= 3
    assert float(tail_bound(4, N)) <= 1e-10
    with pytest.raises(BudgetError):
        choose_trunc_prime(1, {1: 1.0}, 1e-10, 'plain',
                           Budget(trunc_prime=1000))


def test_euler_products_share_the_truncation_prime() -> None:
    products = euler_products(2, [0, 1, 2, 4], 101)
    assert products[0].finite == 1
    assert products[4].finite == 0
    assert all(p.trunc_prime == 101 for p in products.values())
    assert products[1].value.contains(six_over_pi2())


def test_euler_product_tail_exact_cases() -> None:
    assert euler_product_tail(2, 0).lo == 1
    assert euler_product_tail(2, 0).width == 0
    assert euler_product_tail(2, 4).is_zero
    assert euler_product_tail(3, 9).is_zero
    with pytest.raises(DomainError):
        euler_product_tail(2, 5)


def test_euler_product_tail_values() -> None:
    inv_zeta2 = euler_product_tail(2, 1, 1e-12)
    assert inv_zeta2.width <= 1e-12
    assert inv_zeta2.contains(six_over_pi2())
    assert euler_product_tail(1, 1, 1e-12).contains(six_over_pi2())
    feller = euler_product_tail(2, 2, 1e-10)
    assert f"{feller.mid:.4f}" == "0.3226"


@pytest.mark.parametrize("M, s", [(2, 1), (2, 2), (3, 4), (5, 7)])
def test_euler_product_tail_nests_as_eps_shrinks(M, s) -> None:
    tolerances = (1e-4, 1e-8, 1e-12)
    values = [euler_product_tail(M, s, eps) for eps in tolerances]
    for value, eps in zip(values, tolerances):
        assert value.width <= eps
    for wide, narrow in zip(values, values[1:]):
        assert wide.overlaps(narrow)
        assert wide.lo - narrow.width <= narrow.lo
        assert narrow.hi <= wide.hi + narrow.width


def test_tail_methods_agree() -> None:
    plain = euler_product_tail(3, 4, 1e-4, 'plain')
    accelerated = euler_product_tail(3, 4, 1e-10)
    assert plain.width <= 1e-4
    assert plain.encloses(accelerated) or plain.overlaps(accelerated)


def test_constants() -> None:
    c = constants(1e-6)
    assert max(c.inv_zeta2.width, c.feller_tornier.width,
               c.inv_zeta2_f.width) <= 1e-6
    assert f"{c.inv_zeta2.mid:.4f}" == "0.6079"
    assert f"{c.feller_tornier.mid:.4f}" == "0.3226"
    assert f"{c.inv_zeta2_f.mid:.5f}" == "1.88426"
    assert c.inv_zeta2.contains(six_over_pi2())
    assert (c.inv_zeta2_f * c.feller_tornier).overlaps(c.inv_zeta2)


def test_constants_rejects_bad_eps() -> None:
    with pytest.raises(DomainError):
        constants(0.0)
