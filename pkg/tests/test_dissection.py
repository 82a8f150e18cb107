import pytest

from oracles import eta_product_oracle, overcubic_pair_oracle
from partcong.dissection import (
    check_binomial_reduction,
    check_entry25,
    check_extraction_chain,
    entry25_sides,
)
from partcong.qseries import Domain, congruent, eta_power, extract_ap


def test_entry25_exact():
    rep = check_entry25(500)
    assert rep.holds and rep.modulus is None and rep.T == 500


def test_entry25_sides_against_oracle():
    lhs, rhs = entry25_sides(120)
    assert lhs.tolist() == eta_product_oracle({1: -4}, 121)
    even = eta_product_oracle({2: -14, 4: 14, 8: -4}, 121)
    odd = eta_product_oracle({2: -10, 4: 2, 8: 4}, 120)
    assert rhs.tolist() == [e + (4 * odd[i - 1] if i else 0) for i, e in enumerate(even)]


def test_entry25_halves_are_the_bisection():
    lhs, _ = entry25_sides(200)
    even = eta_product_oracle({1: -14, 2: 14, 4: -4}, 101)
    odd = eta_product_oracle({1: -10, 2: 2, 4: 4}, 100)
    assert extract_ap(lhs, 2, 0).tolist() == even
    assert extract_ap(lhs, 2, 1).tolist() == [4 * x for x in odd]


def test_binomial_reduction():
    assert check_binomial_reduction(300).holds
    assert check_binomial_reduction(200, p=5).holds


def test_binomial_reduction_fails_one_power_up():
    # (q;q)^49 = (q^7;q^7)^7 holds mod 49 but not mod 343
    dom = Domain.mod(343)
    assert not congruent(eta_power(1, 49, 300, dom), eta_power(7, 7, 300, dom), 343).holds


def test_extraction_chain_all_steps():
    checks = check_extraction_chain(300, 256)
    assert len(checks) == 6
    for c in checks:
        assert c.holds, c
        assert c.T == 300


def test_extraction_chain_sensitive_to_modulus():
    # the three-term reduction drops terms with coefficient 256; mod 512 it must fail
    checks = {c.name: c for c in check_extraction_chain(100, 512)}
    assert not checks["bbar(2n) three-term reduction"].holds
    assert checks["bbar(2n) closed form"].holds


def test_final_form_against_oracle():
    bbar = overcubic_pair_oracle(8 * 60 + 3)
    form = eta_product_oracle({1: 10, 2: 6, 4: -4}, 61)
    for n in range(61):
        assert (bbar[8 * n + 2] - 16 * form[n]) % 256 == 0
