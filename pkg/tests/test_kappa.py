import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_periodic
from secondbest.cf import CFExpansion, IndexOutOfRange, expand, parse_cf, residue_of_position, value
from secondbest.exactnum import compare, compare_mixed, sqrt
from secondbest.kappa import (
    GOLDEN_K,
    EmptyPeriod,
    k_exact,
    k_squared,
    kappa_at,
    kappa_coefficients,
    kappa_limits,
    min_kappa_coefficient,
    reduced_forms,
)

ALPHA0_CF = parse_cf("2;(1,1,3,1,1,1,1,3)")
ROOT = 13 * sqrt(173)


def over_root(n):
    return n / ROOT


def test_k_exact_anchors():
    assert k_exact(CFExpansion(1, (), (1,))).k_value == 4 / sqrt(5)
    assert k_exact(CFExpansion(1, (), (1,))).special_case == "golden"
    assert k_exact(parse_cf("2;(1,1,3)")).k_value == 4 / sqrt(17)
    prof = k_exact(ALPHA0_CF)
    assert prof.k_value == over_root(164)
    assert prof.special_case == "generic"
    assert prof.minimizers() == [(0, "kappa4"), (3, "kappa4")]


def test_alpha0_limits():
    assert kappa_limits(ALPHA0_CF, 3) == tuple(map(over_root, (167, 169, 164)))
    assert kappa_limits(ALPHA0_CF, 0) == tuple(map(over_root, (169, 167, 164)))
    for r in (0, 3):
        lim = kappa_limits(ALPHA0_CF, r)
        assert lim.kappa4 < lim.kappa1 and lim.kappa4 < lim.kappa2


def test_sqrt17_kappa4():
    cf = parse_cf("2;(1,1,3)")
    assert kappa_limits(cf, residue_of_position(cf, 2)).kappa4 == 4 / sqrt(17)


def test_golden_kappa4_tends_to_limit():
    golden = CFExpansion(1, (), (1,))
    vals = [kappa_at(golden, n, 4) for n in range(1, 40)]
    # alpha*_{n-1} = F_{n-1}/F_n alternates around phi - 1, so kappa4 alternates around 4/sqrt(5)
    signs = [compare(v, GOLDEN_K) for v in vals]
    assert all(s == (1 if n % 2 else -1) for n, s in enumerate(signs, start=1))
    errs = [abs(v - GOLDEN_K) for v in vals]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < Fraction(1, 10**15)


def test_kappa1_positive_at_digit_one(rng):
    for _ in range(10):
        cf = random_periodic(rng)
        for n in range(1, 15):
            if cf.digit(n) == 1:
                assert kappa_at(cf, n, 1) > 0


def test_kappa_at_errors():
    with pytest.raises(IndexOutOfRange):
        kappa_at(ALPHA0_CF, 0, 4)
    with pytest.raises(ValueError):
        kappa_at(ALPHA0_CF, 3, 3)
    with pytest.raises(EmptyPeriod):
        k_exact(CFExpansion(2, (3,)))
    with pytest.raises(EmptyPeriod):
        kappa_limits(CFExpansion(2, (3,)), 0)


def test_kappa_at_converges_geometrically(rng):
    cfs = [ALPHA0_CF, parse_cf("0;4,(2,1,3)")] + [random_periodic(rng) for _ in range(2)]
    for cf in cfs:
        L, m = len(cf.period), len(cf.preperiod)
        for residue in range(L):
            lim = kappa_limits(cf, residue)
            for which, target in zip((1, 2, 4), lim):
                # exact differences: kappa_n has huge coefficients that cancel
                errs = [
                    abs(kappa_at(cf, n, which) - target)
                    for n in range(m + 2, 81)
                    if n % L == residue
                ]
                assert errs[-1] < Fraction(1, 10**20)
                assert all(b < a * Fraction(1, 2) for a, b in zip(errs[1:], errs[2:]))


def test_alpha0_kappa1_approaches_limit():
    n = 3 + 8 * 9
    assert abs(float(kappa_at(ALPHA0_CF, n, 1)) - 167 / (13 * 173**0.5)) < 1e-12


def test_reduced_forms_match_limit_tails():
    D, forms = reduced_forms(ALPHA0_CF.period)
    assert D == 29237 == 13**2 * 173
    D, coeffs = kappa_coefficients(ALPHA0_CF.period)
    assert {j: tuple(c) for j, c in coeffs.items()} == {2: (167, 169, 164), 7: (169, 167, 164)}
    assert min_kappa_coefficient(ALPHA0_CF.period) == (164, 1, 29237)
    assert k_squared(ALPHA0_CF.period) == Fraction(164**2, 29237)
    assert k_squared((1,)) == Fraction(16, 5)
    assert k_squared((1, 1, 3)) == Fraction(16, 17)


def periods_up_to(n, digits=(1, 2, 3)):
    for length in range(1, n + 1):
        yield from itertools.product(digits, repeat=length)


def test_two_routes_agree_exhaustive():
    # QuadSurd limits against integer reduced forms on every period of length <= 5
    for per in periods_up_to(5):
        cf = CFExpansion(0, (), per)
        k = k_exact(cf).k_value
        k2 = k_squared(per)
        assert k * k == k2
        assert k > 0 and compare_mixed(k, GOLDEN_K) <= 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=6))
def test_two_routes_agree_random(per):
    k = k_exact(CFExpansion(1, (), tuple(per))).k_value
    assert k * k == k_squared(per)


def test_profile_invariants(rng):
    for _ in range(30):
        prof = k_exact(random_periodic(rng))
        if prof.special_case == "golden":
            assert prof.k_value == GOLDEN_K
            continue
        vals = [v for lim in prof.limits.values() for v in lim]
        assert all(v > 0 for v in vals)
        assert prof.k_value == min(vals)
        assert all(prof.cf.period[j] >= 2 for j in range(len(prof.cf.period)) if residue_of_position(prof.cf, j) in prof.limits)


def test_equivalence_invariance(rng):
    for _ in range(50):
        cf = random_periodic(rng)
        base = k_exact(cf).k_value
        per = cf.period
        k = rng.randrange(len(per))
        rot = CFExpansion(rng.randint(-4, 4), (), per[k:] + per[:k])
        pre = tuple(rng.randint(1, 7) for _ in range(rng.randint(1, 4)))
        longer = CFExpansion(rng.randint(-4, 4), pre + cf.preperiod, per)
        assert k_exact(rot).k_value == base
        assert k_exact(longer).k_value == base
        # a unimodular transform gives an equivalent number
        x = value(cf)
        assert k_exact(expand((2 * x + 1) / (x + 1))).k_value == base


def test_profile_json():
    js = k_exact(ALPHA0_CF).to_json()
    assert js["k"] == {"exact": "(164*sqrt(173))/2249", "radical": "164/(13√173)", "decimal": "0.959129931447"}
    assert [l["residue"] for l in js["limits"]] == [0, 3]
