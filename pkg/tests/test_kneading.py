from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betaflow import LOWER, UPPER, Params, expansion, golden, max_real_root_in
from betaflow.errors import NotAdmissible
from betaflow.kneading import (in_omega_minus, in_omega_plus, is_sft, kneading_invariants,
                               kneading_polynomial, parry_polynomial, search_alpha, solve_parry_beta,
                               system_from_kneading_pair, validate_kneading_pair)
from betaflow.numerics import poly_eval, sign_of
from betaflow.words import Order, compare_prefixes, lex_compare

from conftest import QUARTIC, QUINTIC, word
from systems import sft_systems

SYSTEMS = sft_systems(4)


def test_quartic_invariants(quartic):
    pair = kneading_invariants(quartic)
    assert pair.lower == word("0(10)") and pair.upper == word("1(0001)")


def test_golden_invariants(golden_greedy):
    pair = kneading_invariants(golden_greedy)
    assert pair.lower == word("0(10)") and pair.upper == word("1(0)")


def test_quintic_lower_invariant(quintic):
    assert kneading_invariants(quintic).lower == word("011(100)")


def test_omega_membership(golden_greedy, quartic):
    assert in_omega_plus(word("(0)"), golden_greedy)
    assert in_omega_plus(word("(0001)"), quartic)
    assert not in_omega_plus(word("(1)"), golden_greedy)


@pytest.mark.parametrize("lower, upper, reason", [
    ("0(10)", "1(0001)", None),
    ("011(100)", "100(011)", "COND4"),
    ("1(0)", "0(1)", "COND1"),
    ("(0)", "(10)", "COND2"),
    ("(01)", "1(0)", None),
])
def test_validation(lower, upper, reason):
    out = validate_kneading_pair(word(lower), word(upper))
    assert out.valid is (reason is None)
    assert out.reason == reason


def test_is_sft(quartic, quintic, golden_greedy):
    assert is_sft(quartic) is True
    assert is_sft(quintic) is False
    assert is_sft(golden_greedy) is False


def test_parry_inversion_examples():
    assert solve_parry_beta(word("(10)")) == golden()
    assert solve_parry_beta(word("11(100)")).minpoly == QUINTIC
    assert parry_polynomial(word("11(100)")) in (list(QUINTIC), tuple(QUINTIC))


def test_parry_inversion_against_bisection():
    beta = solve_parry_beta(word("(1000)"))
    # 1 = z^-1 + z^-5 + ... clears to z^4 - z^3 - 1
    coeffs = (-1, 0, 0, -1, 1)
    lo, hi = Fraction(1), Fraction(2)
    while hi - lo > Fraction(1, 10 ** 12):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if poly_eval(coeffs, mid) < 0 else (lo, mid)
    assert lo <= Fraction(float(beta)) + Fraction(1, 10 ** 11) and Fraction(float(beta)) <= hi + Fraction(1, 10 ** 11)


def test_parry_rejects_non_admissible_words():
    with pytest.raises(NotAdmissible):
        solve_parry_beta(word("(01)"))


def test_quartic_solution():
    params = system_from_kneading_pair(word("0(10)"), word("1(0001)"))
    assert abs(float(params.beta) - 1.4656) < 5e-4
    assert abs(float(params.alpha) - 0.1288) < 5e-4
    assert all(c == 0 for c in _remainder(QUARTIC, params.beta_real.minpoly))
    b = params.beta
    assert sign_of(params.alpha - (1 - b * b / (b + 1))) == 0


def _remainder(f, g):
    import sympy
    x = sympy.symbols("x")
    pf = sympy.Poly(list(reversed(f)), x)
    pg = sympy.Poly(list(reversed(g)), x)
    return pf.rem(pg).all_coeffs()


def test_golden_pair_gives_greedy_golden():
    params = system_from_kneading_pair(word("0(10)"), word("1(0)"))
    assert params.beta_real == golden() and params.alpha == 0


def test_kneading_polynomial_vanishes_at_beta(quartic):
    poly = kneading_polynomial(word("0(10)"), word("1(0001)"))
    assert sign_of(poly_eval(poly, quartic.beta)) == 0


def test_search_alpha_quartic(quartic):
    tol = Fraction(1, 10 ** 9)
    alpha = search_alpha(quartic.beta_real, word("1(0001)"), UPPER, tol)
    assert abs(float(alpha) - float(quartic.alpha)) <= 2 * float(tol)


def test_search_alpha_zero():
    beta = Fraction(3, 2)
    target = expansion(Params(beta, 0), Fraction(2, 3), UPPER)
    assert search_alpha(beta, target, UPPER) == 0


def test_search_alpha_golden_lower():
    alpha = search_alpha(golden(), word("0(10)"), LOWER, Fraction(1, 10 ** 6))
    assert abs(float(alpha)) < 1e-5


@pytest.mark.parametrize("lower, upper, params", SYSTEMS, ids=[f"{a}-{b}" for a, b, _ in SYSTEMS])
def test_generated_systems_satisfy_kneading_order(lower, upper, params):
    pair = kneading_invariants(params)
    assert (pair.lower, pair.upper) == (lower, upper)
    assert lex_compare(upper.shift(1), lower) != Order.GT
    assert lex_compare(lower, upper) == Order.LT
    assert lex_compare(upper, lower.shift(1)) != Order.GT
    assert in_omega_plus(upper, params) and in_omega_minus(lower, params)
    assert is_sft(params)


@pytest.mark.parametrize("poly", [(-1, -1, 1), QUINTIC, QUARTIC])
def test_parry_identity(poly):
    beta = max_real_root_in(poly, 1, 2)
    top = expansion(Params(beta, 0), 1, LOWER, require_period=True)
    assert solve_parry_beta(top) == beta


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=60),
       st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=60))
def test_upper_kneading_increases_with_alpha(a1, a2):
    if a1 == a2:
        return
    a1, a2 = min(a1, a2), max(a1, a2)
    beta = Fraction(3, 2)
    w1 = expansion(Params(beta, a1), Params(beta, a1).p, UPPER, 80).prefix(80)
    w2 = expansion(Params(beta, a2), Params(beta, a2).p, UPPER, 80).prefix(80)
    assert compare_prefixes(w1, w2) == Order.LT
