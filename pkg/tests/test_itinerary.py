from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from betaflow import LOWER, UPPER, Params, apply_map, expansion, orbit, project_pi
from betaflow.errors import InvalidParams
from betaflow.itinerary import WordPrefix, critical_point, project_prefix
from betaflow.numerics import sign_of
from betaflow.words import Order, lex_compare, reflect

from conftest import word

unit = st.fractions(min_value=0, max_value=1, max_denominator=10 ** 6)


def test_region_is_checked():
    with pytest.raises(InvalidParams):
        Params(Fraction(3, 2), Fraction(7, 10))
    with pytest.raises(InvalidParams):
        Params(Fraction(5, 2), 0)


def test_golden_map_values(golden_greedy):
    g = golden_greedy
    assert abs(float(apply_map(g, 1)) - 0.618033988749) < 1e-12
    assert sign_of(apply_map(g, g.scalar(0))) == 0
    assert sign_of(critical_point(g) - 1 / g.beta) == 0


def test_quartic_one_maps_to_critical_point(quartic):
    assert sign_of(apply_map(quartic, quartic.scalar(1)) - quartic.p) == 0
    b = quartic.beta
    assert sign_of(quartic.alpha - (1 - b * b / (b + 1))) == 0


def test_critical_point_at_top_of_region():
    beta = Fraction(3, 2)
    params = Params(beta, 2 - beta)
    assert params.p == (beta - 1) / beta


@pytest.mark.parametrize("fixture, x, variant, expected", [
    ("quintic", 1, LOWER, "11(100)"),
    ("quartic", 0, UPPER, "(0001)"),
    ("golden_greedy", 1, LOWER, "(10)"),
    ("quartic", 1, LOWER, "(10)"),
])
def test_reference_expansions(request, fixture, x, variant, expected):
    params = request.getfixturevalue(fixture)
    assert expansion(params, x, variant) == word(expected)


def test_projection_examples(golden_greedy, quartic):
    assert sign_of(project_pi(golden_greedy, word("(10)")) - 1) == 0
    b, a = quartic.beta, quartic.alpha
    assert sign_of(project_pi(quartic, word("00(10)")) - (1 - a - b * a) / (b * b)) == 0
    assert sign_of(project_pi(quartic, word("(0)")) - a / (1 - b)) == 0


def test_rational_beta_gives_prefix_when_orbit_is_long():
    params = Params(Fraction(3, 2), Fraction(1, 7))
    out = expansion(params, Fraction(1, 3), UPPER, 40)
    assert isinstance(out, WordPrefix) and len(out) == 40


def test_periodic_points_project_back_exactly(quartic):
    orb = orbit(quartic, 0, UPPER)
    w = expansion(quartic, 0, UPPER)
    for n, point in enumerate(orb.points[:-1]):
        assert sign_of(project_pi(quartic, w.shift(n)) - point) == 0


def test_projection_is_monotone_on_orbit_words(quartic):
    words = set()
    for x, v in ((0, UPPER), (1, LOWER), (quartic.p, UPPER), (quartic.p, LOWER)):
        words.update(expansion(quartic, x, v).distinct_shifts())
    words = sorted(words)
    values = [project_pi(quartic, w) for w in words]
    for (a, va), (b, vb) in zip(zip(words, values), zip(words[1:], values[1:])):
        assert lex_compare(a, b) == Order.LT
        assert sign_of(vb - va) >= 0


@settings(max_examples=40, deadline=None)
@given(unit, st.integers(0, 50))
def test_semiconjugacy_exact_mode(quartic, x, n):
    letters = expansion(quartic, x, UPPER, n + 60).prefix(n + 60)
    point = quartic.scalar(x)
    for _ in range(n):
        point = apply_map(quartic, point)
    total, tail = project_prefix(quartic, letters[n:])
    diff = point - total
    assert sign_of(diff) >= 0 and sign_of(tail - diff) >= 0


@settings(max_examples=40, deadline=None)
@given(unit)
def test_projection_inverts_expansion(quartic, x):
    total, tail = project_prefix(quartic, expansion(quartic, x, UPPER, 80).prefix(80))
    assert abs(float(total) - float(x)) <= float(tail)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=0, max_value=1, max_denominator=997))
def test_reflection_duality(x):
    params = Params(Fraction(8, 5), Fraction(1, 10))
    mirror = params.reflected()
    for variant, opposite in ((UPPER, LOWER), (LOWER, UPPER)):
        a = expansion(mirror, 1 - x, variant, 40)
        b = expansion(params, x, opposite, 40)
        pa = a.prefix(40)
        pb = tuple(1 - c for c in b.prefix(40))
        assert pa == pb


def test_reflect_matches_on_exact_words(quartic):
    mirror = quartic.reflected()
    assert expansion(mirror, 1, LOWER) == reflect(expansion(quartic, 0, UPPER))
