"""Acceptance criteria, one test each. Every test prints a single
``ACCEPTANCE <n> PASS|FAIL`` line with its runtime and the measured values."""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest
import sympy

from betaflow import EPWord, LOWER, Params, apply_map, expansion, golden, is_sft, kneading_invariants, project_pi
from betaflow.automaton import interval_automaton
from betaflow.correspondence import (approximants, conjugacy_image, greedy_base, kneading_contained,
                                     membership_A, membership_B, to_hole_system)
from betaflow.kneading import solve_parry_beta, system_from_kneading_pair
from betaflow.numerics import NumberField, max_real_root_in, sign_of
from betaflow.oracles import escape_fraction, landing_words, language_counts
from betaflow.sft import characteristic_polynomial, compile, perron_root
from betaflow.survivor import (count_survivor_words, critical_hole, dimension_sweep, k0_word_counts,
                               make_hole, upper_limit_word)
from betaflow.winning import check_cylinder_bounds, min_cell_length, mixing_time, winning_report

from conftest import QUINTIC, word
from systems import sft_systems


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title):
        notes = []
        start = time.perf_counter()
        outcome = "FAIL"
        try:
            yield notes
            outcome = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            detail = "; ".join(notes)
            with capsys.disabled():
                print(f"\nACCEPTANCE {number:>2} {outcome} {title} [{elapsed:.2f} s] {detail}")
    return run


def _sym(coeffs):
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(coeffs)), x)


def _first_difference(a, b, limit=400):
    for i in range(limit):
        if a.letter(i) != b.letter(i):
            return i
    return limit


def test_1_quintic_expansion_of_one(criterion):
    with criterion(1, "quintic quasi-greedy expansion of 1") as notes:
        start = time.perf_counter()
        params = Params(max_real_root_in(QUINTIC, 1, 2), 0)
        top = expansion(params, 1, LOWER, require_period=True)
        elapsed = time.perf_counter() - start
        notes.append(f"tau-(1) = {top}")
        assert top == EPWord((1, 1), (1, 0, 0))
        assert (len(top.pre), len(top.per)) == (2, 3)
        assert elapsed < 1.0


def test_2_counterexample(criterion, quintic_beta):
    with criterion(2, "word in B but failing condition (4)") as notes:
        start = time.perf_counter()
        xi = word("00(011)")
        in_b = membership_B(quintic_beta, xi)
        verdict = membership_A(quintic_beta, xi)
        elapsed = time.perf_counter() - start
        notes.append(f"B = {in_b}, A = {verdict}")
        assert in_b is True
        assert str(verdict) == "NO(COND4)"
        assert elapsed < 1.0


def test_3_parry_inversion_and_round_trip(criterion):
    with criterion(3, "Parry inversion and kneading round trip") as notes:
        start = time.perf_counter()
        beta = solve_parry_beta(word("(10)"))
        tight = beta.refine(Fraction(1, 10 ** 12))
        lo, hi = tight.lo, tight.hi
        root5 = (1 + 5 ** 0.5) / 2
        assert hi - lo <= Fraction(1, 10 ** 12)
        assert float(lo) - 1e-15 <= root5 <= float(hi) + 1e-15
        assert beta == golden()
        systems = sft_systems(6)
        mismatches = 0
        for lower, upper, params in systems:
            pair = kneading_invariants(params)
            back = system_from_kneading_pair(pair.lower, pair.upper)
            if (pair.lower, pair.upper) != (lower, upper) or back != params:
                mismatches += 1
        elapsed = time.perf_counter() - start
        notes.append(f"{len(systems)} pairs, {mismatches} mismatches")
        assert len(systems) >= 50 and mismatches == 0
        assert elapsed < 30


def test_4_quartic_pair(criterion):
    with criterion(4, "quartic kneading pair") as notes:
        params = system_from_kneading_pair(word("0(10)"), word("1(0001)"))
        minpoly = _sym(params.beta_real.minpoly)
        quartic = _sym((-1, -1, -1, 0, 1))
        assert quartic.rem(minpoly).is_zero
        notes.append(f"beta = {float(params.beta):.6f}, alpha = {float(params.alpha):.6f}")
        assert abs(float(params.beta) - 1.4656) < 5e-4
        assert abs(float(params.alpha) - 0.1288) < 5e-4
        assert is_sft(params)
        system = compile(params)
        charpoly = _sym(characteristic_polynomial(system))
        assert charpoly.rem(minpoly).is_zero
        assert perron_root(system) == params.beta_real
        notes.append(f"charpoly {charpoly.as_expr()}")


def test_5_critical_holes(criterion, golden_greedy, quartic):
    with criterion(5, "critical holes") as notes:
        g = golden_greedy.beta
        tc = critical_hole(golden_greedy)
        assert sign_of(tc - 1 / (g * g)) == 0
        assert abs(float(tc) - float(golden()) ** -2) < 1e-12
        assert expansion(golden_greedy, tc, LOWER, require_period=True) == word("00(10)")
        b, a = quartic.beta, quartic.alpha
        tq = critical_hole(quartic)
        assert sign_of(tq - (1 - a - b * a) / (b * b)) == 0
        assert abs(float(tq) - float((b - 1) / b)) < 1e-12
        notes.append(f"golden {float(tc):.12f}, quartic {float(tq):.12f}")


def test_6_devil_staircase(criterion, quartic):
    with criterion(6, "200-sample dimension sweep of the quartic pair") as notes:
        start = time.perf_counter()
        rows = dimension_sweep(quartic, 200, depth=30)
        elapsed = time.perf_counter() - start
        tc = float(critical_hole(quartic))
        a = [(float(r.t), r.eta_kneading) for r in rows if r.eta_kneading is not None]
        both = [(r.eta_kneading, r.eta_counting) for r in rows
                if r.eta_kneading is not None and r.eta_counting is not None]
        gap = max(abs(x - y) for x, y in both)
        notes.append(f"method A on {len(a)}/200, both on {len(both)}, max gap {gap:.4f}")
        assert rows[0].eta_kneading == 1.0
        assert all(x[1] >= y[1] - 1e-9 for x, y in zip(a, a[1:]))
        assert all(v == 0.0 for t, v in a if t >= tc)
        assert gap <= 0.02
        assert elapsed <= 600


def test_7_correspondence(criterion, quartic):
    with criterion(7, "correspondence with the golden greedy map") as notes:
        hole = to_hole_system(quartic)
        assert hole.beta_prime == golden()
        gen = NumberField.of(golden()).gen()
        assert sign_of(hole.hole_t - 1 / (3 * gen + 1)) == 0
        beta_prime = greedy_base(quartic)
        fine = quartic.to_float_mode(200)
        greedy = Params(beta_prime, 0).to_float_mode(200)
        rng = random.Random(2024)
        worst = 0.0
        for _ in range(1000):
            x = fine.scalar(Fraction(rng.random()))
            n = rng.randint(0, 50)
            y, z = x, conjugacy_image(fine, x, beta_prime=beta_prime, letters=130)
            for _ in range(n):
                y, z = apply_map(fine, y), apply_map(greedy, z)
            w = conjugacy_image(fine, y, beta_prime=beta_prime, letters=130)
            worst = max(worst, abs(float(z.value - w.value)))
        notes.append(f"worst equivariance error {worst:.2e} over 1000 points")
        assert worst < 1e-9


def test_8_cylinder_lengths(criterion, quartic):
    with criterion(8, "cylinder length bounds to depth 12") as notes:
        report = check_cylinder_bounds(compile(quartic), 12)
        notes.append(f"{report.checked} cylinders, {len(report.violations)} violations")
        assert report.passed


def test_9_winning_certificate(criterion, quartic):
    with criterion(9, "geometric condition for x = 0, gamma = 1/2") as notes:
        start = time.perf_counter()
        report = winning_report(quartic, 0, Fraction(1, 2), depth=10, distance_depth=8)
        elapsed = time.perf_counter() - start
        system = compile(quartic)
        rho, m = min_cell_length(system), mixing_time(system)
        ratio, dist = report.ratio, report.distance
        notes.append(f"{dist.pairs} pairs, worst ratio {dist.worst_ratio:.4f}, c = {dist.c_bound:.5f}")
        assert report.transitive
        assert ratio.depth == 10 and ratio.within_bound
        assert dist.depth == 8 and dist.passed
        assert dist.c_bound >= float(rho / quartic.beta ** (m + 1)) - 1e-15
        assert elapsed <= 120


def _three_systems(quartic, golden_greedy):
    other = system_from_kneading_pair(word("(01)"), word("(100)"))
    return {"quartic": quartic, "golden": golden_greedy, "(01),(100)": other}


def test_10_oracle_equivalence(criterion, quartic, golden_greedy):
    with criterion(10, "brute force versus automata") as notes:
        systems = _three_systems(quartic, golden_greedy)
        for params in systems.values():
            auto = interval_automaton(expansion(params, 0, require_period=True), upper_limit_word(params))
            assert language_counts(params, 18) == auto.count_sequence(18)[1:]
        notes.append("language counts equal for n <= 18 on 3 systems")
        holes = {
            "quartic": ["(001)", "(00101)"],
            "golden": ["(001)", "(00101)"],
            "(01),(100)": ["0", "(001)", "(00101)"],
        }
        worst = 0.0
        for name, texts in holes.items():
            params = systems[name]
            for text in texts:
                hole = make_hole(params, 0 if text == "0" else project_pi(params, word(text)))
                k0 = k0_word_counts(params, hole, 14)
                survivors = [count_survivor_words(params, hole, k) for k in range(1, 15)]
                # the automaton count of words landing on 0 matches an exact backward search
                assert k0 == [len(landing_words(params, hole.t, k)) for k in range(1, 15)]
                for k, (c0, cp) in enumerate(zip(k0, survivors), start=1):
                    assert c0 <= 3 * (k + 1) * cp
                    worst = max(worst, c0 / cp)
        notes.append(f"max |K0|/|K+| = {worst:.3f} for k <= 14")


def test_11_sft_approximation(criterion, quintic):
    with criterion(11, "finite-type approximation of the quintic greedy map") as notes:
        source = kneading_invariants(quintic)
        found = approximants(quintic, 3)
        agreements = []
        for approx, need in zip(found, (10, 15, 20)):
            assert is_sft(approx.params)
            pair = kneading_invariants(approx.params)
            assert (pair.lower, pair.upper) == (approx.lower, approx.upper)
            assert kneading_contained((pair.lower, pair.upper), (source.lower, source.upper))
            agree = min(_first_difference(pair.lower, source.lower), _first_difference(pair.upper, source.upper))
            assert agree >= need and 2.0 ** -(agree - 1) <= 2.0 ** -(need - 1)
            agreements.append(agree)
        notes.append(f"agreement {agreements}")


def test_12_escape_fraction(criterion, golden_greedy):
    with criterion(12, "escape through a small hole (statistical, not the null-set claim)") as notes:
        value = escape_fraction(golden_greedy, 0.01, samples=100_000, steps=1000, seed=12345)
        notes.append(f"escape fraction {value:.5f}")
        assert value >= 0.95
