from fractions import Fraction

import numpy as np
import pytest

from betaflow import Params
from betaflow.errors import InvalidParams, NotTransitive
from betaflow.numerics import max_real_root_in
from betaflow.sft import compile, from_adjacency, transitivity_report
from betaflow.winning import (CellWord, cell_itinerary, check_cylinder_bounds, check_distance_condition,
                              check_ratio_condition, comparability_window, composed_report, min_cell_length,
                              mixing_time, offset_M, winning_report)

from systems import sft_systems


@pytest.fixture(scope="module")
def quartic_sft(quartic):
    return compile(quartic)


@pytest.fixture(scope="module")
def sqrt2_symmetric():
    beta = Params(max_real_root_in((-2, 0, 1), 1, 2), 0).beta
    return Params(beta, 1 - beta / 2)


def test_mixing_times(quartic_sft, golden_greedy):
    assert mixing_time(from_adjacency([[1, 1], [1, 1]])) == 1
    assert mixing_time(compile(golden_greedy)) == 2
    assert mixing_time(quartic_sft) == 6
    power = np.linalg.matrix_power(quartic_sft.adjacency, 5)
    assert power.min() == 0
    with pytest.raises(NotTransitive):
        mixing_time(from_adjacency([[0, 1], [1, 0]]))


@pytest.mark.parametrize("params", [p for _, _, p in sft_systems(4)][:12])
def test_mixing_time_bound(params):
    system = compile(params)
    if transitivity_report(system).transitive:
        assert mixing_time(system) <= system.cells ** 2


def test_constants(quartic, quartic_sft):
    assert min_cell_length(quartic_sft) == quartic.alpha
    assert comparability_window(quartic_sft, Fraction(1, 2)) == 11


def test_cell_itinerary_and_offset(quartic_sft):
    word = cell_itinerary(quartic_sft, 0)
    assert word == CellWord((), (0, 1, 2, 3))
    assert offset_M(word, 11) == 0
    assert offset_M(CellWord((0,), (0, 1)), 4) == 1
    assert offset_M(CellWord((), (0, 0, 1)), 4) == 1
    assert offset_M(CellWord((3,), (0, 1)), 4) == 0


def test_cylinder_bounds(quartic_sft):
    report = check_cylinder_bounds(quartic_sft, 9)
    assert report.passed and report.checked > 100


def test_ratio_condition(quartic, quartic_sft):
    report = check_ratio_condition(quartic_sft, cell_itinerary(quartic_sft, 0), 8)
    assert report.passed
    assert report.sup_ratio[0] == 1.0
    rho = float(min_cell_length(quartic_sft))
    beta = float(quartic.beta)
    for i, value in enumerate(report.sup_ratio):
        assert value <= beta ** -i / rho + 1e-12


def test_distance_condition(quartic_sft):
    report = check_distance_condition(quartic_sft, cell_itinerary(quartic_sft, 0), Fraction(1, 2), 6)
    assert report.passed
    assert report.i_star == report.k0 + report.m + report.M
    assert report.prefix_pairs > 0 and report.pairs > report.prefix_pairs
    assert report.worst_ratio >= report.c_bound


def test_golden_report(golden_greedy):
    report = winning_report(golden_greedy, Fraction(1, 3), Fraction(1, 2), depth=8, distance_depth=6)
    assert report.transitive and report.passed


def test_non_transitive_system_is_composed(sqrt2_symmetric):
    report = winning_report(sqrt2_symmetric, 0, Fraction(1, 2))
    assert not report.transitive and report.period == 2
    assert report.passed
    assert [p["cells"] for p in report.pieces] == [[0, 3], [1, 2]]
    assert report.certified_points == [0, 1]


def test_toy_composed_report():
    report = composed_report(from_adjacency([[0, 1], [1, 0]]), [0, 1])
    assert report.period == 2
    assert all(p["primitive"] and p["mixing_time"] == 1 for p in report.pieces)


@pytest.mark.parametrize("gamma", [0, 1, Fraction(3, 2)])
def test_gamma_must_be_a_proper_fraction(quartic, gamma):
    with pytest.raises(InvalidParams):
        winning_report(quartic, 0, gamma)


def test_report_dict_shape(golden_greedy):
    out = winning_report(golden_greedy, 0, Fraction(1, 2), depth=6, distance_depth=5).as_dict()
    assert set(out) == {"transitive", "period", "certified_points", "passed", "ratio", "distance"}
    assert out["distance"]["violations"] == 0
