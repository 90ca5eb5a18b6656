from betaflow.automaton import interval_automaton
from betaflow.kneading import omega_automaton

from conftest import word


def fibonacci(n):
    a, b = 1, 2
    for _ in range(n - 1):
        a, b = b, a + b
    return a


def test_golden_shift_counts_are_fibonacci():
    auto = omega_automaton(word("0(10)"), word("1(0)"))
    assert [auto.count_words(n) for n in range(1, 12)] == [fibonacci(n + 1) for n in range(1, 12)]


def test_count_sequence_matches_single_counts():
    auto = omega_automaton(word("0(10)"), word("1(0001)"))
    seq = auto.count_sequence(15)
    assert seq[1:] == [auto.count_words(n) for n in range(1, 16)]


def test_entropy_flags():
    assert interval_automaton(word("(0)"), word("(10)")).has_positive_entropy()
    # between 00(10) and (10) only words ending in (10) or (01) survive
    assert not interval_automaton(word("0(01)"), word("(10)")).has_positive_entropy()


def test_run_and_nonempty():
    auto = omega_automaton(word("0(10)"), word("1(0)"))
    assert auto.nonempty
    assert auto.run((1, 1)) is None
    assert auto.run((1, 0, 1, 0)) is not None


def test_perron_root_of_golden_shift():
    auto = omega_automaton(word("0(10)"), word("1(0)"))
    assert abs(auto.perron_root() - 1.6180339887) < 1e-8
