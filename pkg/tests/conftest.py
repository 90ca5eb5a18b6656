import pytest

from betaflow import Params, golden, max_real_root_in
from betaflow.kneading import system_from_kneading_pair
from betaflow.words import EPWord

QUINTIC = (1, 1, -2, -1, -1, 1)  # x^5 - x^4 - x^3 - 2x^2 + x + 1, constant first
QUARTIC = (-1, -1, -1, 0, 1)  # x^4 - x^2 - x - 1


def word(text):
    return EPWord.parse(text)


@pytest.fixture(scope="session")
def quartic():
    return system_from_kneading_pair(word("0(10)"), word("1(0001)"))


@pytest.fixture(scope="session")
def golden_greedy():
    return Params(golden(), 0)


@pytest.fixture(scope="session")
def quintic_beta():
    return max_real_root_in(QUINTIC, 1, 2)


@pytest.fixture(scope="session")
def quintic(quintic_beta):
    return Params(quintic_beta, 0)
