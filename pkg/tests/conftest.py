import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from coopetition import (  # noqa: E402
    CoECandidate,
    CorrelatedTeamStrategy,
    MixedStrategy,
    chicken_games,
    exchangeability_counterexample,
    modified_chicken_game,
)

ACCEPTANCE_LINES = []


@pytest.fixture
def ga():
    return chicken_games()[0]


@pytest.fixture
def gb():
    return chicken_games()[1]


@pytest.fixture
def table5():
    return modified_chicken_game()


@pytest.fixture
def table4():
    return exchangeability_counterexample()


def chicken_profiles(game):
    """Profiles 1-10 of the comparison table, keyed by row number.

    Odd product rows are per-player strategy lists; even rows and 8-10 are
    correlated candidates. Row 1 and 2 are (C,C,B) in the two forms.
    """
    B = MixedStrategy.from_labels(game, 2, {"B": 1})

    def product(p1, p2):
        return [MixedStrategy.from_labels(game, 0, p1), MixedStrategy.from_labels(game, 1, p2), B]

    def corr(masses):
        return CoECandidate(CorrelatedTeamStrategy.from_labels(game, (0, 1), masses), B)

    third = {"D": Fraction(1, 3), "C": Fraction(2, 3)}
    return {
        1: product({"C": 1}, {"C": 1}),
        2: corr({("C", "C"): 1}),
        3: product({"D": 1}, {"C": 1}),
        4: corr({("D", "C"): 1}),
        5: product({"C": 1}, {"D": 1}),
        6: corr({("C", "D"): 1}),
        7: product(third, third),
        8: corr({("C", "C"): "4/9", ("D", "C"): "2/9", ("C", "D"): "2/9", ("D", "D"): "1/9"}),
        9: corr({("C", "C"): "1/3", ("D", "C"): "1/3", ("C", "D"): "1/3"}),
        10: corr({("C", "C"): "1/2", ("D", "C"): "1/4", ("C", "D"): "1/4"}),
    }


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
