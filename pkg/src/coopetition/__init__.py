"""Exact equilibrium computation for adversarial team games.

A team of players with their own utilities faces a single adversary. The
package verifies Nash, correlated and co-opetition equilibria (CoE), searches
for team-maximizing CoEs, and builds the example, reduction and random games
used to study them. All arithmetic uses :class:`fractions.Fraction`.
"""

from .equilibria import (
    Classification,
    Concept,
    ConsistencyReport,
    ConsistencyWitness,
    ExchangeabilityReport,
    TmcoeMethod,
    TmcoeResult,
    VerificationReport,
    Violation,
    check_consistency,
    check_exchangeable,
    classify_profile,
    is_best_response,
    ne_to_coe,
    solve_tmcoe,
    solve_tmcoe_consistent_lp,
    solve_tmcoe_fixed_adversary,
    solve_tmcoe_grid,
    team_deviation_gain,
    team_matrix,
    verify_ce,
    verify_coe,
    verify_ne,
)
from .exceptions import GameInputError, NotEquilibriumError, ParseError, PreconditionError, ScaleError
from .formats import emit_game, emit_strategy, parse_game, parse_strategy
from .game import (
    CoECandidate,
    CorrelatedTeamStrategy,
    Game,
    MixedStrategy,
    TeamGame,
    TeamPartition,
    expected_utility,
    expected_utility_correlated,
    joint_distribution,
    product_to_correlated,
)
from .generators import (
    CnfFormula,
    chicken_games,
    exchangeability_counterexample,
    modified_chicken_game,
    random_game,
    reduce_two_player,
    sat_game,
)
from .lp import Constraint, LinearProgram, LpSolution, LpStatus, solve_lp, solve_maxmin
from .nash import find_nash_support_enumeration

__version__ = "0.1.0"
