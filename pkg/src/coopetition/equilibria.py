"""Verifiers and solvers for NE, CE, CoE and TMCoE in adversarial team games.

A co-opetition equilibrium (CoE) is a pair (x_T, x_n): the adversary's mixed
strategy x_n is a best response to the team's correlated strategy x_T, and
x_T satisfies the correlated-equilibrium deviation inequalities of every team
player once x_n is fixed. A TMCoE is a CoE with maximal team utility.

Every check here is exact. A report holds iff every defining inequality holds
in rational arithmetic, and each violation carries the exact deviation gain.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .exceptions import GameInputError, NotEquilibriumError, PreconditionError, ScaleError
from .game import (
    CoECandidate,
    CorrelatedTeamStrategy,
    Game,
    MixedStrategy,
    TeamPartition,
    as_fraction,
    assemble,
    deviation_payoffs,
    expected_utility,
    expected_utility_correlated,
    product_to_correlated,
    team_joint_actions,
    validate_profile,
)
from .lp import GE, EQ, Constraint, LinearProgram, solve_lp, solve_maxmin

GRID_CEILING = 20_000


class Concept(enum.Enum):
    NE = "NE"
    CE = "CE"
    COE = "CoE"
    BEST_RESPONSE = "BestResponse"
    TMCOE = "TMCoE-certificate"


@dataclass(frozen=True)
class Violation:
    """One profitable deviation.

    ``action`` is the recommended action being deviated from; it is ``None``
    for deviations from a mixed strategy (NE, adversary best response).
    """

    player: int
    action: Optional[int]
    deviation: int
    amount: Fraction


@dataclass(frozen=True)
class VerificationReport:
    concept: Concept
    violations: tuple[Violation, ...] = ()

    def __post_init__(self):
        if any(v.amount <= 0 for v in self.violations):
            raise ValueError("violation amounts must be strictly positive")

    @property
    def holds(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.holds


def _team_payoff_table(game: Game, partition: TeamPartition, x_n: Sequence[Fraction]) -> dict:
    """Map each joint team action to the expected payoff vector under x_n."""
    table = {}
    n = game.num_players
    for team_joint in team_joint_actions(game, partition.team):
        acc = [Fraction(0)] * n
        for a_n, q in enumerate(x_n):
            if not q:
                continue
            row = game.payoff(assemble(partition, team_joint, a_n))
            for i in range(n):
                acc[i] += q * row[i]
        table[team_joint] = acc
    return table


def _swap(joint: tuple[int, ...], pos: int, action: int) -> tuple[int, ...]:
    return joint[:pos] + (action,) + joint[pos + 1:]


def adversary_payoffs(game: Game, partition: TeamPartition, x_T: CorrelatedTeamStrategy) -> list[Fraction]:
    """``u_n(x_T, a_n)`` for each adversary action."""
    values = [Fraction(0)] * game.shape[partition.adversary]
    for team_joint, p in x_T.items(game):
        if not p:
            continue
        for a_n in range(len(values)):
            values[a_n] += p * game.utility(partition.adversary, assemble(partition, team_joint, a_n))
    return values


def _check_candidate(game, partition, x_T, x_n) -> CoECandidate:
    cand = CoECandidate(x_T, x_n)
    cand.validate(game, partition)
    return cand


def is_best_response(
    game: Game, partition: TeamPartition, x_T: CorrelatedTeamStrategy, x_n: MixedStrategy
) -> VerificationReport:
    """Does x_n maximize the adversary's payoff against x_T?

    Checking pure deviations suffices: a mixed deviation is an average of
    pure ones.
    """
    _check_candidate(game, partition, x_T, x_n)
    values = adversary_payoffs(game, partition, x_T)
    current = sum(q * v for q, v in zip(x_n.probs, values))
    violations = tuple(
        Violation(partition.adversary, None, a_n, v - current) for a_n, v in enumerate(values) if v > current
    )
    return VerificationReport(Concept.BEST_RESPONSE, violations)


def _team_ce_violations(game, partition, x_T, table) -> list[Violation]:
    violations = []
    joints = team_joint_actions(game, partition.team)
    mass = dict(zip(joints, x_T.probs))
    for pos, i in enumerate(partition.team):
        for a in range(game.shape[i]):
            for b in range(game.shape[i]):
                if a == b:
                    continue
                slack = Fraction(0)
                for joint in joints:
                    if joint[pos] != a or not mass[joint]:
                        continue
                    slack += mass[joint] * (table[joint][i] - table[_swap(joint, pos, b)][i])
                if slack < 0:
                    violations.append(Violation(i, a, b, -slack))
    return violations


def verify_coe(game: Game, partition: TeamPartition, cand: CoECandidate) -> VerificationReport:
    """Exact co-opetition equilibrium check.

    Reports the adversary's improving actions first, then every team
    player's violated (recommended, deviation) pair.
    """
    cand.validate(game, partition)
    br = is_best_response(game, partition, cand.team_strategy, cand.adversary_strategy)
    table = _team_payoff_table(game, partition, cand.adversary_strategy.probs)
    team = _team_ce_violations(game, partition, cand.team_strategy, table)
    return VerificationReport(Concept.COE, br.violations + tuple(team))


def verify_ce(game: Game, x: Sequence) -> VerificationReport:
    """Correlated-equilibrium check for a distribution over all joint actions."""
    probs = [as_fraction(p) for p in x]
    if len(probs) != game.num_joint_actions:
        raise GameInputError(f"expected {game.num_joint_actions} probabilities, got {len(probs)}")
    if any(p < 0 for p in probs) or sum(probs) != 1:
        raise GameInputError("joint distribution must be nonnegative and sum to 1")
    violations = []
    for i in range(game.num_players):
        for a in range(game.shape[i]):
            gains = [Fraction(0)] * game.shape[i]
            for joint in game.joint_actions():
                if joint[i] != a:
                    continue
                p = probs[game.flat_index(joint)]
                if not p:
                    continue
                base = game.utility(i, joint)
                for b in range(game.shape[i]):
                    if b != a:
                        gains[b] += p * (game.utility(i, _swap(joint, i, b)) - base)
            violations.extend(Violation(i, a, b, g) for b, g in enumerate(gains) if g > 0)
    return VerificationReport(Concept.CE, tuple(violations))


def verify_ne(game: Game, strategies: Sequence[MixedStrategy]) -> VerificationReport:
    """Nash check by pure unilateral deviations."""
    validate_profile(game, strategies)
    violations = []
    for i, s in enumerate(strategies):
        values = deviation_payoffs(game, strategies, i)
        current = sum(p * v for p, v in zip(s.probs, values))
        violations.extend(Violation(i, None, a, v - current) for a, v in enumerate(values) if v > current)
    return VerificationReport(Concept.NE, tuple(violations))


def ne_to_coe(game: Game, partition: TeamPartition, strategies: Sequence[MixedStrategy]) -> CoECandidate:
    """Turn a Nash equilibrium into the CoE it induces.

    The team plays the product of its members' mixed strategies and the
    adversary keeps its own strategy.
    """
    partition.validate(game)
    report = verify_ne(game, strategies)
    if not report.holds:
        worst = report.violations[0]
        raise NotEquilibriumError(
            f"profile is not a Nash equilibrium: player {worst.player} gains "
            f"{worst.amount} by switching to action {worst.deviation}",
            report,
        )
    x_T = product_to_correlated([strategies[i] for i in partition.team])
    cand = CoECandidate(x_T, strategies[partition.adversary])
    check = verify_coe(game, partition, cand)
    if not check.holds:
        raise AssertionError(f"NE-induced profile failed the CoE check: {check.violations}")
    return cand


# -- consistency -----------------------------------------------------------


@dataclass(frozen=True)
class ConsistencyWitness:
    """Evidence that a team player's utility is not a positive multiple of u_T.

    ``joint`` and ``deviation_joint`` differ only in ``player``'s action and
    their u_T and u_player differences are not positively proportional. When
    no such pair exists (the player's utility is a multiple of u_T shifted by
    a term that deviations cannot see), ``deviation_joint`` is ``None`` and
    ``joint`` is the first action profile where k * u_player != u_T.
    """

    player: int
    joint: tuple[int, ...]
    deviation_joint: Optional[tuple[int, ...]]


@dataclass(frozen=True)
class ConsistencyReport:
    """Result of the ``k_i * u_i == u_T`` test.

    ``constants`` maps each team player for which a positive k_i exists to
    that k_i. ``witnesses`` holds one witness per failing player.
    """

    consistent: bool
    constants: dict = field(default_factory=dict)
    witnesses: tuple[ConsistencyWitness, ...] = ()

    @property
    def witness(self) -> Optional[ConsistencyWitness]:
        return self.witnesses[0] if self.witnesses else None

    @property
    def shares(self) -> dict:
        """1/k_i: the fraction of u_T that each consistent player receives."""
        return {i: 1 / k for i, k in self.constants.items()}


def team_utility(game: Game, partition: TeamPartition, joint: Sequence[int]) -> Fraction:
    row = game.payoff(joint)
    return sum((row[i] for i in partition.team), Fraction(0))


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def _pair_witness(game, partition, player, u_T) -> Optional[ConsistencyWitness]:
    ratio = None
    for joint in game.joint_actions():
        for b in range(game.shape[player]):
            if b == joint[player]:
                continue
            other = _swap(joint, player, b)
            d_T = u_T[joint] - u_T[other]
            d_i = game.utility(player, joint) - game.utility(player, other)
            if _sign(d_T) != _sign(d_i):
                return ConsistencyWitness(player, joint, other)
            if d_i:
                r = d_T / d_i
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    return ConsistencyWitness(player, joint, other)
    return None


def check_consistency(game: Game, partition: TeamPartition) -> ConsistencyReport:
    """Test whether each team player's utility is a positive rescaling of u_T.

    Player i passes when some k_i > 0 gives ``k_i * u_i(a) == u_T(a)`` for
    every joint action a. This is sufficient for the team's correlated
    deviation incentives to agree with each member's.
    """
    partition.validate(game)
    u_T = {joint: team_utility(game, partition, joint) for joint in game.joint_actions()}
    constants = {}
    witnesses = []
    for i in partition.team:
        k = None
        for joint in game.joint_actions():
            u_i = game.utility(i, joint)
            if u_i:
                k = u_T[joint] / u_i
                break
        if k is None:
            # u_i is identically zero: only an all-zero u_T is a multiple of it
            k = Fraction(1) if not any(u_T.values()) else Fraction(0)
        failed = next((j for j in game.joint_actions() if u_T[j] != k * game.utility(i, j)), None)
        if failed is None and k <= 0:
            # proportional, but with the wrong sign: blame the first nonzero entry
            failed = next(j for j in game.joint_actions() if u_T[j] or game.utility(i, j))
        if failed is None:
            constants[i] = k
            continue
        witnesses.append(_pair_witness(game, partition, i, u_T) or ConsistencyWitness(i, failed, None))
    return ConsistencyReport(not witnesses, constants, tuple(witnesses))


# -- team-maximizing CoE ---------------------------------------------------


class TmcoeMethod(enum.Enum):
    EXACT_CONSISTENT_LP = "ExactConsistentLP"
    FIXED_ADVERSARY_LP = "FixedAdversaryLP"
    GRID_SEARCH = "GridSearch"


@dataclass(frozen=True)
class TmcoeResult:
    candidate: CoECandidate
    team_value: Fraction
    method: TmcoeMethod
    certified_exact: bool
    grid_resolution: Optional[int] = None


def strictly_dominant_action(game: Game, partition: TeamPartition) -> Optional[int]:
    """The adversary action that strictly beats every other against all team joint actions."""
    adv = partition.adversary
    joints = team_joint_actions(game, partition.team)
    for a in range(game.shape[adv]):
        if all(
            game.utility(adv, assemble(partition, t, a)) > game.utility(adv, assemble(partition, t, b))
            for b in range(game.shape[adv])
            if b != a
            for t in joints
        ):
            return a
    return None


def solve_tmcoe_fixed_adversary(
    game: Game, partition: TeamPartition, x_n: MixedStrategy
) -> Optional[TmcoeResult]:
    """Best CoE with the adversary's strategy held at x_n.

    With x_n fixed, both the adversary best-response constraints and the team
    deviation constraints are linear in x_T, so one LP maximizes u_T(x_T, x_n).
    Returns ``None`` when no x_T makes x_n a best response.
    """
    partition.validate(game)
    if x_n.player != partition.adversary or len(x_n.probs) != game.shape[partition.adversary]:
        raise GameInputError("x_n is not a strategy of the adversary")
    joints = team_joint_actions(game, partition.team)
    table = _team_payoff_table(game, partition, x_n.probs)
    adv = partition.adversary
    nvars = len(joints)

    constraints = [Constraint((Fraction(1),) * nvars, EQ, Fraction(1))]
    for a_n in range(game.shape[adv]):
        row = tuple(table[t][adv] - game.utility(adv, assemble(partition, t, a_n)) for t in joints)
        constraints.append(Constraint(row, GE, Fraction(0)))
    for pos, i in enumerate(partition.team):
        for a in range(game.shape[i]):
            for b in range(game.shape[i]):
                if a == b:
                    continue
                row = tuple(
                    table[t][i] - table[_swap(t, pos, b)][i] if t[pos] == a else Fraction(0) for t in joints
                )
                constraints.append(Constraint(row, GE, Fraction(0)))
    objective = tuple(sum((table[t][i] for i in partition.team), Fraction(0)) for t in joints)
    sol = solve_lp(LinearProgram(objective, tuple(constraints), "max"))
    if not sol.is_optimal:
        return None
    cand = CoECandidate(CorrelatedTeamStrategy(partition.team, sol.primal), x_n)
    report = verify_coe(game, partition, cand)
    if not report.holds:
        raise AssertionError(f"fixed-adversary LP produced a non-CoE: {report.violations}")
    dominant = strictly_dominant_action(game, partition)
    certified = dominant is not None and x_n.probs[dominant] == 1
    return TmcoeResult(cand, sol.objective_value, TmcoeMethod.FIXED_ADVERSARY_LP, certified)


def simplex_grid(size: int, resolution: int) -> Iterator[tuple[Fraction, ...]]:
    """Points of the probability simplex with denominators dividing ``resolution``.

    Yielded in increasing lexicographic order.
    """

    def parts(remaining, slots):
        if slots == 1:
            yield (remaining,)
            return
        for first in range(remaining + 1):
            for rest in parts(remaining - first, slots - 1):
                yield (first,) + rest

    for counts in parts(resolution, size):
        yield tuple(Fraction(c, resolution) for c in counts)


def grid_size(size: int, resolution: int) -> int:
    return math.comb(resolution + size - 1, size - 1)


def solve_tmcoe_grid(game: Game, partition: TeamPartition, resolution: int) -> Optional[TmcoeResult]:
    """Search adversary strategies on a simplex grid, one fixed-adversary LP per point.

    Returns the best CoE found, preferring the lexicographically smallest
    adversary strategy among ties, or ``None`` if no grid point supports a
    CoE. The result is certified exact only when it sits at a pure adversary
    action that strictly dominates the others, since every CoE must then use
    that action.
    """
    partition.validate(game)
    if not isinstance(resolution, int) or resolution < 1:
        raise GameInputError(f"grid resolution must be a positive integer, got {resolution!r}")
    m = game.shape[partition.adversary]
    points = grid_size(m, resolution)
    if points > GRID_CEILING:
        raise ScaleError(f"grid of {points} adversary strategies exceeds the {GRID_CEILING} ceiling")
    best = None
    for probs in simplex_grid(m, resolution):
        res = solve_tmcoe_fixed_adversary(game, partition, MixedStrategy(partition.adversary, probs))
        if res is not None and (best is None or res.team_value > best.team_value):
            best = res
    if best is None:
        return None
    return TmcoeResult(best.candidate, best.team_value, TmcoeMethod.GRID_SEARCH, best.certified_exact, resolution)


def team_matrix(game: Game, partition: TeamPartition) -> list[list[Fraction]]:
    """u_T with joint team actions as rows and adversary actions as columns."""
    return [
        [team_utility(game, partition, assemble(partition, t, a_n)) for a_n in range(game.shape[partition.adversary])]
        for t in team_joint_actions(game, partition.team)
    ]


def team_deviation_gain(game: Game, partition: TeamPartition, cand: CoECandidate) -> Fraction:
    """How much the team, acting as one player, could gain against ``x_n``.

    Zero means ``x_T`` is a best response of the whole team. CoE constraints
    only rule out deviations by one team player at a time, so a CoE can
    leave a positive gain here.
    """
    matrix = team_matrix(game, partition)
    y = cand.adversary_strategy.probs
    values = [sum((m * p for m, p in zip(row, y)), Fraction(0)) for row in matrix]
    current = sum((x * v for x, v in zip(cand.team_strategy.probs, values)), Fraction(0))
    return max(values) - current


def solve_tmcoe_consistent_lp(game: Game, partition: TeamPartition) -> TmcoeResult:
    """Exact TMCoE of a zero-sum game with consistent team utilities.

    The team acts as one maximizing player against the adversary; the
    maxmin solution of the team-vs-adversary matrix is a TMCoE, and its
    correlated deviation constraints hold automatically.
    """
    partition.validate(game)
    if not game.is_zero_sum():
        raise PreconditionError("game is not zero-sum")
    consistency = check_consistency(game, partition)
    if not consistency.consistent:
        raise PreconditionError(f"team utilities are not consistent (player {consistency.witness.player})")
    value, rows, cols = solve_maxmin(team_matrix(game, partition))
    cand = CoECandidate(
        CorrelatedTeamStrategy(partition.team, rows), MixedStrategy(partition.adversary, cols)
    )
    report = verify_coe(game, partition, cand)
    if not report.holds:
        raise AssertionError(f"maxmin solution is not a CoE: {report.violations}")
    return TmcoeResult(cand, value, TmcoeMethod.EXACT_CONSISTENT_LP, True)


def exact_lp_applies(game: Game, partition: TeamPartition) -> bool:
    return game.is_zero_sum() and check_consistency(game, partition).consistent


def solve_tmcoe(game: Game, partition: TeamPartition, resolution: int = 4) -> Optional[TmcoeResult]:
    """Exact LP when the game is zero-sum and consistent, grid search otherwise."""
    if exact_lp_applies(game, partition):
        return solve_tmcoe_consistent_lp(game, partition)
    return solve_tmcoe_grid(game, partition, resolution)


# -- exchangeability -------------------------------------------------------


@dataclass(frozen=True)
class ExchangeabilityReport:
    """Whether swapping the adversary strategies of two CoEs keeps both CoEs.

    ``swapped[0]`` checks (e1 team, e2 adversary), ``swapped[1]`` checks
    (e2 team, e1 adversary).
    """

    exchangeable: bool
    swapped: tuple[VerificationReport, VerificationReport]

    def __bool__(self) -> bool:
        return self.exchangeable


def check_exchangeable(
    game: Game, partition: TeamPartition, e1: CoECandidate, e2: CoECandidate
) -> ExchangeabilityReport:
    """Check that both cross pairings of two CoEs are again CoEs.

    In a consistent zero-sum game, CoEs whose team strategies are best
    responses of the whole team (see :func:`team_deviation_gain`) are
    two-player saddle points and always exchange. A TMCoE without that
    property can fail to exchange even though its team value is optimal.
    """
    for name, e in (("e1", e1), ("e2", e2)):
        report = verify_coe(game, partition, e)
        if not report.holds:
            raise NotEquilibriumError(f"{name} is not a CoE", report)
    first = verify_coe(game, partition, CoECandidate(e1.team_strategy, e2.adversary_strategy))
    second = verify_coe(game, partition, CoECandidate(e2.team_strategy, e1.adversary_strategy))
    return ExchangeabilityReport(first.holds and second.holds, (first, second))


# -- classification ----------------------------------------------------------

STABLE_DEFINITION = "NE or CoE for product profiles, CoE for correlated profiles"


@dataclass(frozen=True)
class Classification:
    """One row of an equilibrium comparison table.

    ``ne`` is ``None`` for correlated profiles. For product profiles the CoE
    and TMCoE columns refer to the induced correlated profile. ``tmcoe``
    means: a CoE whose team value reaches the grid optimum at
    ``grid_resolution``.
    """

    form: str
    team_value: Fraction
    ne: Optional[bool]
    coe: bool
    tmcoe: bool
    stable: bool
    grid_resolution: int
    grid_optimum: Optional[Fraction]
    stable_definition: str = STABLE_DEFINITION


Profile = Union[Sequence[MixedStrategy], CoECandidate]


def classify_profile(
    game: Game, partition: TeamPartition, profile: Profile, resolution: int = 4
) -> Classification:
    partition.validate(game)
    if isinstance(profile, CoECandidate):
        form = "correlated"
        cand = profile
        ne = None
    else:
        form = "product"
        strategies = list(profile)
        ne = verify_ne(game, strategies).holds
        cand = CoECandidate(
            product_to_correlated([strategies[i] for i in partition.team]), strategies[partition.adversary]
        )
    value = expected_utility_correlated(game, partition, cand, "team")
    coe = verify_coe(game, partition, cand).holds
    best = solve_tmcoe_grid(game, partition, resolution)
    optimum = None if best is None else best.team_value
    tmcoe = coe and optimum is not None and value >= optimum
    stable = (ne or coe) if form == "product" else coe
    return Classification(form, value, ne, coe, tmcoe, stable, resolution, optimum)


__all__ = [
    "Concept",
    "Violation",
    "VerificationReport",
    "ConsistencyWitness",
    "ConsistencyReport",
    "TmcoeMethod",
    "TmcoeResult",
    "ExchangeabilityReport",
    "Classification",
    "adversary_payoffs",
    "is_best_response",
    "verify_ce",
    "verify_coe",
    "verify_ne",
    "ne_to_coe",
    "team_utility",
    "team_matrix",
    "team_deviation_gain",
    "check_consistency",
    "strictly_dominant_action",
    "solve_tmcoe_fixed_adversary",
    "solve_tmcoe_grid",
    "solve_tmcoe_consistent_lp",
    "solve_tmcoe",
    "exact_lp_applies",
    "simplex_grid",
    "grid_size",
    "check_exchangeable",
    "classify_profile",
]
