"""Example games, reduction gadgets and seeded random game families."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .exceptions import GameInputError, ParseError, ScaleError
from .game import (
    CoECandidate,
    CorrelatedTeamStrategy,
    Game,
    MixedStrategy,
    TeamGame,
    TeamPartition,
    as_fraction,
)

MAX_RANDOM_JOINT_ACTIONS = 10_000

CHICKEN = {("D", "D"): (0, 0), ("D", "C"): (7, 2), ("C", "D"): (2, 7), ("C", "C"): (6, 6)}


def _chicken_variant(team_table, name) -> TeamGame:
    # under A the team gets (10, 10) and the adversary -20, so B always does better
    def payoff(joint):
        d = "DC"[joint[0]], "DC"[joint[1]]
        u1, u2 = team_table[d] if joint[2] == 1 else (10, 10)
        u1, u2 = as_fraction(u1), as_fraction(u2)
        return (u1, u2, -(u1 + u2))

    game = Game.from_function([("D", "C"), ("D", "C"), ("A", "B")], payoff, name)
    return TeamGame(game, TeamPartition((0, 1), 2))


def chicken_games() -> tuple[TeamGame, TeamGame]:
    """The chicken team game and its shared-utility version.

    In the second game each team player receives half the team total, which
    is what treating the team as one player amounts to.
    """
    shared = {k: (Fraction(a + b, 2),) * 2 for k, (a, b) in CHICKEN.items()}
    return _chicken_variant(CHICKEN, "chicken-a"), _chicken_variant(shared, "chicken-b")


def modified_chicken_game() -> TeamGame:
    labels = [("a1", "a2"), ("b1", "b2"), ("c1", "c2")]
    table = {
        ("a1", "b1", "c2"): (0, 7, 2),
        ("a1", "b2", "c2"): (0, 6, 6),
        ("a1", "b2", "c1"): (0, 2, 7),
    }
    game = Game.from_table(labels, table, default=(0, 0, 0), name="modified-chicken")
    return TeamGame(game, TeamPartition((0, 1), 2))


def exchangeability_counterexample() -> TeamGame:
    """Zero-sum team game with two CoEs that do not exchange."""
    labels = [("a1", "a2"), ("b1", "b2"), ("c1", "c2")]
    table = {
        ("a1", "b2", "c1"): (0, 1, -1),
        ("a2", "b1", "c1"): (1, 0, -1),
        ("a1", "b2", "c2"): (0, 1, -1),
        ("a2", "b1", "c2"): (1, 0, -1),
        ("a2", "b2", "c2"): (0, 1, -1),
    }
    game = Game.from_table(labels, table, default=(0, 0, 0), name="exchange-counter")
    return TeamGame(game, TeamPartition((0, 1), 2))


# -- two-player reduction ----------------------------------------------------

DUMMY_ACTION = "a1"


def reduce_two_player(g2: Game) -> TeamGame:
    """Zero-sum three-player team game equivalent to the two-player game ``g2``.

    A dummy team member with one action is prepended and absorbs
    ``-(u_2 + u_3)``; the original players become player 1 (team) and
    player 2 (adversary).
    """
    if g2.num_players != 2:
        raise GameInputError(f"expected a 2-player game, got {g2.num_players} players")

    def payoff(joint):
        u = g2.payoff(joint[1:])
        return (-(u[0] + u[1]), u[0], u[1])

    name = f"{g2.name}-reduced" if g2.name else "reduced"
    game = Game.from_function([(DUMMY_ACTION,)] + [list(a) for a in g2.actions], payoff, name)
    return TeamGame(game, TeamPartition((0, 1), 2))


def lift_profile(strategies: Sequence[MixedStrategy]) -> CoECandidate:
    """Map a 2-player profile (x_2, x_3) to the reduced game's (x_T, x_3)."""
    if len(strategies) != 2:
        raise GameInputError("expected a 2-player profile")
    team = CorrelatedTeamStrategy((0, 1), strategies[0].probs)
    return CoECandidate(team, MixedStrategy(2, strategies[1].probs))


def project_candidate(cand: CoECandidate) -> list[MixedStrategy]:
    """Inverse of :func:`lift_profile`."""
    return [MixedStrategy(0, cand.team_strategy.probs), MixedStrategy(1, cand.adversary_strategy.probs)]


# -- SAT gadget --------------------------------------------------------------

Literal = tuple[int, bool]


@dataclass(frozen=True)
class CnfFormula:
    """CNF over variables 1..num_vars; a literal is ``(var, positive)``."""

    num_vars: int
    clauses: tuple[frozenset, ...]

    def __post_init__(self):
        if not isinstance(self.num_vars, int) or self.num_vars < 1:
            raise GameInputError(f"num_vars must be a positive integer, got {self.num_vars!r}")
        clauses = []
        for k, clause in enumerate(self.clauses):
            clause = frozenset((int(v), bool(p)) for v, p in clause)
            if not clause:
                raise GameInputError(f"clause {k + 1} is empty")
            for v, _ in clause:
                if not 1 <= v <= self.num_vars:
                    raise GameInputError(f"clause {k + 1} uses variable {v} outside 1..{self.num_vars}")
            clauses.append(clause)
        object.__setattr__(self, "clauses", tuple(clauses))

    def literals(self) -> list[Literal]:
        return [(v, p) for v in range(1, self.num_vars + 1) for p in (True, False)]

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """``assignment[v - 1]`` is the value of variable v."""
        return all(any(assignment[v - 1] == p for v, p in clause) for clause in self.clauses)


def literal_label(lit: Literal) -> str:
    v, p = lit
    return f"z{v}" if p else f"~z{v}"


def satisfying_assignments(phi: CnfFormula) -> Iterator[tuple[bool, ...]]:
    for bits in itertools.product((True, False), repeat=phi.num_vars):
        if phi.satisfied_by(bits):
            yield bits


def parse_dimacs(text: str) -> CnfFormula:
    """Read a clause list: optional ``c`` comments and ``p cnf V C`` header,
    then signed integers with 0 ending each clause."""
    declared = None
    clauses: list[list[Literal]] = []
    current: list[Literal] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("expected 'p cnf <vars> <clauses>'", lineno, 1)
            try:
                declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("header counts must be integers", lineno, 1) from None
            continue
        col = 1
        for tok in line.split():
            col = raw.index(tok, col - 1) + 1
            try:
                n = int(tok)
            except ValueError:
                raise ParseError(f"expected a signed integer, got {tok!r}", lineno, col) from None
            if n == 0:
                if not current:
                    raise ParseError("empty clause", lineno, col)
                clauses.append(current)
                current = []
            else:
                current.append((abs(n), n > 0))
            col += len(tok)
    if current:
        clauses.append(current)
    if not clauses:
        raise ParseError("formula has no clauses")
    used = max(v for clause in clauses for v, _ in clause)
    num_vars = used
    if declared is not None:
        if used > declared[0]:
            raise ParseError(f"variable {used} exceeds declared count {declared[0]}")
        if len(clauses) != declared[1]:
            raise ParseError(f"header declares {declared[1]} clauses, found {len(clauses)}")
        num_vars = declared[0]
    return CnfFormula(num_vars, tuple(frozenset(c) for c in clauses))


def sat_game(phi: CnfFormula) -> Game:
    """Symmetric two-player game whose literal-supported equilibria encode
    satisfying assignments of ``phi``.

    Actions are the 2k literals, the k variables, the clauses and a fallback
    action ``f``. Any pair of strategies over literals that is not a
    consistent assignment lets some variable or clause action profit; ``f``
    always pays 1, so (f, f) is the equilibrium left when ``phi`` is
    unsatisfiable.
    """
    k = phi.num_vars
    lits = phi.literals()
    items = (
        [("lit", lit) for lit in lits]
        + [("var", v) for v in range(1, k + 1)]
        + [("clause", c) for c in phi.clauses]
        + [("f", None)]
    )
    labels = (
        [literal_label(lit) for lit in lits]
        + [f"y{v}" for v in range(1, k + 1)]
        + [f"c{j}" for j in range(1, len(phi.clauses) + 1)]
        + ["f"]
    )

    def u(x, y) -> int:
        kx, vx = x
        ky, vy = y
        if kx == "f":
            return 2 if ky == "f" else 1
        if ky != "lit":
            return -2
        if kx == "lit":
            if vx == vy:
                return 1
            if vx[0] == vy[0]:
                return -2
            return 1
        if kx == "var":
            return 2 - k if vy[0] == vx else 2
        return 2 - k if vy in vx else 2

    def payoff(joint):
        x, y = items[joint[0]], items[joint[1]]
        return (u(x, y), u(y, x))

    return Game.from_function([labels, labels], payoff, "sat-game")


def assignment_profile(phi: CnfFormula, assignment: Sequence[bool]) -> list[MixedStrategy]:
    """Both players uniform over the literals made true by ``assignment``."""
    game_size = 2 * phi.num_vars + phi.num_vars + len(phi.clauses) + 1
    probs = [Fraction(0)] * game_size
    for idx, (v, p) in enumerate(phi.literals()):
        if assignment[v - 1] == p:
            probs[idx] = Fraction(1, phi.num_vars)
    return [MixedStrategy(0, probs), MixedStrategy(1, probs)]


# -- random families -----------------------------------------------------------

GENERAL, ZERO_SUM, CONSISTENT_ZERO_SUM = "general", "zero_sum", "consistent_zero_sum"


def action_labels(num_players: int, sizes: Sequence[int]) -> list[list[str]]:
    """a1, a2, ... for player 0, b1, b2, ... for player 1, and so on."""
    if num_players > 26:
        return [[f"p{i + 1}_{j + 1}" for j in range(sizes[i])] for i in range(num_players)]
    return [[f"{chr(ord('a') + i)}{j + 1}" for j in range(sizes[i])] for i in range(num_players)]


def random_game(
    num_players: int,
    actions_per_player: Sequence[int] | int,
    seed: int,
    flavor: str = GENERAL,
    k_list: Optional[Sequence] = None,
    payoff_range: tuple[int, int] = (-9, 9),
) -> TeamGame:
    """Seeded random game with the last player as adversary.

    ``general`` draws every payoff independently. ``zero_sum`` draws the team
    payoffs and gives the adversary the negated sum. ``consistent_zero_sum``
    draws a team total u_T and gives team player i ``u_T / k_i``; the
    ``k_list`` constants must be positive with reciprocals summing to 1.
    """
    if num_players < 2:
        raise GameInputError("a game needs at least 2 players")
    if isinstance(actions_per_player, int):
        sizes = [actions_per_player] * num_players
    else:
        sizes = list(actions_per_player)
    if len(sizes) != num_players or any(s < 1 for s in sizes):
        raise GameInputError(f"invalid action counts {sizes} for {num_players} players")
    total = 1
    for s in sizes:
        total *= s
    if total > MAX_RANDOM_JOINT_ACTIONS:
        raise ScaleError(f"{total} joint actions exceeds the {MAX_RANDOM_JOINT_ACTIONS} ceiling")
    team = num_players - 1
    ks = None
    if flavor == CONSISTENT_ZERO_SUM:
        if k_list is None:
            raise GameInputError("consistent_zero_sum needs k_list")
        ks = [as_fraction(k) for k in k_list]
        if len(ks) != team:
            raise GameInputError(f"k_list needs {team} entries, got {len(ks)}")
        if any(k <= 0 for k in ks):
            raise GameInputError("every k must be positive")
        if sum(1 / k for k in ks) != 1:
            raise GameInputError("reciprocals of k_list must sum to 1")
    elif flavor not in (GENERAL, ZERO_SUM):
        raise GameInputError(f"unknown flavor {flavor!r}")

    rng = random.Random(seed)
    lo, hi = payoff_range

    def payoff(_joint):
        if flavor == GENERAL:
            return [rng.randint(lo, hi) for _ in range(num_players)]
        if flavor == ZERO_SUM:
            row = [Fraction(rng.randint(lo, hi)) for _ in range(team)]
            return row + [-sum(row)]
        u_T = Fraction(rng.randint(lo, hi))
        return [u_T / k for k in ks] + [-u_T]

    name = f"random-{flavor}-{seed}"
    game = Game.from_function(action_labels(num_players, sizes), payoff, name)
    return TeamGame(game, TeamPartition(tuple(range(team)), team))


__all__ = [
    "chicken_games",
    "modified_chicken_game",
    "exchangeability_counterexample",
    "reduce_two_player",
    "lift_profile",
    "project_candidate",
    "CnfFormula",
    "literal_label",
    "satisfying_assignments",
    "parse_dimacs",
    "sat_game",
    "assignment_profile",
    "action_labels",
    "random_game",
    "GENERAL",
    "ZERO_SUM",
    "CONSISTENT_ZERO_SUM",
]
