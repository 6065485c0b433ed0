"""Normal-form games with a team/adversary partition, and exact expected utilities.

All payoffs and probabilities are :class:`fractions.Fraction`. Players are
0-based indices in the Python API. Joint actions are tuples of per-player
action indices and are always enumerated in lexicographic order (the last
player's index varies fastest); this fixes both the flat payoff layout of
:class:`Game` and the indexing of :class:`CorrelatedTeamStrategy`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, NamedTuple, Sequence, Union

from .exceptions import GameInputError

Rational = Fraction
Number = Union[int, Fraction, str]


def as_fraction(value) -> Fraction:
    """Coerce ``int``, ``Fraction`` or a ``"p/q"`` string to a Fraction.

    Floats are rejected: the library never rounds.
    """
    if isinstance(value, bool):
        raise GameInputError(f"not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise GameInputError(f"not a rational number: {value!r}") from None
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise GameInputError(f"not an exact rational: {value!r}")


@dataclass(frozen=True)
class Game:
    """An n-player normal-form game.

    ``actions[i]`` holds player ``i``'s action labels. ``payoffs`` is flat,
    one n-tuple per joint action in lexicographic joint order.
    """

    actions: tuple[tuple[str, ...], ...]
    payoffs: tuple[tuple[Fraction, ...], ...]
    name: str = ""
    _strides: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        actions = tuple(tuple(str(a) for a in acts) for acts in self.actions)
        n = len(actions)
        if n < 2:
            raise GameInputError(f"a game needs at least 2 players, got {n}")
        for i, acts in enumerate(actions):
            if not acts:
                raise GameInputError(f"player {i} has no actions")
            if len(set(acts)) != len(acts):
                raise GameInputError(f"player {i} has duplicate action labels")
        size = math.prod(len(a) for a in actions)
        payoffs = tuple(tuple(as_fraction(v) for v in row) for row in self.payoffs)
        if len(payoffs) != size:
            raise GameInputError(f"expected {size} payoff records, got {len(payoffs)}")
        for k, row in enumerate(payoffs):
            if len(row) != n:
                raise GameInputError(f"payoff record {k} has {len(row)} entries, expected {n}")
        strides = [1] * n
        for i in range(n - 2, -1, -1):
            strides[i] = strides[i + 1] * len(actions[i + 1])
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "payoffs", payoffs)
        object.__setattr__(self, "_strides", tuple(strides))

    @classmethod
    def from_function(
        cls,
        actions: Sequence[Sequence[str]],
        payoff_fn: Callable[[tuple[int, ...]], Sequence[Number]],
        name: str = "",
    ) -> "Game":
        """Build a game by calling ``payoff_fn(joint)`` for every joint action."""
        shape = [len(a) for a in actions]
        rows = [tuple(payoff_fn(joint)) for joint in itertools.product(*map(range, shape))]
        return cls(tuple(map(tuple, actions)), tuple(rows), name)

    @classmethod
    def from_table(
        cls,
        actions: Sequence[Sequence[str]],
        table: Mapping[tuple[str, ...], Sequence[Number]],
        default: Sequence[Number] | None = None,
        name: str = "",
    ) -> "Game":
        """Build a game from ``{label tuple: payoffs}``; missing entries use ``default``."""
        actions = [list(a) for a in actions]
        for labels in table:
            for i, lab in enumerate(labels):
                if lab not in actions[i]:
                    raise GameInputError(f"unknown action {lab!r} for player {i}")

        def lookup(joint):
            labels = tuple(actions[i][a] for i, a in enumerate(joint))
            if labels in table:
                return table[labels]
            if default is None:
                raise GameInputError(f"no payoffs given for {labels}")
            return default

        return cls.from_function(actions, lookup, name)

    @property
    def num_players(self) -> int:
        return len(self.actions)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.actions)

    @property
    def num_joint_actions(self) -> int:
        return len(self.payoffs)

    def joint_actions(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*map(range, self.shape))

    def flat_index(self, joint: Sequence[int]) -> int:
        return sum(a * s for a, s in zip(joint, self._strides))

    def payoff(self, joint: Sequence[int]) -> tuple[Fraction, ...]:
        return self.payoffs[self.flat_index(joint)]

    def utility(self, player: int, joint: Sequence[int]) -> Fraction:
        return self.payoffs[self.flat_index(joint)][player]

    def action_index(self, player: int, label: str) -> int:
        try:
            return self.actions[player].index(label)
        except ValueError:
            raise GameInputError(f"player {player} has no action {label!r}") from None

    def labels(self, joint: Sequence[int]) -> tuple[str, ...]:
        return tuple(self.actions[i][a] for i, a in enumerate(joint))

    def joint_from_labels(self, labels: Sequence[str]) -> tuple[int, ...]:
        if len(labels) != self.num_players:
            raise GameInputError(f"expected {self.num_players} action labels, got {len(labels)}")
        return tuple(self.action_index(i, lab) for i, lab in enumerate(labels))

    def is_zero_sum(self) -> bool:
        return all(sum(row) == 0 for row in self.payoffs)

    def permute_players(self, order: Sequence[int]) -> "Game":
        """Return the same game with player ``order[k]`` moved to position ``k``."""
        if sorted(order) != list(range(self.num_players)):
            raise GameInputError(f"not a permutation of the players: {order}")

        def fn(joint):
            original = [0] * self.num_players
            for k, p in enumerate(order):
                original[p] = joint[k]
            row = self.payoff(original)
            return [row[p] for p in order]

        return Game.from_function([self.actions[p] for p in order], fn, self.name)


class TeamPartition(NamedTuple):
    """The team (sorted player indices) and the single adversary."""

    team: tuple[int, ...]
    adversary: int

    @classmethod
    def last_is_adversary(cls, game: Game) -> "TeamPartition":
        n = game.num_players
        return cls(tuple(range(n - 1)), n - 1)

    def validate(self, game: Game) -> None:
        team = tuple(self.team)
        if not team:
            raise GameInputError("the team must have at least one player")
        if list(team) != sorted(set(team)):
            raise GameInputError(f"team must be sorted and duplicate-free: {team}")
        if self.adversary in team:
            raise GameInputError("the adversary cannot be a team member")
        if sorted(team + (self.adversary,)) != list(range(game.num_players)):
            raise GameInputError(
                f"team {team} and adversary {self.adversary} do not partition "
                f"the {game.num_players} players"
            )


class TeamGame(NamedTuple):
    game: Game
    partition: TeamPartition


def _check_distribution(probs: tuple[Fraction, ...], what: str) -> None:
    if not probs:
        raise GameInputError(f"{what} is empty")
    if any(p < 0 for p in probs):
        raise GameInputError(f"{what} has a negative probability")
    total = sum(probs)
    if total != 1:
        raise GameInputError(f"{what} sums to {total}, not 1")


@dataclass(frozen=True)
class MixedStrategy:
    player: int
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(as_fraction(p) for p in self.probs)
        _check_distribution(probs, f"strategy of player {self.player}")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def pure(cls, player: int, index: int, size: int) -> "MixedStrategy":
        return cls(player, tuple(Fraction(int(k == index)) for k in range(size)))

    @classmethod
    def uniform(cls, player: int, size: int) -> "MixedStrategy":
        return cls(player, (Fraction(1, size),) * size)

    @classmethod
    def from_labels(cls, game: Game, player: int, masses: Mapping[str, Number]) -> "MixedStrategy":
        probs = [Fraction(0)] * game.shape[player]
        for label, p in masses.items():
            probs[game.action_index(player, label)] = as_fraction(p)
        return cls(player, tuple(probs))

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, p in enumerate(self.probs) if p)

    def is_pure(self) -> bool:
        return len(self.support()) == 1


def team_joint_actions(game: Game, team: Sequence[int]) -> list[tuple[int, ...]]:
    """Joint team actions in lexicographic order (team members in index order)."""
    return list(itertools.product(*(range(game.shape[i]) for i in team)))


def assemble(partition: TeamPartition, team_joint: Sequence[int], adversary_action: int) -> tuple[int, ...]:
    """Full joint action from a team joint action and an adversary action."""
    joint = [0] * (len(partition.team) + 1)
    for i, a in zip(partition.team, team_joint):
        joint[i] = a
    joint[partition.adversary] = adversary_action
    return tuple(joint)


@dataclass(frozen=True)
class CorrelatedTeamStrategy:
    """A distribution over joint team actions, indexed as :func:`team_joint_actions`."""

    team: tuple[int, ...]
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(as_fraction(p) for p in self.probs)
        _check_distribution(probs, "correlated team strategy")
        object.__setattr__(self, "team", tuple(self.team))
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_labels(
        cls, game: Game, team: Sequence[int], masses: Mapping[tuple[str, ...], Number]
    ) -> "CorrelatedTeamStrategy":
        index = {joint: k for k, joint in enumerate(team_joint_actions(game, team))}
        probs = [Fraction(0)] * len(index)
        for labels, p in masses.items():
            if len(labels) != len(team):
                raise GameInputError(f"expected {len(team)} team labels, got {labels}")
            joint = tuple(game.action_index(i, lab) for i, lab in zip(team, labels))
            probs[index[joint]] = as_fraction(p)
        return cls(tuple(team), tuple(probs))

    @classmethod
    def pure(cls, game: Game, team: Sequence[int], team_joint: Sequence[int]) -> "CorrelatedTeamStrategy":
        joints = team_joint_actions(game, team)
        target = tuple(team_joint)
        return cls(tuple(team), tuple(Fraction(int(j == target)) for j in joints))

    def marginal(self, game: Game, player: int) -> MixedStrategy:
        pos = self.team.index(player)
        probs = [Fraction(0)] * game.shape[player]
        for joint, p in zip(team_joint_actions(game, self.team), self.probs):
            probs[joint[pos]] += p
        return MixedStrategy(player, tuple(probs))

    def items(self, game: Game) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return zip(team_joint_actions(game, self.team), self.probs)


@dataclass(frozen=True)
class CoECandidate:
    team_strategy: CorrelatedTeamStrategy
    adversary_strategy: MixedStrategy

    def validate(self, game: Game, partition: TeamPartition) -> None:
        partition.validate(game)
        if tuple(self.team_strategy.team) != tuple(partition.team):
            raise GameInputError(
                f"candidate team {self.team_strategy.team} does not match partition team {partition.team}"
            )
        if self.adversary_strategy.player != partition.adversary:
            raise GameInputError(
                f"candidate adversary {self.adversary_strategy.player} does not match {partition.adversary}"
            )
        expected = math.prod(game.shape[i] for i in partition.team)
        if len(self.team_strategy.probs) != expected:
            raise GameInputError(
                f"team strategy has {len(self.team_strategy.probs)} entries, expected {expected}"
            )
        if len(self.adversary_strategy.probs) != game.shape[partition.adversary]:
            raise GameInputError("adversary strategy has the wrong number of actions")


def validate_profile(game: Game, strategies: Sequence[MixedStrategy]) -> None:
    if len(strategies) != game.num_players:
        raise GameInputError(f"expected {game.num_players} strategies, got {len(strategies)}")
    for i, s in enumerate(strategies):
        if s.player != i:
            raise GameInputError(f"strategy {i} belongs to player {s.player}")
        if len(s.probs) != game.shape[i]:
            raise GameInputError(
                f"player {i} strategy has {len(s.probs)} entries, game has {game.shape[i]} actions"
            )


def _product_weights(strategies: Sequence[MixedStrategy], skip: int | None = None):
    """Yield (joint, weight) over the support of the product distribution."""
    supports = []
    for i, s in enumerate(strategies):
        if i == skip:
            supports.append([(None, Fraction(1))])
        else:
            supports.append([(k, p) for k, p in enumerate(s.probs) if p])
    for combo in itertools.product(*supports):
        weight = Fraction(1)
        for _, p in combo:
            weight *= p
        yield [k for k, _ in combo], weight


def expected_utility(game: Game, strategies: Sequence[MixedStrategy], player: int) -> Fraction:
    """Exact expected payoff of ``player`` under the product of ``strategies``."""
    validate_profile(game, strategies)
    total = Fraction(0)
    for joint, weight in _product_weights(strategies):
        total += weight * game.utility(player, joint)
    return total


def deviation_payoffs(game: Game, strategies: Sequence[MixedStrategy], player: int) -> list[Fraction]:
    """``u_player(a, x_-player)`` for every pure action ``a`` of ``player``."""
    validate_profile(game, strategies)
    values = [Fraction(0)] * game.shape[player]
    for joint, weight in _product_weights(strategies, skip=player):
        for a in range(game.shape[player]):
            joint[player] = a
            values[a] += weight * game.utility(player, joint)
    return values


def joint_distribution(game: Game, strategies: Sequence[MixedStrategy]) -> tuple[Fraction, ...]:
    """The product distribution over all joint actions, in flat payoff order."""
    validate_profile(game, strategies)
    dist = [Fraction(0)] * game.num_joint_actions
    for joint, weight in _product_weights(strategies):
        dist[game.flat_index(joint)] = weight
    return tuple(dist)


def expected_utility_correlated(
    game: Game, partition: TeamPartition, cand: CoECandidate, who: int | str
) -> Fraction:
    """Expected payoff of player ``who`` (or the team total for ``"team"``)."""
    cand.validate(game, partition)
    if who == "team":
        players = partition.team
    elif isinstance(who, int) and 0 <= who < game.num_players:
        players = (who,)
    else:
        raise GameInputError(f"unknown player {who!r}")
    x_n = cand.adversary_strategy.probs
    total = Fraction(0)
    for team_joint, p in cand.team_strategy.items(game):
        if not p:
            continue
        for a_n, q in enumerate(x_n):
            if not q:
                continue
            row = game.payoff(assemble(partition, team_joint, a_n))
            total += p * q * sum(row[i] for i in players)
    return total


def product_to_correlated(strategies: Sequence[MixedStrategy]) -> CorrelatedTeamStrategy:
    """Product distribution over joint team actions; marginals equal the inputs."""
    if not strategies:
        raise GameInputError("need at least one team strategy")
    ordered = sorted(strategies, key=lambda s: s.player)
    team = tuple(s.player for s in ordered)
    if len(set(team)) != len(team):
        raise GameInputError("duplicate team player strategies")
    probs = []
    for combo in itertools.product(*(s.probs for s in ordered)):
        w = Fraction(1)
        for p in combo:
            w *= p
        probs.append(w)
    return CorrelatedTeamStrategy(team, tuple(probs))
