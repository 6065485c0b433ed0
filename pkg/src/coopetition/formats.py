"""Line-oriented text formats for games, strategies and reports.

Players are numbered from 1 in every text format. Rationals are written as
integers or ``p/q`` in lowest terms; any rational spelling is accepted on
input.

Game file::

    coopetition-game 1
    name chicken-a
    players 3
    actions 1 D C
    actions 2 D C
    actions 3 A B
    team 1 2
    adversary 3
    payoffs
    D D A : 10 10 -20
    ...

Strategy file (kind ``product``, ``correlated-team`` or ``joint``)::

    coopetition-strategy 1
    kind correlated-team
    team C C : 1/2
    team D C : 1/4
    team C D : 1/4
    adversary B : 1

Product files use ``player <id> <label> : <p>`` lines and joint files use
``joint <labels...> : <p>``. Omitted entries have probability 0. ``#``
starts a comment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .equilibria import Classification, ConsistencyReport, TmcoeResult, VerificationReport
from .exceptions import GameInputError, ParseError
from .game import (
    CoECandidate,
    CorrelatedTeamStrategy,
    Game,
    MixedStrategy,
    TeamGame,
    TeamPartition,
    team_joint_actions,
)

GAME_HEADER = "coopetition-game"
STRATEGY_HEADER = "coopetition-strategy"
FORMAT_VERSION = "1"
PRODUCT, CORRELATED_TEAM, JOINT = "product", "correlated-team", "joint"


def fmt(value: Fraction) -> str:
    return str(Fraction(value))


def _lines(text: str):
    """Yield (line number, [(column, token), ...]) for non-blank lines."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        tokens = []
        col = 0
        for tok in line.split():
            col = line.index(tok, col)
            tokens.append((col + 1, tok))
            col += len(tok)
        if tokens:
            yield lineno, tokens


def _rational(tok: str, lineno: int, col: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {tok!r}", lineno, col) from None


def _int(tok: str, lineno: int, col: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", lineno, col) from None


def _header(lines, expected: str):
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("empty document") from None
    if tokens[0][1] != expected:
        raise ParseError(f"expected header {expected!r}, got {tokens[0][1]!r}", lineno, tokens[0][0])
    if len(tokens) != 2 or tokens[1][1] != FORMAT_VERSION:
        got = tokens[1][1] if len(tokens) > 1 else "nothing"
        raise ParseError(f"unsupported format version {got!r}, expected {FORMAT_VERSION}", lineno, tokens[0][0])


def _split_record(tokens, lineno):
    """Split ``labels... : numbers...`` at the colon."""
    for k, (col, tok) in enumerate(tokens):
        if tok == ":":
            return tokens[:k], tokens[k + 1:]
    raise ParseError("expected ':' between action labels and values", lineno, tokens[-1][0])


# -- games ---------------------------------------------------------------------


def parse_game(text: str) -> TeamGame:
    lines = _lines(text)
    _header(lines, GAME_HEADER)
    name = ""
    num_players = None
    actions: dict[int, tuple[str, ...]] = {}
    team = None
    adversary = None
    header_line = None
    for lineno, tokens in lines:
        key = tokens[0][1]
        args = tokens[1:]
        if key == "payoffs":
            header_line = lineno
            break
        if key == "name":
            name = " ".join(t for _, t in args)
        elif key == "players":
            if len(args) != 1:
                raise ParseError("expected 'players <n>'", lineno, tokens[0][0])
            num_players = _int(args[0][1], lineno, args[0][0], "player count")
            if num_players < 2:
                raise ParseError("a game needs at least 2 players", lineno, args[0][0])
        elif key == "actions":
            if num_players is None:
                raise ParseError("'actions' before 'players'", lineno, tokens[0][0])
            if len(args) < 2:
                raise ParseError("expected 'actions <player> <labels...>'", lineno, tokens[0][0])
            pid = _int(args[0][1], lineno, args[0][0], "player id")
            if not 1 <= pid <= num_players:
                raise ParseError(f"player id {pid} outside 1..{num_players}", lineno, args[0][0])
            if pid in actions:
                raise ParseError(f"actions for player {pid} given twice", lineno, args[0][0])
            labels = tuple(t for _, t in args[1:])
            if ":" in labels:
                raise ParseError("':' cannot be an action label", lineno, args[0][0])
            repeat = next((k for k in range(1, len(labels)) if labels[k] in labels[:k]), None)
            if repeat is not None:
                raise ParseError(f"duplicate action label for player {pid}", lineno, args[repeat + 1][0])
            actions[pid] = labels
        elif key == "team":
            if not args:
                raise ParseError("team needs at least one player", lineno, tokens[0][0])
            team = [(_int(t, lineno, c, "player id"), lineno, c) for c, t in args]
        elif key == "adversary":
            if len(args) != 1:
                raise ParseError("expected 'adversary <player>'", lineno, tokens[0][0])
            adversary = (_int(args[0][1], lineno, args[0][0], "player id"), lineno, args[0][0])
        else:
            raise ParseError(f"unknown header field {key!r}", lineno, tokens[0][0])
    if header_line is None:
        raise ParseError("missing 'payoffs' section")
    if num_players is None:
        raise ParseError("missing 'players' line")
    for pid in range(1, num_players + 1):
        if pid not in actions:
            raise ParseError(f"missing actions for player {pid}")
    if team is None or adversary is None:
        raise ParseError("missing 'team' or 'adversary' line")
    for pid, lineno, col in team + [adversary]:
        if not 1 <= pid <= num_players:
            raise ParseError(f"player id {pid} outside 1..{num_players}", lineno, col)
    team_ids = tuple(sorted(p - 1 for p, _, _ in team))
    partition = TeamPartition(team_ids, adversary[0] - 1)

    action_list = [actions[p] for p in range(1, num_players + 1)]
    index = [{lab: k for k, lab in enumerate(acts)} for acts in action_list]
    records: dict[tuple[int, ...], tuple[Fraction, ...]] = {}
    for lineno, tokens in lines:
        labels, values = _split_record(tokens, lineno)
        if len(labels) != num_players:
            raise ParseError(f"expected {num_players} action labels, got {len(labels)}", lineno, tokens[0][0])
        joint = []
        for i, (col, lab) in enumerate(labels):
            if lab not in index[i]:
                raise ParseError(f"unknown action {lab!r} for player {i + 1}", lineno, col)
            joint.append(index[i][lab])
        joint = tuple(joint)
        if joint in records:
            raise ParseError(f"duplicate record for {' '.join(t for _, t in labels)}", lineno, tokens[0][0])
        if len(values) != num_players:
            col = values[0][0] if values else tokens[-1][0]
            raise ParseError(f"expected {num_players} payoffs, got {len(values)}", lineno, col)
        records[joint] = tuple(_rational(t, lineno, c) for c, t in values)

    shape = [len(a) for a in action_list]
    rows = []
    for joint in itertools.product(*map(range, shape)):
        if joint not in records:
            missing = " ".join(action_list[i][a] for i, a in enumerate(joint))
            raise ParseError(f"missing payoff record for joint action {missing}")
        rows.append(records[joint])
    try:
        game = Game(tuple(action_list), tuple(rows), name)
        partition.validate(game)
    except GameInputError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from None
    return TeamGame(game, partition)


def emit_game(game: Game, partition: TeamPartition) -> str:
    partition.validate(game)
    out = [f"{GAME_HEADER} {FORMAT_VERSION}"]
    if game.name:
        out.append(f"name {game.name}")
    out.append(f"players {game.num_players}")
    for i, acts in enumerate(game.actions):
        out.append(f"actions {i + 1} " + " ".join(acts))
    out.append("team " + " ".join(str(i + 1) for i in partition.team))
    out.append(f"adversary {partition.adversary + 1}")
    out.append("payoffs")
    for joint in game.joint_actions():
        out.append(" ".join(game.labels(joint)) + " : " + " ".join(fmt(v) for v in game.payoff(joint)))
    return "\n".join(out) + "\n"


# -- strategies ------------------------------------------------------------------

Strategy = Union[list, CoECandidate, tuple]


@dataclass(frozen=True)
class StrategyDocument:
    """A parsed strategy file.

    ``value`` is a list of :class:`MixedStrategy` (product), a
    :class:`CoECandidate` (correlated-team) or a tuple of probabilities over
    all joint actions (joint).
    """

    kind: str
    value: Strategy


def parse_strategy(text: str, game: Game, partition: TeamPartition) -> StrategyDocument:
    lines = _lines(text)
    _header(lines, STRATEGY_HEADER)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ParseError("missing 'kind' line") from None
    if tokens[0][1] != "kind" or len(tokens) != 2:
        raise ParseError("expected 'kind <product|correlated-team|joint>'", lineno, tokens[0][0])
    kind = tokens[1][1]
    if kind not in (PRODUCT, CORRELATED_TEAM, JOINT):
        raise ParseError(f"unknown strategy kind {kind!r}", lineno, tokens[1][0])

    def label_index(player, col, lab, lineno):
        try:
            return game.actions[player].index(lab)
        except ValueError:
            raise ParseError(f"unknown action {lab!r} for player {player + 1}", lineno, col) from None

    dists: dict[str, list[Fraction]] = {}
    allowed = {PRODUCT: "player", CORRELATED_TEAM: ("team", "adversary"), JOINT: "joint"}[kind]
    team_index = {j: k for k, j in enumerate(team_joint_actions(game, partition.team))}
    seen = set()
    for lineno, tokens in lines:
        key = tokens[0][1]
        if key not in allowed:
            raise ParseError(f"'{key}' lines are not allowed in a {kind} file", lineno, tokens[0][0])
        labels, values = _split_record(tokens[1:], lineno)
        if len(values) != 1:
            col = values[1][0] if len(values) > 1 else tokens[-1][0]
            raise ParseError("expected exactly one probability after ':'", lineno, col)
        prob = _rational(values[0][1], lineno, values[0][0])
        if prob < 0:
            raise ParseError("negative probability", lineno, values[0][0])
        if key == "player":
            if len(labels) != 2:
                raise ParseError("expected 'player <id> <label> : <p>'", lineno, tokens[0][0])
            pid = _int(labels[0][1], lineno, labels[0][0], "player id") - 1
            if not 0 <= pid < game.num_players:
                raise ParseError(f"player id {pid + 1} outside 1..{game.num_players}", lineno, labels[0][0])
            slot = (f"player {pid + 1}", label_index(pid, labels[1][0], labels[1][1], lineno))
            dists.setdefault(slot[0], [Fraction(0)] * game.shape[pid])
        elif key == "team":
            if len(labels) != len(partition.team):
                raise ParseError(f"expected {len(partition.team)} team labels", lineno, tokens[0][0])
            joint = tuple(label_index(p, c, lab, lineno) for p, (c, lab) in zip(partition.team, labels))
            slot = ("team", team_index[joint])
            dists.setdefault("team", [Fraction(0)] * len(team_index))
        elif key == "adversary":
            if len(labels) != 1:
                raise ParseError("expected 'adversary <label> : <p>'", lineno, tokens[0][0])
            slot = ("adversary", label_index(partition.adversary, labels[0][0], labels[0][1], lineno))
            dists.setdefault("adversary", [Fraction(0)] * game.shape[partition.adversary])
        else:
            if len(labels) != game.num_players:
                raise ParseError(f"expected {game.num_players} action labels", lineno, tokens[0][0])
            joint = tuple(label_index(p, c, lab, lineno) for p, (c, lab) in enumerate(labels))
            slot = ("joint", game.flat_index(joint))
            dists.setdefault("joint", [Fraction(0)] * game.num_joint_actions)
        if slot in seen:
            raise ParseError("entry given twice", lineno, tokens[0][0])
        seen.add(slot)
        dists[slot[0]][slot[1]] = prob

    if kind == PRODUCT:
        required = [f"player {i + 1}" for i in range(game.num_players)]
    elif kind == CORRELATED_TEAM:
        required = ["team", "adversary"]
    else:
        required = ["joint"]
    for name in required:
        if name not in dists:
            raise ParseError(f"no entries for {name}")
        total = sum(dists[name])
        if total != 1:
            raise ParseError(f"probabilities for {name} sum to {fmt(total)}, not 1")

    if kind == PRODUCT:
        value = [MixedStrategy(i, tuple(dists[f"player {i + 1}"])) for i in range(game.num_players)]
    elif kind == CORRELATED_TEAM:
        value = CoECandidate(
            CorrelatedTeamStrategy(partition.team, tuple(dists["team"])),
            MixedStrategy(partition.adversary, tuple(dists["adversary"])),
        )
    else:
        value = tuple(dists["joint"])
    return StrategyDocument(kind, value)


def emit_strategy(game: Game, partition: TeamPartition, value: Strategy) -> str:
    """Canonical strategy file for a product profile, a CoE candidate or a joint distribution."""
    partition.validate(game)
    if isinstance(value, CoECandidate):
        out = [f"kind {CORRELATED_TEAM}"]
        for joint, p in value.team_strategy.items(game):
            if p:
                labels = " ".join(game.actions[i][a] for i, a in zip(partition.team, joint))
                out.append(f"team {labels} : {fmt(p)}")
        for a, p in enumerate(value.adversary_strategy.probs):
            if p:
                out.append(f"adversary {game.actions[partition.adversary][a]} : {fmt(p)}")
    elif isinstance(value, tuple):
        out = [f"kind {JOINT}"]
        for joint, p in zip(game.joint_actions(), value):
            if p:
                out.append(f"joint {' '.join(game.labels(joint))} : {fmt(p)}")
    else:
        out = [f"kind {PRODUCT}"]
        for s in value:
            for a, p in enumerate(s.probs):
                if p:
                    out.append(f"player {s.player + 1} {game.actions[s.player][a]} : {fmt(p)}")
    return f"{STRATEGY_HEADER} {FORMAT_VERSION}\n" + "\n".join(out) + "\n"


# -- reports -----------------------------------------------------------------------


def _bool(v: Optional[bool]) -> str:
    return "n/a" if v is None else str(bool(v)).lower()


def format_verification(report: VerificationReport, game: Game) -> str:
    out = [f"concept: {report.concept.value}", f"holds: {_bool(report.holds)}",
           f"violation_count: {len(report.violations)}"]
    for v in report.violations:
        acts = game.actions[v.player]
        rec = "-" if v.action is None else acts[v.action]
        out.append(
            f"violation: player={v.player + 1} recommended={rec} deviation={acts[v.deviation]} gain={fmt(v.amount)}"
        )
    return "\n".join(out) + "\n"


def _candidate_lines(game: Game, partition: TeamPartition, cand: CoECandidate) -> list[str]:
    out = []
    for joint, p in cand.team_strategy.items(game):
        if p:
            labels = " ".join(game.actions[i][a] for i, a in zip(partition.team, joint))
            out.append(f"team_mass: {labels} = {fmt(p)}")
    for a, p in enumerate(cand.adversary_strategy.probs):
        if p:
            out.append(f"adversary_mass: {game.actions[partition.adversary][a]} = {fmt(p)}")
    return out


def format_tmcoe(result: Optional[TmcoeResult], game: Game, partition: TeamPartition) -> str:
    if result is None:
        return "found: false\n"
    out = [
        "found: true",
        f"method: {result.method.value}",
        f"team_value: {fmt(result.team_value)}",
        f"certified_exact: {_bool(result.certified_exact)}",
        f"grid_resolution: {'n/a' if result.grid_resolution is None else result.grid_resolution}",
    ]
    out.extend(_candidate_lines(game, partition, result.candidate))
    return "\n".join(out) + "\n"


def format_candidate(game: Game, partition: TeamPartition, cand: CoECandidate, team_value: Fraction) -> str:
    return "\n".join([f"team_value: {fmt(team_value)}"] + _candidate_lines(game, partition, cand)) + "\n"


def format_consistency(report: ConsistencyReport, game: Game) -> str:
    out = [f"consistent: {_bool(report.consistent)}"]
    for i, k in sorted(report.constants.items()):
        out.append(f"constant: player={i + 1} k={fmt(k)} share={fmt(1 / k)}")
    for w in report.witnesses:
        dev = "-" if w.deviation_joint is None else " ".join(game.labels(w.deviation_joint))
        out.append(f"witness: player={w.player + 1} joint={' '.join(game.labels(w.joint))} deviation={dev}")
    return "\n".join(out) + "\n"


def format_profiles(game: Game, profiles: Sequence[Sequence[MixedStrategy]]) -> str:
    out = [f"equilibrium_count: {len(profiles)}"]
    for n, profile in enumerate(profiles, 1):
        parts = []
        for s in profile:
            masses = ",".join(f"{game.actions[s.player][a]}={fmt(p)}" for a, p in enumerate(s.probs) if p)
            parts.append(f"p{s.player + 1}[{masses}]")
        out.append(f"equilibrium: {n} " + " ".join(parts))
    return "\n".join(out) + "\n"


def format_classification(c: Classification) -> str:
    out = [
        f"form: {c.form}",
        f"u_T: {fmt(c.team_value)}",
        f"stable: {_bool(c.stable)}",
        f"ne: {_bool(c.ne)}",
        f"coe: {_bool(c.coe)}",
        f"tmcoe: {_bool(c.tmcoe)}",
        f"grid_resolution: {c.grid_resolution}",
        f"grid_optimum: {'none' if c.grid_optimum is None else fmt(c.grid_optimum)}",
        f"stable_definition: {c.stable_definition}",
    ]
    return "\n".join(out) + "\n"


def parse_report(text: str) -> list[tuple[str, str]]:
    """Split a report into (label, value) pairs, preserving order and repeats."""
    pairs = []
    for line in text.splitlines():
        if line.strip():
            label, _, value = line.partition(": ")
            pairs.append((label, value))
    return pairs


__all__ = [
    "PRODUCT",
    "CORRELATED_TEAM",
    "JOINT",
    "StrategyDocument",
    "parse_game",
    "emit_game",
    "parse_strategy",
    "emit_strategy",
    "format_verification",
    "format_tmcoe",
    "format_candidate",
    "format_consistency",
    "format_profiles",
    "format_classification",
    "parse_report",
]
