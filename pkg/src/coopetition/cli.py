"""Command-line front end.

Exit status: 0 success (or the checked property holds), 1 verification
failed, 2 usage, I/O or parse error, 3 precondition or scale error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import equilibria, formats, generators
from .exceptions import GameInputError, ParseError, PreconditionError, ScaleError
from .game import CoECandidate, TeamPartition, expected_utility_correlated, joint_distribution, product_to_correlated
from .nash import find_nash_support_enumeration

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3
FAMILIES = ("chicken-a", "chicken-b", "modified-chicken", "exchange-counter", "random")
FLAVORS = (generators.GENERAL, generators.ZERO_SUM, generators.CONSISTENT_ZERO_SUM)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: Optional[str], text: str, out) -> None:
    if path is None or path == "-":
        out.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _load_game(path):
    return formats.parse_game(_read(path))


def _load_strategy(path, game, partition, kinds=None):
    doc = formats.parse_strategy(_read(path), game, partition)
    if kinds is not None and doc.kind not in kinds:
        raise UsageError(f"{path}: expected a {' or '.join(kinds)} strategy, got {doc.kind}")
    return doc


def cmd_generate(args, out):
    if args.family == "chicken-a":
        game, part = generators.chicken_games()[0]
    elif args.family == "chicken-b":
        game, part = generators.chicken_games()[1]
    elif args.family == "modified-chicken":
        game, part = generators.modified_chicken_game()
    elif args.family == "exchange-counter":
        game, part = generators.exchangeability_counterexample()
    else:
        try:
            dims = [int(d) for d in args.dims.split("x")] if args.dims else [2, 2, 2]
        except ValueError:
            raise UsageError(f"--dims must look like 2x3x2, got {args.dims!r}") from None
        ks = [k for k in args.k.split(",")] if args.k else None
        if args.flavor == generators.CONSISTENT_ZERO_SUM and ks is None:
            ks = [str(len(dims) - 1)] * (len(dims) - 1)
        game, part = generators.random_game(len(dims), dims, args.seed, args.flavor, ks)
    _write(args.output, formats.emit_game(game, part), out)
    return EXIT_OK


def cmd_verify(args, out):
    game, part = _load_game(args.game)
    doc = _load_strategy(args.candidate, game, part)
    concept = args.concept
    if concept == "ne":
        if doc.kind != formats.PRODUCT:
            raise UsageError("NE verification needs a product strategy file")
        report = equilibria.verify_ne(game, doc.value)
    elif concept == "ce":
        if doc.kind == formats.JOINT:
            dist = doc.value
        elif doc.kind == formats.PRODUCT:
            dist = joint_distribution(game, doc.value)
        else:
            raise UsageError("CE verification needs a joint or product strategy file")
        report = equilibria.verify_ce(game, dist)
    else:
        cand = _as_candidate(doc, part)
        if concept == "coe":
            report = equilibria.verify_coe(game, part, cand)
        else:
            report = equilibria.is_best_response(game, part, cand.team_strategy, cand.adversary_strategy)
    out.write(formats.format_verification(report, game))
    return EXIT_OK if report.holds else EXIT_FAIL


def _as_candidate(doc, part):
    if doc.kind == formats.CORRELATED_TEAM:
        return doc.value
    if doc.kind == formats.PRODUCT:
        team = [doc.value[i] for i in part.team]
        return CoECandidate(product_to_correlated(team), doc.value[part.adversary])
    raise UsageError("this check needs a product or correlated-team strategy file")


def cmd_solve_tmcoe(args, out):
    game, part = _load_game(args.game)
    result = equilibria.solve_tmcoe(game, part, args.grid)
    out.write(formats.format_tmcoe(result, game, part))
    if result is not None and args.output:
        _write(args.output, formats.emit_strategy(game, part, result.candidate), out)
    return EXIT_OK if result is not None else EXIT_FAIL


def cmd_solve_ne(args, out):
    game, _ = _load_game(args.game)
    profiles = find_nash_support_enumeration(game, args.max_support)
    out.write(formats.format_profiles(game, profiles))
    return EXIT_OK


def cmd_induce_coe(args, out):
    game, part = _load_game(args.game)
    doc = _load_strategy(args.ne, game, part, kinds=(formats.PRODUCT,))
    cand = equilibria.ne_to_coe(game, part, doc.value)
    value = expected_utility_correlated(game, part, cand, "team")
    out.write(formats.format_candidate(game, part, cand, value))
    if args.output:
        _write(args.output, formats.emit_strategy(game, part, cand), out)
    return EXIT_OK


def cmd_check_consistency(args, out):
    game, part = _load_game(args.game)
    report = equilibria.check_consistency(game, part)
    out.write(formats.format_consistency(report, game))
    return EXIT_OK if report.consistent else EXIT_FAIL


def cmd_classify(args, out):
    game, part = _load_game(args.game)
    doc = _load_strategy(args.candidate, game, part, kinds=(formats.PRODUCT, formats.CORRELATED_TEAM))
    row = equilibria.classify_profile(game, part, doc.value, args.grid)
    out.write(formats.format_classification(row))
    return EXIT_OK


def cmd_reduce(args, out):
    game, _ = _load_game(args.game)
    reduced, part = generators.reduce_two_player(game)
    _write(args.output, formats.emit_game(reduced, part), out)
    return EXIT_OK


def cmd_sat_game(args, out):
    phi = generators.parse_dimacs(_read(args.cnf))
    game = generators.sat_game(phi)
    # the gadget has no team structure; player 1 is listed as a one-member team
    _write(args.output, formats.emit_game(game, TeamPartition((0,), 1)), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coopetition", description="Equilibria of adversarial team games.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write an example or random game file")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--flavor", choices=FLAVORS, default=generators.GENERAL)
    p.add_argument("--dims", help="actions per player, e.g. 2x3x2 (last player is the adversary)")
    p.add_argument("--k", help="comma-separated consistency constants for consistent_zero_sum")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a strategy against an equilibrium concept")
    p.add_argument("--game", required=True)
    p.add_argument("--candidate", required=True)
    p.add_argument("--concept", required=True, choices=("ne", "ce", "coe", "best-response"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve-tmcoe", help="find a team-maximizing co-opetition equilibrium")
    p.add_argument("--game", required=True)
    p.add_argument("--grid", type=int, default=4, help="adversary grid resolution (default 4)")
    p.add_argument("--output", "-o", help="also write the equilibrium as a strategy file")
    p.set_defaults(func=cmd_solve_tmcoe)

    p = sub.add_parser("solve-ne", help="list Nash equilibria by support enumeration")
    p.add_argument("--game", required=True)
    p.add_argument("--max-support", type=int, default=None)
    p.set_defaults(func=cmd_solve_ne)

    p = sub.add_parser("induce-coe", help="turn a Nash equilibrium into a co-opetition equilibrium")
    p.add_argument("--game", required=True)
    p.add_argument("--ne", required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_induce_coe)

    p = sub.add_parser("check-consistency", help="test whether team utilities are rescalings of the team total")
    p.add_argument("--game", required=True)
    p.set_defaults(func=cmd_check_consistency)

    p = sub.add_parser("classify", help="NE / CoE / TMCoE membership of a profile")
    p.add_argument("--game", required=True)
    p.add_argument("--candidate", required=True)
    p.add_argument("--grid", type=int, default=4)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reduce", help="embed a 2-player game as a zero-sum team game")
    p.add_argument("--game", required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("sat-game", help="build the symmetric game of a CNF formula")
    p.add_argument("--cnf", required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_sat_game)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out)
    except (UsageError, ParseError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ScaleError as exc:
        err.write(f"scale ceiling: {exc}\n")
        return EXIT_PRECONDITION
    except PreconditionError as exc:
        err.write(f"precondition failed: {exc}\n")
        return EXIT_PRECONDITION
    except GameInputError as exc:
        err.write(f"invalid input: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
