"""Exact Nash equilibria by support enumeration.

For each support profile the indifference conditions are solved exactly.
When at most two players mix, the conditions are linear and a rational LP
finds a point of the solution set. With three or more mixing players the
conditions are polynomial; those systems go to sympy and only isolated
rational solutions are kept. Every profile returned passes
:func:`~coopetition.equilibria.verify_ne`.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from .equilibria import verify_ne
from .exceptions import GameInputError, ScaleError
from .game import Game, MixedStrategy
from .lp import EQ, GE, LE, Constraint, LinearProgram, solve_lp

MAX_JOINT_ACTIONS = 10_000


def _subsets(actions: Sequence[int], max_size: int):
    for size in range(1, min(max_size, len(actions)) + 1):
        yield from itertools.combinations(actions, size)


def _payoff_over(game: Game, player: int, fixed: dict, free: Sequence[int], action: int):
    """Coefficients of u_player(action, ...) over the joint actions of ``free``.

    ``fixed`` maps the remaining non-``player`` players to pure actions.
    Returns ``{joint of free players: payoff}``.
    """
    joint = [0] * game.num_players
    for j, a in fixed.items():
        joint[j] = a
    joint[player] = action
    out = {}
    for combo in itertools.product(*(range(game.shape[j]) for j in free)):
        for j, a in zip(free, combo):
            joint[j] = a
        out[combo] = game.utility(player, joint)
    return out


def _solve_linear_case(game: Game, supports, mixed: list[int]) -> Optional[list[MixedStrategy]]:
    """At most two players mix: every condition involving them is linear."""
    n = game.num_players
    pure = {i: supports[i][0] for i in range(n) if i not in mixed}
    # variable layout: probabilities of each mixed player over its support, then one value per mixed player
    offset = {}
    k = 0
    for i in mixed:
        offset[i] = k
        k += len(supports[i])
    value_var = {i: k + idx for idx, i in enumerate(mixed)}
    nvars = k + len(mixed)
    zero = Fraction(0)
    constraints = []

    for i in mixed:
        row = [zero] * nvars
        for pos in range(len(supports[i])):
            row[offset[i] + pos] = Fraction(1)
        constraints.append(Constraint(tuple(row), EQ, Fraction(1)))

    for i in mixed:
        others = [j for j in mixed if j != i]
        fixed = {j: a for j, a in pure.items()}
        for b in range(game.shape[i]):
            row = [zero] * nvars
            rhs = zero
            if others:
                (j,) = others
                table = _payoff_over(game, i, fixed, [j], b)
                for pos, c in enumerate(supports[j]):
                    row[offset[j] + pos] = table[(c,)]
            else:
                rhs = -_payoff_over(game, i, fixed, [], b)[()]
            row[value_var[i]] = Fraction(-1)
            constraints.append(Constraint(tuple(row), EQ if b in supports[i] else LE, rhs))

    if len(mixed) == 1:
        # the pure players' best-response conditions are linear in the lone mixer
        (m,) = mixed
        for j, s_j in pure.items():
            fixed = {h: a for h, a in pure.items() if h != j}
            base = _payoff_over(game, j, fixed, [m], s_j)
            for b in range(game.shape[j]):
                if b == s_j:
                    continue
                dev = _payoff_over(game, j, fixed, [m], b)
                row = [zero] * nvars
                for pos, c in enumerate(supports[m]):
                    row[offset[m] + pos] = base[(c,)] - dev[(c,)]
                constraints.append(Constraint(tuple(row), GE, zero))

    lower = [zero] * k + [None] * len(mixed)
    sol = solve_lp(LinearProgram((zero,) * nvars, tuple(constraints), "max", lower=lower))
    if not sol.is_optimal:
        return None
    x = sol.primal
    if any(x[p] <= 0 for p in range(k)):
        return None  # a smaller support profile covers this point
    probs = {i: dict(zip(supports[i], x[offset[i]:offset[i] + len(supports[i])])) for i in mixed}
    return _profile(game, supports, probs)


def _profile(game, supports, probs) -> list[MixedStrategy]:
    out = []
    for i in range(game.num_players):
        vec = [Fraction(0)] * game.shape[i]
        if i in probs:
            for a, p in probs[i].items():
                vec[a] = p
        else:
            vec[supports[i][0]] = Fraction(1)
        out.append(MixedStrategy(i, tuple(vec)))
    return out


def _solve_unique(rows: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    """Unique solution of a square exact linear system, or ``None`` if singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


_T = sympy.Symbol("t")


def _rational_roots_in_unit_interval(expr) -> list[Fraction]:
    poly = sympy.Poly(sympy.expand(expr), _T, domain="QQ")
    if poly.is_zero:
        return []
    roots = []
    for r in poly.ground_roots():
        if 0 < r < 1:
            roots.append(Fraction(int(r.p), int(r.q)))
    return sorted(roots)


def _at(expr, t: Fraction) -> Fraction:
    v = sympy.sympify(expr).subs(_T, sympy.Rational(t.numerator, t.denominator))
    return Fraction(int(v.p), int(v.q))


def _solve_three_mixers(game: Game, supports, mixed: list[int]) -> list[list[MixedStrategy]]:
    """Three players mix and one of them, k, mixes over exactly two actions.

    With x_k = (1 - t, t), the indifference conditions of the other two
    players are linear in each other's strategy for every fixed t. Cramer's
    rule (or a consistency determinant when their supports differ in size by
    one) turns the remaining condition into a polynomial in t whose rational
    roots give the candidate equilibria. When a determinant vanishes
    identically the game is degenerate on these supports and the general
    solver takes over.
    """
    k = next(p for p in reversed(mixed) if len(supports[p]) == 2)
    i, j = [p for p in mixed if p != k]
    S_i, S_j = supports[i], supports[j]
    c0, c1 = supports[k]
    base = [0] * game.num_players
    for p in range(game.num_players):
        if p not in mixed:
            base[p] = supports[p][0]

    def u(p, a, b, c):
        joint = list(base)
        joint[i], joint[j], joint[k] = a, b, c
        return game.utility(p, joint)

    def rat(v: Fraction):
        return sympy.Rational(v.numerator, v.denominator)

    # P_i(t) x_j = e: i's indifference rows then the probability row
    P_i = [
        [rat(u(i, r, b, c0) - u(i, S_i[0], b, c0)) * (1 - _T) + rat(u(i, r, b, c1) - u(i, S_i[0], b, c1)) * _T
         for b in S_j]
        for r in S_i[1:]
    ] + [[sympy.Integer(1)] * len(S_j)]
    P_j = [
        [rat(u(j, a, r, c0) - u(j, a, S_j[0], c0)) * (1 - _T) + rat(u(j, a, r, c1) - u(j, a, S_j[0], c1)) * _T
         for a in S_i]
        for r in S_j[1:]
    ] + [[sympy.Integer(1)] * len(S_i)]
    W = [[u(k, a, b, c1) - u(k, a, b, c0) for b in S_j] for a in S_i]

    def numeric(matrix, t):
        return [[_at(v, t) for v in row] for row in matrix]

    def solve_other(P_big, t, x_known, known_is_j):
        """Solve for the larger player's strategy once t and the other side are known."""
        rows = numeric(P_big, t)
        rhs = [Fraction(0)] * (len(rows) - 1) + [Fraction(1)]
        if known_is_j:
            k_row = [sum((W[a][b] * x_known[b] for b in range(len(S_j))), Fraction(0)) for a in range(len(S_i))]
        else:
            k_row = [sum((W[a][b] * x_known[a] for a in range(len(S_i))), Fraction(0)) for b in range(len(S_j))]
        return _solve_unique(rows + [k_row], rhs + [Fraction(0)])

    found = []
    candidates = []
    if len(S_i) == len(S_j):
        M_i, M_j = sympy.Matrix(P_i), sympy.Matrix(P_j)
        det_i, det_j = M_i.det(method="berkowitz"), M_j.det(method="berkowitz")
        if sympy.expand(det_i) == 0 or sympy.expand(det_j) == 0:
            return _solve_polynomial_case(game, supports, mixed)
        n_i = M_i.adjugate(method="berkowitz")[:, -1]
        n_j = M_j.adjugate(method="berkowitz")[:, -1]
        poly = sum(
            n_j[a] * rat(W[a][b]) * n_i[b] for a in range(len(S_i)) for b in range(len(S_j)) if W[a][b]
        )
        if sympy.expand(poly) == 0:
            return _solve_polynomial_case(game, supports, mixed)
        for t in _rational_roots_in_unit_interval(poly):
            d_i, d_j = _at(det_i, t), _at(det_j, t)
            if not d_i or not d_j:
                continue
            x_j = [_at(v, t) / d_i for v in n_i]
            x_i = [_at(v, t) / d_j for v in n_j]
            candidates.append((t, x_i, x_j))
    elif abs(len(S_i) - len(S_j)) == 1:
        i_bigger = len(S_i) > len(S_j)
        P_over = P_i if i_bigger else P_j  # more rows than unknowns
        P_under = P_j if i_bigger else P_i
        aug = sympy.Matrix([row + [sympy.Integer(int(r == len(P_over) - 1))] for r, row in enumerate(P_over)])
        consistency = sympy.expand(aug.det(method="berkowitz"))
        if consistency == 0:
            return _solve_polynomial_case(game, supports, mixed)
        for t in _rational_roots_in_unit_interval(consistency):
            rows = numeric(P_over, t)
            # one indifference row is redundant at a root; keep the probability row
            small = None
            for skip in range(len(rows) - 1):
                keep = [r for idx, r in enumerate(rows) if idx != skip]
                rhs = [Fraction(0)] * (len(keep) - 1) + [Fraction(1)]
                sol = _solve_unique(keep, rhs)
                if sol is not None:
                    small = sol
                    break
            if small is None:
                continue
            big = solve_other(P_under, t, small, known_is_j=i_bigger)
            if big is None:
                continue
            candidates.append((t, big, small) if i_bigger else (t, small, big))
    else:
        return []

    for t, x_i, x_j in candidates:
        if any(v <= 0 for v in x_i) or any(v <= 0 for v in x_j):
            continue
        probs = {
            i: dict(zip(S_i, x_i)),
            j: dict(zip(S_j, x_j)),
            k: {c0: 1 - t, c1: t},
        }
        found.append(_profile(game, supports, probs))
    return found


def _solve_polynomial_case(game: Game, supports, mixed: list[int]) -> list[list[MixedStrategy]]:
    """General sympy solve for supports the specialised solvers do not cover."""
    pure = {i: supports[i][0] for i in range(game.num_players) if i not in mixed}
    symbols = {}
    unknowns = []
    for i in mixed:
        free = [sympy.Symbol(f"x{i}_{a}") for a in supports[i][1:]]
        unknowns.extend(free)
        first = 1 - sum(free)
        symbols[i] = dict(zip(supports[i], [first] + free))

    equations = []
    for i in mixed:
        others = [j for j in mixed if j != i]
        base = None
        for a in supports[i]:
            table = _payoff_over(game, i, pure, others, a)
            expr = sympy.Integer(0)
            for combo in itertools.product(*(supports[j] for j in others)):
                weight = sympy.Integer(1)
                for j, c in zip(others, combo):
                    weight *= symbols[j][c]
                u = table[combo]
                expr += sympy.Rational(u.numerator, u.denominator) * weight
            if base is None:
                base = expr
            else:
                equations.append(sympy.expand(expr - base))
    equations = [e for e in equations if e != 0]
    if len(equations) < len(unknowns):
        return []  # solution set is not isolated
    try:
        solutions = sympy.solve(equations, unknowns, dict=True)
    except NotImplementedError:
        return []
    found = []
    for sol in solutions:
        if len(sol) != len(unknowns):
            continue
        values = {}
        ok = True
        for i in mixed:
            probs = {}
            for a, expr in symbols[i].items():
                v = sympy.simplify(sympy.sympify(expr).subs(sol))
                if not v.is_Rational or v <= 0:
                    ok = False
                    break
                probs[a] = Fraction(int(v.p), int(v.q))
            if not ok:
                break
            values[i] = probs
        if ok:
            found.append(_profile(game, supports, values))
    return found


def find_nash_support_enumeration(
    game: Game,
    max_support: Optional[int] = None,
    allowed: Optional[Sequence[Optional[Sequence[int]]]] = None,
) -> list[list[MixedStrategy]]:
    """All Nash equilibria whose supports have at most ``max_support`` actions.

    ``allowed[i]``, when given and not ``None``, restricts the actions player
    ``i`` may put in its support (deviations to any action are still
    checked). Results are deduplicated and returned in support-profile order.

    Degenerate games can have continua of equilibria; for such support
    profiles one point is reported when at most two players mix and none
    when three or more do. Equilibria with irrational probabilities are not
    representable and are skipped.
    """
    size = math.prod(game.shape)
    if size > MAX_JOINT_ACTIONS:
        raise ScaleError(f"{size} joint actions exceeds the {MAX_JOINT_ACTIONS} ceiling for support enumeration")
    if max_support is None:
        max_support = max(game.shape)
    if max_support < 1:
        raise GameInputError("max_support must be at least 1")
    pools = []
    for i in range(game.num_players):
        acts = list(range(game.shape[i]))
        if allowed is not None and allowed[i] is not None:
            acts = sorted(set(allowed[i]))
            if not acts or any(not 0 <= a < game.shape[i] for a in acts):
                raise GameInputError(f"invalid allowed actions for player {i}")
        pools.append(list(_subsets(acts, max_support)))

    results = []
    seen = set()
    for supports in itertools.product(*pools):
        mixed = [i for i, s in enumerate(supports) if len(s) > 1]
        if not mixed:
            candidates = [_profile(game, supports, {})]
        elif len(mixed) <= 2:
            found = _solve_linear_case(game, supports, mixed)
            candidates = [found] if found else []
        elif len(mixed) == 3 and any(len(supports[i]) == 2 for i in mixed):
            candidates = _solve_three_mixers(game, supports, mixed)
        else:
            candidates = _solve_polynomial_case(game, supports, mixed)
        for profile in candidates:
            key = tuple(s.probs for s in profile)
            if key in seen:
                continue
            if verify_ne(game, profile).holds:
                seen.add(key)
                results.append(profile)
    return results


__all__ = ["find_nash_support_enumeration", "MAX_JOINT_ACTIONS"]
