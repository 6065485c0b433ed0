"""Zero-sum team games whose members' payoffs are shares of the team total.

Here the team can be solved as one player with a single LP. The second
half builds a small game with two optimal CoEs that do not exchange,
because one of them leaves a gain the whole team could take together.
"""

from fractions import Fraction

from coopetition import (
    CoECandidate,
    CorrelatedTeamStrategy,
    Game,
    MixedStrategy,
    TeamPartition,
    check_consistency,
    check_exchangeable,
    exchangeability_counterexample,
    random_game,
    solve_tmcoe_consistent_lp,
    solve_tmcoe_fixed_adversary,
    solve_tmcoe_grid,
    team_deviation_gain,
    verify_coe,
)

# player 1 gets a third of the team total and player 2 two thirds
game, part = random_game(3, [2, 3, 2], 5, "consistent_zero_sum", k_list=(3, "3/2"))
report = check_consistency(game, part)
print("consistent:", report.consistent, "shares:", {i + 1: str(s) for i, s in report.shares.items()})

res = solve_tmcoe_consistent_lp(game, part)
print("exact TMCoE value:", res.team_value, "is a CoE:", verify_coe(game, part, res.candidate).holds)
fixed = solve_tmcoe_fixed_adversary(game, part, res.candidate.adversary_strategy)
print("fixed-adversary LP agrees:", fixed.team_value == res.team_value)
for r in (1, 2, 4, 8):
    grid = solve_tmcoe_grid(game, part, r)
    print(f"  grid resolution {r}:", None if grid is None else grid.team_value)

# without consistency CoEs can fail to exchange
g4, p4 = exchangeability_counterexample()
e1 = CoECandidate(CorrelatedTeamStrategy.from_labels(g4, (0, 1), {("a2", "b1"): 1}), MixedStrategy.from_labels(g4, 2, {"c1": 1}))
e2 = CoECandidate(CorrelatedTeamStrategy.from_labels(g4, (0, 1), {("a1", "b2"): 1}), MixedStrategy.from_labels(g4, 2, {"c2": 1}))
print("inconsistent game, CoEs exchange:", check_exchangeable(g4, p4, e1, e2).exchangeable)
w = check_consistency(g4, p4).witnesses
print("consistency witness:", [(x.player + 1, g4.labels(x.joint), g4.labels(x.deviation_joint)) for x in w])

# consistency alone is not enough either: team totals, columns c1 and c2
u_T = {(0, 0): (2, -2), (0, 1): (2, -2), (1, 0): (0, 1), (1, 1): (1, -3)}
trap = Game.from_function(
    [("a1", "a2"), ("b1", "b2"), ("c1", "c2")],
    lambda j: (Fraction(u_T[j[:2]][j[2]], 2),) * 2 + (-u_T[j[:2]][j[2]],),
)
tpart = TeamPartition((0, 1), 2)
saddle = solve_tmcoe_consistent_lp(trap, tpart).candidate
other = CoECandidate(
    CorrelatedTeamStrategy.from_labels(trap, (0, 1), {("a1", "b1"): "1/20", ("a1", "b2"): "3/20", ("a2", "b1"): "4/5"}),
    MixedStrategy.from_labels(trap, 2, {"c2": 1}),
)
print("both optimal CoEs:", verify_coe(trap, tpart, saddle).holds, verify_coe(trap, tpart, other).holds)
print("team-as-one-player gains:", team_deviation_gain(trap, tpart, saddle), team_deviation_gain(trap, tpart, other))
swap = check_exchangeable(trap, tpart, saddle, other)
print("they exchange:", swap.exchangeable)
for v in swap.swapped[0].violations:
    print(f"  player {v.player + 1}: {trap.actions[v.player][v.action]} -> {trap.actions[v.player][v.deviation]} gains {v.amount}")
