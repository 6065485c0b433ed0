"""Chicken as a two-member team facing an adversary.

Classifies the ten comparison profiles in the team game where each member
keeps its own payoff, then shows why (C, C) only survives once the team
shares its total.
"""

from fractions import Fraction

from coopetition import (
    CoECandidate,
    CorrelatedTeamStrategy,
    MixedStrategy,
    chicken_games,
    classify_profile,
    solve_maxmin,
    solve_tmcoe_grid,
    team_matrix,
    verify_coe,
    verify_ne,
)

ga, gb = chicken_games()
game, part = ga
B = MixedStrategy.from_labels(game, 2, {"B": 1})  # B strictly dominates A for the adversary


def product(p1, p2):
    return [MixedStrategy.from_labels(game, 0, p1), MixedStrategy.from_labels(game, 1, p2), B]


def corr(masses):
    return CoECandidate(CorrelatedTeamStrategy.from_labels(game, (0, 1), masses), B)


third = {"D": Fraction(1, 3), "C": Fraction(2, 3)}
profiles = {
    1: ("(C,C,B)", product({"C": 1}, {"C": 1})),
    2: ("((C,C),B)", corr({("C", "C"): 1})),
    3: ("(D,C,B)", product({"D": 1}, {"C": 1})),
    4: ("((D,C),B)", corr({("D", "C"): 1})),
    5: ("(C,D,B)", product({"C": 1}, {"D": 1})),
    6: ("((C,D),B)", corr({("C", "D"): 1})),
    7: ("thirds, product", product(third, third)),
    8: ("thirds, correlated", corr({("C", "C"): "4/9", ("D", "C"): "2/9", ("C", "D"): "2/9", ("D", "D"): "1/9"})),
    9: ("1/3 each off (D,D)", corr({("C", "C"): "1/3", ("D", "C"): "1/3", ("C", "D"): "1/3"})),
    10: ("1/2 (C,C), 1/4 rest", corr({("C", "C"): "1/2", ("D", "C"): "1/4", ("C", "D"): "1/4"})),
}

print("row  profile                 u_T    stable  NE     CoE    TMCoE")
for row, (name, profile) in profiles.items():
    c = classify_profile(game, part, profile, resolution=1)
    cols = ["-" if v is None else ("yes" if v else "no") for v in (c.stable, c.ne, c.coe, c.tmcoe)]
    print(f"{row:>3}  {name:<22} {str(c.team_value):>6}  {cols[0]:<6}  {cols[1]:<5}  {cols[2]:<5}  {cols[3]}")

# the grid search over adversary strategies recovers row 10 as the best CoE
best = solve_tmcoe_grid(game, part, 1)
print("best CoE value:", best.team_value, "matches row 10:", best.candidate == profiles[10][1])

# (C,C) maximizes the team total, but each member would rather swerve to D
report = verify_coe(game, part, profiles[2][1])
for v in report.violations:
    print(f"player {v.player + 1}: C -> {game.actions[v.player][v.deviation]} gains {v.amount}")

# once the members split the total evenly, (C,C,B) is a Nash equilibrium
# and the team-as-one-player maxmin picks it
game_b, part_b = gb
print("shared utility, (C,C,B) is NE:", verify_ne(game_b, product({"C": 1}, {"C": 1})).holds)
value, team_play, _ = solve_maxmin(team_matrix(game_b, part_b))
print("team maxmin value:", value, "at", dict(zip(["DD", "DC", "CD", "CC"], map(str, team_play))))
