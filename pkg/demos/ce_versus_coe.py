"""Why a correlated equilibrium is not enough against an adversary.

In the modified chicken game the adversary is a third player. A CE of the
whole game recommends actions to the adversary too, but an adversary that
only observes the team's mix will best-respond instead.
"""

from fractions import Fraction

from coopetition import (
    CoECandidate,
    CorrelatedTeamStrategy,
    MixedStrategy,
    expected_utility_correlated,
    modified_chicken_game,
    solve_tmcoe_grid,
    verify_ce,
    verify_coe,
)

game, part = modified_chicken_game()

# a CE of the three-player game
ce = {("a1", "b2", "c2"): Fraction(1, 2), ("a1", "b1", "c2"): Fraction(1, 4), ("a1", "b2", "c1"): Fraction(1, 4)}
x = [Fraction(0)] * game.num_joint_actions
for labels, p in ce.items():
    x[game.flat_index(game.joint_from_labels(labels))] = p
print("joint distribution is a CE:", verify_ce(game, x).holds)

# what the adversary sees is the team's marginal
team = {}
for labels, p in ce.items():
    team[labels[:2]] = team.get(labels[:2], 0) + p
x_T = CorrelatedTeamStrategy.from_labels(game, (0, 1), team)
print("team marginal:", {" ".join(k): str(v) for k, v in team.items()})

for c in ("c1", "c2"):
    cand = CoECandidate(x_T, MixedStrategy.from_labels(game, 2, {c: 1}))
    print(f"adversary payoff with {c}:", expected_utility_correlated(game, part, cand, 2))

reacted = CoECandidate(x_T, MixedStrategy.from_labels(game, 2, {"c1": 1}))
print("team value once the adversary reacts:", expected_utility_correlated(game, part, reacted, "team"))

# CoEs build the adversary's best response into the definition
mixed = CoECandidate(
    CorrelatedTeamStrategy.from_labels(game, (0, 1), {("a1", "b1"): "1/3", ("a1", "b2"): "2/3"}),
    MixedStrategy.from_labels(game, 2, {"c1": "1/3", "c2": "2/3"}),
)
print("mixed profile is a CoE:", verify_coe(game, part, mixed).holds,
      "with team value", expected_utility_correlated(game, part, mixed, "team"))

best = solve_tmcoe_grid(game, part, 1)
print("team-maximizing CoE:", best.team_value, "at ((a1,b1), c2):",
      best.candidate.team_strategy.probs[0] == 1 and best.candidate.adversary_strategy.probs[1] == 1)
