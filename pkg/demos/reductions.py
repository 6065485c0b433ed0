"""Two constructions that tie CoEs to harder problems.

First a 2-player game becomes a zero-sum team game by adding a dummy team
member. Then a CNF formula becomes a symmetric game whose literal-only
equilibria are its satisfying assignments.
"""

from coopetition import (
    CnfFormula,
    Game,
    MixedStrategy,
    find_nash_support_enumeration,
    reduce_two_player,
    sat_game,
    verify_coe,
    verify_ne,
)
from coopetition.generators import assignment_profile, lift_profile, satisfying_assignments

# plain chicken between two drivers
table = {(0, 0): (0, 0), (0, 1): (7, 2), (1, 0): (2, 7), (1, 1): (6, 6)}
g2 = Game.from_function([("D", "C"), ("D", "C")], lambda j: table[j], "chicken")
game, part = reduce_two_player(g2)
print("reduced game is zero-sum:", game.is_zero_sum(), "shape:", game.shape)
print("dummy absorbs the rest, (a1,D,C):", [str(v) for v in game.payoff(game.joint_from_labels(("a1", "D", "C")))])
for ne in find_nash_support_enumeration(g2):
    desc = " ".join(",".join(str(p) for p in s.probs) for s in ne)
    print(f"  NE ({desc}) lifts to a CoE:", verify_coe(game, part, lift_profile(ne)).holds)

# (z1 or not z2)
phi = CnfFormula(2, (frozenset({(1, True), (2, False)}),))
sg = sat_game(phi)
print("actions:", " ".join(sg.actions[0]))
for bits in satisfying_assignments(phi):
    profile = assignment_profile(phi, bits)
    print(f"  assignment {bits}: NE {verify_ne(sg, profile).holds}")
bad = assignment_profile(phi, (False, True))
report = verify_ne(sg, bad)
print("falsifying assignment is NE:", report.holds, "- first deviation:", sg.actions[0][report.violations[0].deviation])

# (z1) and (not z1) has no satisfying assignment, so no literal-only equilibrium
unsat = CnfFormula(1, (frozenset({(1, True)}), frozenset({(1, False)})))
ug = sat_game(unsat)
literals = [0, 1]
print("literal-only NE of the unsatisfiable formula:", find_nash_support_enumeration(ug, allowed=[literals, literals]))
ff = [MixedStrategy.from_labels(ug, i, {"f": 1}) for i in range(2)]
print("but (f, f) remains an NE:", verify_ne(ug, ff).holds)
