import random
from fractions import Fraction
from math import lcm

import pytest

from conftest import chicken_profiles
from coopetition import (
    CoECandidate,
    CorrelatedTeamStrategy,
    Game,
    GameInputError,
    MixedStrategy,
    NotEquilibriumError,
    PreconditionError,
    ScaleError,
    TeamPartition,
    TmcoeMethod,
    check_consistency,
    check_exchangeable,
    classify_profile,
    expected_utility_correlated,
    find_nash_support_enumeration,
    is_best_response,
    joint_distribution,
    ne_to_coe,
    random_game,
    solve_maxmin,
    solve_tmcoe,
    solve_tmcoe_consistent_lp,
    solve_tmcoe_fixed_adversary,
    solve_tmcoe_grid,
    team_deviation_gain,
    team_matrix,
    verify_ce,
    verify_coe,
    verify_ne,
)
from coopetition.equilibria import Violation, VerificationReport, Concept, grid_size, simplex_grid
from coopetition.game import team_joint_actions
from oracles import pure_coe_profiles, team_value_of


def cand(game, team_masses, adv_masses, team=(0, 1), adversary=2):
    return CoECandidate(
        CorrelatedTeamStrategy.from_labels(game, team, team_masses),
        MixedStrategy.from_labels(game, adversary, adv_masses),
    )


def test_report_invariants():
    assert VerificationReport(Concept.NE).holds
    assert not VerificationReport(Concept.NE, (Violation(0, None, 1, Fraction(1)),))
    with pytest.raises(ValueError):
        VerificationReport(Concept.NE, (Violation(0, None, 1, Fraction(0)),))


# -- best response ---------------------------------------------------------------


def test_b_is_a_best_response_to_anything_in_ga(ga):
    game, part = ga
    B = MixedStrategy.from_labels(game, 2, {"B": 1})
    rng = random.Random(1)
    for _ in range(20):
        w = [rng.randint(0, 5) for _ in range(4)]
        if not sum(w):
            continue
        x_T = CorrelatedTeamStrategy((0, 1), [Fraction(v, sum(w)) for v in w])
        assert is_best_response(game, part, x_T, B).holds
        # and A never is: B gains exactly 20 + u_T under every team action
        report = is_best_response(game, part, x_T, MixedStrategy.from_labels(game, 2, {"A": 1}))
        assert [v.deviation for v in report.violations] == [1]


def test_table5_adversary_prefers_c1(table5):
    game, part = table5
    x_T = CorrelatedTeamStrategy.from_labels(game, (0, 1), {("a1", "b2"): "3/4", ("a1", "b1"): "1/4"})
    report = is_best_response(game, part, x_T, MixedStrategy.from_labels(game, 2, {"c2": 1}))
    assert not report.holds
    assert report.violations == (Violation(2, None, 0, Fraction(21, 4) - Fraction(20, 4)),)
    assert is_best_response(game, part, x_T, MixedStrategy.from_labels(game, 2, {"c1": 1})).holds
    team_value = expected_utility_correlated(game, part, CoECandidate(x_T, MixedStrategy.pure(2, 0, 2)), "team")
    assert team_value == Fraction(3, 2)


def test_single_action_adversary_always_best_responds():
    g = Game.from_function([("x", "y"), ("p", "q"), ("only",)], lambda j: (j[0], j[1], 5 * j[0] - j[1]))
    part = TeamPartition((0, 1), 2)
    for t in team_joint_actions(g, (0, 1)):
        assert is_best_response(g, part, CorrelatedTeamStrategy.pure(g, (0, 1), t), MixedStrategy.pure(2, 0, 1))


# -- CE ------------------------------------------------------------------------------


def test_chicken_ce_holds(ga):
    game, _ = ga
    cc = game.flat_index((1, 1, 1))
    dc = game.flat_index((0, 1, 1))
    cd = game.flat_index((1, 0, 1))
    x = [Fraction(0)] * 8
    x[cc], x[dc], x[cd] = Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)
    assert verify_ce(game, x).holds


def test_table5_full_joint_ce_holds(table5):
    game, _ = table5
    x = [Fraction(0)] * 8
    x[game.flat_index(game.joint_from_labels(("a1", "b2", "c2")))] = Fraction(1, 2)
    x[game.flat_index(game.joint_from_labels(("a1", "b1", "c2")))] = Fraction(1, 4)
    x[game.flat_index(game.joint_from_labels(("a1", "b2", "c1")))] = Fraction(1, 4)
    assert verify_ce(game, x).holds


def test_ce_fails_on_dominated_profile(gb):
    game, _ = gb
    x = [Fraction(0)] * 8
    x[game.flat_index((0, 0, 1))] = Fraction(1)  # (D, D, B) where C strictly dominates D
    report = verify_ce(game, x)
    assert {(v.player, v.action, v.deviation, v.amount) for v in report.violations} == {
        (0, 0, 1, Fraction(9, 2)),
        (1, 0, 1, Fraction(9, 2)),
    }


def test_ce_rejects_wrong_dimension(ga):
    game, _ = ga
    with pytest.raises(GameInputError):
        verify_ce(game, [Fraction(1)])
    with pytest.raises(GameInputError):
        verify_ce(game, [Fraction(1, 2)] * 8)


def test_nash_product_distributions_are_ce():
    for seed in range(30):
        game, _ = random_game(2, 2, seed)
        for ne in find_nash_support_enumeration(game):
            assert verify_ce(game, joint_distribution(game, ne)).holds


# -- CoE ----------------------------------------------------------------------------


def test_profile_10_is_a_coe(ga):
    game, part = ga
    assert verify_coe(game, part, chicken_profiles(game)[10]).holds


def test_cc_b_is_not_a_coe(ga):
    game, part = ga
    report = verify_coe(game, part, chicken_profiles(game)[2])
    assert report.violations == (Violation(0, 1, 0, Fraction(1)), Violation(1, 1, 0, Fraction(1)))


def test_table4_exchanged_profile_fails(table4):
    game, part = table4
    report = verify_coe(game, part, cand(game, {("a2", "b1"): 1}, {"c2": 1}))
    assert report.violations == (Violation(1, 0, 1, Fraction(1)),)


def test_verify_coe_rejects_partition_mismatch(ga):
    game, part = ga
    with pytest.raises(GameInputError):
        verify_coe(game, TeamPartition((0, 2), 1), chicken_profiles(game)[10])


def test_verify_ne_on_chicken(ga):
    game, _ = ga
    rows = chicken_profiles(game)
    for k in (3, 5, 7):
        assert verify_ne(game, rows[k]).holds
    report = verify_ne(game, rows[1])
    assert [(v.player, v.deviation, v.amount) for v in report.violations] == [(0, 0, 1), (1, 0, 1)]


# -- NE to CoE --------------------------------------------------------------------


def test_ne_3_induces_coe_4(ga):
    game, part = ga
    rows = chicken_profiles(game)
    assert ne_to_coe(game, part, rows[3]) == rows[4]
    assert ne_to_coe(game, part, rows[5]) == rows[6]


def test_ne_7_induces_profile_8(ga):
    game, part = ga
    rows = chicken_profiles(game)
    assert ne_to_coe(game, part, rows[7]) == rows[8]


def test_trivial_game_ne_to_coe():
    g = Game(((("a",)), ("b",), ("c",)), ((1, 2, 3),))
    part = TeamPartition((0, 1), 2)
    ne = [MixedStrategy.pure(i, 0, 1) for i in range(3)]
    result = ne_to_coe(g, part, ne)
    assert result.team_strategy.probs == (1,)
    assert result.adversary_strategy.probs == (1,)


def test_ne_to_coe_rejects_non_equilibrium(ga):
    game, part = ga
    with pytest.raises(NotEquilibriumError) as info:
        ne_to_coe(game, part, chicken_profiles(game)[1])
    assert info.value.report.violations[0].amount == 1


# -- fixed adversary and grid ---------------------------------------------------------


def test_fixed_adversary_b_gives_21_over_2(ga):
    game, part = ga
    res = solve_tmcoe_fixed_adversary(game, part, MixedStrategy.from_labels(game, 2, {"B": 1}))
    assert res.team_value == Fraction(21, 2)
    assert res.candidate == chicken_profiles(game)[10]
    assert res.method is TmcoeMethod.FIXED_ADVERSARY_LP
    assert res.certified_exact


def test_fixed_adversary_table5_c2(table5):
    game, part = table5
    res = solve_tmcoe_fixed_adversary(game, part, MixedStrategy.from_labels(game, 2, {"c2": 1}))
    assert res.team_value == 7
    assert res.candidate == cand(game, {("a1", "b1"): 1}, {"c2": 1})
    assert not res.certified_exact


def test_fixed_adversary_dominated_action_is_infeasible(ga):
    game, part = ga
    assert solve_tmcoe_fixed_adversary(game, part, MixedStrategy.from_labels(game, 2, {"A": 1})) is None


def test_fixed_adversary_rejects_wrong_player(ga):
    game, part = ga
    with pytest.raises(GameInputError):
        solve_tmcoe_fixed_adversary(game, part, MixedStrategy.uniform(1, 2))


def test_grid_on_ga(ga):
    game, part = ga
    res = solve_tmcoe_grid(game, part, 1)
    assert res.team_value == Fraction(21, 2)
    assert res.certified_exact
    assert res.method is TmcoeMethod.GRID_SEARCH
    assert res.grid_resolution == 1


def test_grid_on_table5(table5):
    game, part = table5
    res = solve_tmcoe_grid(game, part, 1)
    assert res.team_value == 7
    assert res.candidate == cand(game, {("a1", "b1"): 1}, {"c2": 1})


def test_grid_on_table4_matches_pure_coe_enumeration(table4):
    game, part = table4
    res = solve_tmcoe_grid(game, part, 1)
    pure = pure_coe_profiles(game.payoff, game.shape, part.team, part.adversary)
    assert max(team_value_of(game.payoff, part.team, j) for j in pure) == 1
    assert res.team_value == 1


def test_table5_mixed_coe_value(table5):
    game, part = table5
    mixed = cand(game, {("a1", "b1"): "1/3", ("a1", "b2"): "2/3"}, {"c1": "1/3", "c2": "2/3"})
    assert verify_coe(game, part, mixed).holds
    assert expected_utility_correlated(game, part, mixed, "team") == Fraction(42, 9)


def test_simplex_grid_order_and_size():
    pts = list(simplex_grid(3, 2))
    assert len(pts) == grid_size(3, 2) == 6
    assert pts == sorted(pts)
    assert all(sum(p) == 1 for p in pts)


def test_grid_is_monotone_under_refinement():
    for seed in range(6):
        game, part = random_game(3, [2, 2, 3], seed)
        values = {}
        for r in (1, 2, 4):
            res = solve_tmcoe_grid(game, part, r)
            values[r] = None if res is None else res.team_value
        for lo, hi in ((1, 2), (2, 4)):
            if values[lo] is not None:
                assert values[hi] is not None and values[hi] >= values[lo]


def test_grid_errors(ga):
    game, part = ga
    with pytest.raises(GameInputError):
        solve_tmcoe_grid(game, part, 0)
    big, bpart = random_game(2, [1, 8], 0)
    with pytest.raises(ScaleError):
        solve_tmcoe_grid(big, bpart, 60)


def test_grid_returns_none_without_pure_coe():
    # matching pennies with a silent partner: no pure adversary action supports a CoE
    g = Game.from_function(
        [("H", "T"), ("x",), ("H", "T")],
        lambda j: (1 if j[0] == j[2] else -1, 1 if j[0] == j[2] else -1, -2 if j[0] == j[2] else 2),
    )
    part = TeamPartition((0, 1), 2)
    assert solve_tmcoe_grid(g, part, 1) is None
    assert solve_tmcoe_grid(g, part, 2).team_value == 0


# -- consistency ----------------------------------------------------------------------


def test_identical_team_utilities_have_k_2():
    game, part = random_game(3, 2, 11, "consistent_zero_sum", k_list=(2, 2))
    report = check_consistency(game, part)
    assert report.consistent
    assert report.constants == {0: 2, 1: 2}
    assert report.witness is None


def test_table4_is_inconsistent_with_caption_witness(table4):
    game, part = table4
    report = check_consistency(game, part)
    assert not report.consistent
    by_player = {w.player: w for w in report.witnesses}
    w = by_player[1]
    assert game.labels(w.joint) == ("a2", "b1", "c1")
    assert game.labels(w.deviation_joint) == ("a2", "b2", "c1")


def test_shares_one_third_two_thirds_are_recovered():
    rng = random.Random(4)
    shares = (Fraction(1, 3), Fraction(2, 3))

    def payoff(_j):
        u_T = Fraction(rng.randint(-9, 9))
        return (shares[0] * u_T, shares[1] * u_T, -u_T)

    g = Game.from_function([("a1", "a2"), ("b1", "b2"), ("c1", "c2")], payoff)
    report = check_consistency(g, TeamPartition((0, 1), 2))
    assert report.consistent
    assert report.shares == {0: shares[0], 1: shares[1]}
    assert report.constants == {0: 3, 1: Fraction(3, 2)}


def test_zero_utility_player_is_inconsistent_unless_total_is_zero():
    g = Game.from_function([("a", "b"), ("c", "d"), ("e",)], lambda j: (j[0] + j[1], 0, -(j[0] + j[1])))
    report = check_consistency(g, TeamPartition((0, 1), 2))
    assert not report.consistent
    assert [w.player for w in report.witnesses] == [1]
    assert report.constants == {0: 1}
    zero = Game.from_function([("a", "b"), ("c",), ("e",)], lambda j: (0, 0, 0))
    assert check_consistency(zero, TeamPartition((0, 1), 2)).consistent


def test_negative_ratio_is_inconsistent():
    g = Game.from_function([("a", "b"), ("c",), ("e",)], lambda j: (2 * j[0] - 1, 2 - 4 * j[0], 0))
    report = check_consistency(g, TeamPartition((0, 1), 2))
    assert not report.consistent


# -- consistent zero-sum LP -------------------------------------------------------------


def test_matching_pennies_embedding_value_zero():
    g = Game.from_function(
        [("H", "T"), ("x",), ("H", "T")],
        lambda j: (1 if j[0] == j[2] else -1, 1 if j[0] == j[2] else -1, -2 if j[0] == j[2] else 2),
    )
    res = solve_tmcoe_consistent_lp(g, TeamPartition((0, 1), 2))
    assert res.team_value == 0
    assert res.candidate.team_strategy.probs == (Fraction(1, 2), Fraction(1, 2))
    assert res.candidate.adversary_strategy.probs == (Fraction(1, 2), Fraction(1, 2))
    assert res.method is TmcoeMethod.EXACT_CONSISTENT_LP and res.certified_exact


def test_trivial_consistent_game():
    g = Game(((("a",)), ("b",), ("c",)), ((3, 3, -6),))
    res = solve_tmcoe_consistent_lp(g, TeamPartition((0, 1), 2))
    assert res.team_value == 6
    assert res.candidate.team_strategy.probs == (1,)


def test_consistent_lp_preconditions(table4):
    positive_sum = Game.from_function([("a", "b"), ("c",), ("e",)], lambda j: (1, 1, 0))
    with pytest.raises(PreconditionError, match="zero-sum"):
        solve_tmcoe_consistent_lp(positive_sum, TeamPartition((0, 1), 2))
    with pytest.raises(PreconditionError, match="consistent"):
        solve_tmcoe_consistent_lp(*table4)


def test_consistent_lp_agrees_with_other_solvers():
    for seed in range(12):
        game, part = random_game(3, [2, 2, 2], seed, "consistent_zero_sum", k_list=("3/2", 3))
        res = solve_tmcoe_consistent_lp(game, part)
        assert verify_coe(game, part, res.candidate).holds
        value, _, _ = solve_maxmin(team_matrix(game, part))
        assert res.team_value == value
        fixed = solve_tmcoe_fixed_adversary(game, part, res.candidate.adversary_strategy)
        assert fixed.team_value == res.team_value
        for r in range(1, 9):
            grid = solve_tmcoe_grid(game, part, r)
            assert grid is None or grid.team_value <= res.team_value
        denom = lcm(*(p.denominator for p in res.candidate.adversary_strategy.probs))
        if denom <= 40:
            assert solve_tmcoe_grid(game, part, denom).team_value == res.team_value


def test_solve_tmcoe_picks_method(ga):
    game, part = ga
    assert solve_tmcoe(game, part).method is TmcoeMethod.GRID_SEARCH
    zs, zpart = random_game(3, 2, 1, "consistent_zero_sum", k_list=(2, 2))
    assert solve_tmcoe(zs, zpart).method is TmcoeMethod.EXACT_CONSISTENT_LP


# -- exchangeability -------------------------------------------------------------------


def test_table4_coes_do_not_exchange(table4):
    game, part = table4
    e1 = cand(game, {("a2", "b1"): 1}, {"c1": 1})
    e2 = cand(game, {("a1", "b2"): 1}, {"c2": 1})
    report = check_exchangeable(game, part, e1, e2)
    assert not report.exchangeable
    assert report.swapped[0].violations == (Violation(1, 0, 1, Fraction(1)),)


def test_candidate_exchanges_with_itself(ga):
    game, part = ga
    e = chicken_profiles(game)[10]
    assert check_exchangeable(game, part, e, e)


def test_two_tmcoes_of_consistent_game_exchange():
    # duplicated adversary column: both columns are optimal against the team's maxmin play
    base = [[3, -1], [-2, 4]]

    def payoff(j):
        u_T = base[j[0]][min(j[2], 1)]
        return (Fraction(u_T, 2), Fraction(u_T, 2), -u_T)

    g = Game.from_function([("a1", "a2"), ("b1",), ("c1", "c2", "c3")], payoff)
    part = TeamPartition((0, 1), 2)
    res = solve_tmcoe_consistent_lp(g, part)
    probs = res.candidate.adversary_strategy.probs
    # move the mass of column 2 onto its duplicate column 3
    other = MixedStrategy(2, (probs[0], probs[2], probs[1]))
    e2 = CoECandidate(res.candidate.team_strategy, other)
    assert e2 != res.candidate
    assert verify_coe(g, part, e2).holds
    assert expected_utility_correlated(g, part, e2, "team") == res.team_value
    assert check_exchangeable(g, part, res.candidate, e2)


def trap_game():
    """Consistent zero-sum game whose optimal CoEs include a non-saddle one.

    Rows are team joint actions, columns the adversary's c1 and c2.
    """
    u_T = {(0, 0): (2, -2), (0, 1): (2, -2), (1, 0): (0, 1), (1, 1): (1, -3)}

    def payoff(j):
        v = Fraction(u_T[j[:2]][j[2]])
        return (v / 2, v / 2, -v)

    return Game.from_function([("a1", "a2"), ("b1", "b2"), ("c1", "c2")], payoff), TeamPartition((0, 1), 2)


def test_optimal_coes_need_not_exchange_in_consistent_games():
    game, part = trap_game()
    saddle = solve_tmcoe_consistent_lp(game, part)
    assert saddle.team_value == Fraction(2, 5)
    assert saddle.candidate == cand(game, {("a1", "b1"): "1/5", ("a2", "b1"): "4/5"}, {"c1": "3/5", "c2": "2/5"})
    assert team_deviation_gain(game, part, saddle.candidate) == 0

    # same value, but the whole team could gain 3/5 by moving all mass to (a2, b1)
    other = cand(game, {("a1", "b1"): "1/20", ("a1", "b2"): "3/20", ("a2", "b1"): "4/5"}, {"c2": 1})
    assert verify_coe(game, part, other).holds
    assert expected_utility_correlated(game, part, other, "team") == Fraction(2, 5)
    assert team_deviation_gain(game, part, other) == Fraction(3, 5)
    # no CoE beats the maxmin value: the adversary best-responds in a zero-sum game
    assert solve_tmcoe_grid(game, part, 1).team_value == Fraction(2, 5)

    report = check_exchangeable(game, part, saddle.candidate, other)
    assert not report.exchangeable
    assert report.swapped[0].violations == (Violation(0, 0, 1, Fraction(3, 10)),)


def test_saddle_point_coes_exchange():
    for seed in range(20):
        game, part = random_game(3, 2, seed, "consistent_zero_sum", k_list=(2, 2), payoff_range=(-3, 3))
        res = solve_tmcoe_consistent_lp(game, part)
        for r in (1, 2, 3):
            grid = solve_tmcoe_grid(game, part, r)
            if grid is None or grid.team_value != res.team_value:
                continue
            if team_deviation_gain(game, part, grid.candidate) == 0:
                assert check_exchangeable(game, part, res.candidate, grid.candidate)


def test_exchange_rejects_non_coe(ga):
    game, part = ga
    rows = chicken_profiles(game)
    with pytest.raises(NotEquilibriumError):
        check_exchangeable(game, part, rows[2], rows[10])


# -- classification -----------------------------------------------------------------------

TABLE3 = {
    # row: (u_T, stable, NE, CoE, TMCoE); None where the table leaves the column blank
    3: (9, True, True, None, None),
    4: (9, True, None, True, False),
    5: (9, True, True, None, None),
    6: (9, True, None, True, False),
    7: (Fraction(84, 9), True, True, None, None),
    8: (Fraction(84, 9), True, None, True, False),
    9: (10, True, None, True, False),
    10: (Fraction(21, 2), True, None, True, True),
}


@pytest.mark.parametrize("row", sorted(TABLE3))
def test_table3_rows(ga, row):
    game, part = ga
    u_T, stable, ne, coe, tmcoe = TABLE3[row]
    c = classify_profile(game, part, chicken_profiles(game)[row], resolution=1)
    assert c.team_value == u_T
    assert c.stable is stable
    if ne is not None:
        assert c.ne is ne
    if c.form == "correlated":
        assert c.ne is None
        assert c.coe is coe
        assert c.tmcoe is tmcoe


def test_cc_b_unstable_in_ga(ga):
    game, part = ga
    rows = chicken_profiles(game)
    c = classify_profile(game, part, rows[1], resolution=1)
    assert (c.ne, c.coe, c.stable) == (False, False, False)
    assert c.team_value == 12
    c = classify_profile(game, part, rows[2], resolution=1)
    assert (c.coe, c.stable) == (False, False)


def test_cc_b_is_the_shared_utility_optimum(gb):
    game, part = gb
    rows = chicken_profiles(game)
    c = classify_profile(game, part, rows[1], resolution=1)
    assert c.ne and c.stable
    value, team_play, _ = solve_maxmin(team_matrix(game, part))
    assert value == 12
    assert team_play == (0, 0, 0, 1)
