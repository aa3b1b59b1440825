import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from votefuse.errors import CapacityError, DimensionError
from votefuse.model import Coalition, DecisionProfile, VotingGame
from votefuse.wmr import (
    DEFAULT_MAX_WEIGHT,
    OUTCOME_A,
    OUTCOME_B,
    OUTCOME_ND,
    CanonicalWMR,
    DecisionRule,
    WinningFamily,
    enumerate_unique_wmr,
    enumeration_is_bound_stable,
    is_trade_robust,
    nearest_simple_rule,
    rule_distance,
    rule_from_game,
    rules_equivalent,
    wmr_network,
)

from oracles import rule_table_brute


def test_rule_table_matches_brute_force_on_random_weights():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(1, 6)
        weights = [rng.randint(0, 5) for _ in range(n)]
        bias = rng.randint(-sum(weights), sum(weights))
        rule = rule_from_game(VotingGame(weights, quota=0), bias=bias)
        assert rule.table.tolist() == rule_table_brute(weights, bias)


class TestDecisionRule:
    def test_majority_of_three_table(self):
        rule = CanonicalWMR((1, 1, 1)).rule()
        assert rule.evaluate(DecisionProfile((-1, -1, -1))) == OUTCOME_B
        assert rule.evaluate(DecisionProfile((1, 1, -1))) == OUTCOME_A
        assert rule.evaluate(DecisionProfile((1, -1, -1))) == OUTCOME_B
        assert rule.is_decisive() and rule.is_monotone()

    def test_profile_index_and_profile_object_agree(self):
        rule = CanonicalWMR((2, 1, 1)).rule()
        for m in range(8):
            assert rule.evaluate(m) == rule.evaluate(DecisionProfile.from_index(m, 3))

    def test_even_split_is_no_decision(self):
        rule = CanonicalWMR((1, 1)).rule()
        assert rule.evaluate(DecisionProfile((1, -1))) == OUTCOME_ND
        assert not rule.is_decisive()

    def test_bias_shifts_the_threshold(self):
        lean_b = rule_from_game(VotingGame((1, 1, 1), quota=0), bias=2)
        assert lean_b.evaluate(DecisionProfile((1, 1, -1))) == OUTCOME_B
        assert lean_b.evaluate(DecisionProfile((1, 1, 1))) == OUTCOME_A

    def test_fractional_bias_is_exact(self):
        rule = rule_from_game(VotingGame(("1/3", "1/3", "1/3"), quota=0), bias="1/3")
        assert rule.evaluate(DecisionProfile((1, 1, -1))) == OUTCOME_ND

    def test_bias_beyond_total_weight_is_rejected(self):
        with pytest.raises(ValueError):
            rule_from_game(VotingGame((1, 1), quota=0), bias=3)

    def test_table_is_read_only(self):
        rule = CanonicalWMR((1, 1, 1)).rule()
        with pytest.raises(ValueError):
            rule.table[0] = OUTCOME_A

    def test_wrong_vote_count_is_a_dimension_error(self):
        rule = CanonicalWMR((1, 1, 1)).rule()
        with pytest.raises(DimensionError):
            rule.evaluate(DecisionProfile((1, -1)))

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=6))
    @settings(max_examples=60, deadline=None)
    def test_neutrality_flipping_every_vote_flips_the_outcome(self, weights):
        rule = CanonicalWMR(tuple(weights)).rule()
        table = rule.table
        flipped = table[::-1]  # profile ~m reverses the index order
        assert np.array_equal(flipped, -table)

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=6),
           st.integers(-3, 3))
    @settings(max_examples=60, deadline=None)
    def test_every_weighted_rule_is_monotone(self, weights, bias):
        bias = max(-sum(weights), min(sum(weights), bias))
        rule = rule_from_game(VotingGame(weights, quota=0), bias=bias)
        assert rule.is_monotone()


class TestEquivalence:
    def test_scaling_weights_gives_the_same_rule(self):
        assert rules_equivalent(CanonicalWMR((1, 1, 1)).rule(),
                                CanonicalWMR((2, 2, 2)).rule())

    def test_distinct_rules_differ_on_a_profile(self):
        a = CanonicalWMR((2, 1, 1, 1)).rule()
        b = CanonicalWMR((3, 1, 1, 1)).rule()
        assert not rules_equivalent(a, b)
        assert rule_distance(a, b) == 2

    def test_distance_requires_matching_sizes(self):
        with pytest.raises(DimensionError):
            rule_distance(CanonicalWMR((1, 1)).rule(), CanonicalWMR((1, 1, 1)).rule())


class TestEnumeration:
    @pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 2), (4, 3), (5, 7)])
    def test_unique_decisive_rule_counts(self, n, count):
        assert len(enumerate_unique_wmr(n)) == count

    def test_number_of_players_six(self):
        assert len(enumerate_unique_wmr(6)) == 21

    def test_canonical_weight_vectors_for_four_players(self):
        rules = enumerate_unique_wmr(4)
        assert [r.weights for r in rules] == [
            (1, 0, 0, 0),
            (1, 1, 1, 0),
            (2, 1, 1, 1),
        ]

    def test_canonical_weight_vectors_for_five_players(self):
        rules = enumerate_unique_wmr(5)
        assert [r.weights for r in rules] == [
            (1, 0, 0, 0, 0),
            (1, 1, 1, 0, 0),
            (1, 1, 1, 1, 1),
            (2, 1, 1, 1, 0),
            (2, 2, 1, 1, 1),
            (3, 1, 1, 1, 1),
            (3, 2, 2, 1, 1),
        ]

    def test_representatives_are_pairwise_distinct(self):
        rules = enumerate_unique_wmr(5)
        for a, b in itertools.combinations(rules, 2):
            assert not rules_equivalent(a.rule(), b.rule())

    def test_every_representative_is_decisive_and_monotone(self):
        for wmr in enumerate_unique_wmr(5):
            rule = wmr.rule()
            assert rule.is_decisive() and rule.is_monotone()
            assert sum(wmr.weights) % 2 == 1

    def test_default_bound_is_stable(self):
        for n in range(1, 6):
            assert enumeration_is_bound_stable(n)

    def test_too_small_a_bound_misses_rules(self):
        assert len(enumerate_unique_wmr(5, max_weight=2)) < 7

    def test_max_weight_must_be_positive(self):
        with pytest.raises(ValueError):
            enumerate_unique_wmr(3, max_weight=0)

    def test_capacity_gate(self):
        with pytest.raises(CapacityError):
            enumerate_unique_wmr(25)

    def test_default_bounds_exist_for_small_sizes(self):
        assert DEFAULT_MAX_WEIGHT[7] == 9


class TestNetwork:
    def test_disagreement_counts_for_four_players(self):
        rules = enumerate_unique_wmr(4)
        dist = wmr_network(rules)
        assert dist.shape == (3, 3)
        assert dist[0, 0] == 0
        assert dist[1, 2] == 2
        assert np.array_equal(dist, dist.T)

    def test_empty_input_yields_an_empty_matrix(self):
        assert wmr_network([]).shape == (0, 0)

    def test_mixed_sizes_are_rejected(self):
        with pytest.raises(DimensionError):
            wmr_network([CanonicalWMR((1, 1, 1)), CanonicalWMR((1, 1, 1, 1, 1))])


class TestNearestSimpleRule:
    def test_dominant_expert_maps_to_a_dictatorship(self):
        # 3.0 outweighs the other three combined, so the expert decides alone
        res = nearest_simple_rule((3.0, 0.7, 0.7, 0.7))
        assert res.candidate.weights == (1, 0, 0, 0)
        assert res.disagreements == 0

    def test_log_odds_of_one_strong_judge_maps_to_a_dictatorship(self):
        from votefuse.jury import optimal_weights

        target = optimal_weights((0.9, 0.6, 0.6, 0.6))
        res = nearest_simple_rule(target)
        assert res.candidate.weights == (1, 0, 0, 0)
        assert res.disagreements == 0

    def test_near_tied_weights_land_on_the_closest_table(self):
        res = nearest_simple_rule((2.0, 0.7, 0.7, 0.7))
        assert res.candidate.weights == (2, 1, 1, 1)
        assert res.disagreements == 0

    def test_equal_weights_map_to_simple_majority(self):
        res = nearest_simple_rule((1.0, 1.0, 1.0, 1.0, 1.0))
        assert res.candidate.weights == (1, 1, 1, 1, 1)
        assert res.disagreements == 0

    def test_competence_breaks_distance_ties(self):
        # an all-zero target agrees with nobody; skills pick the winner
        res = nearest_simple_rule((0.0, 0.0, 0.0), skills=(0.9, 0.6, 0.6))
        assert res.competence is not None
        best = max(
            enumerate_unique_wmr(3),
            key=lambda w: _competence_of(w.weights, (0.9, 0.6, 0.6)),
        )
        assert res.candidate.weights == best.weights

    def test_explicit_candidates_are_respected(self):
        only = [CanonicalWMR((1, 1, 1))]
        res = nearest_simple_rule((5.0, 1.0, 1.0), candidates=only)
        assert res.candidate.weights == (1, 1, 1)


def _competence_of(weights, skills):
    from votefuse.jury import group_competence

    return group_competence(weights, 0.0, skills)


class TestWinningFamily:
    def test_from_game_collects_winning_coalitions(self):
        fam = WinningFamily.from_game(VotingGame((2, 1, 1), quota=2))
        assert fam.is_winning({0, 1})
        assert fam.is_winning(Coalition({0, 2}))
        assert not fam.is_winning({1, 2})
        assert not fam.is_winning({0})

    def test_minimal_winning_coalitions(self):
        fam = WinningFamily.from_game(VotingGame((2, 1, 1), quota=2))
        # masks: {0,1} -> 0b011, {0,2} -> 0b101
        assert fam.minimal_winning() == [0b011, 0b101]

    def test_upward_closure_is_enforced(self):
        with pytest.raises(ValueError):
            WinningFamily(3, frozenset({0b001}))  # superset 0b011 is missing

    def test_from_minimal_builds_the_closure(self):
        fam = WinningFamily.from_minimal(3, [{0, 1}])
        assert fam.winning == frozenset({0b011, 0b111})
        assert fam.minimal_winning() == [0b011]

    def test_construction_is_capped(self):
        with pytest.raises(CapacityError):
            WinningFamily.from_minimal(13, [{0}])


class TestTradeRobustness:
    def test_weighted_games_admit_no_witness(self):
        for weights, quota in [((2, 1, 1), 2), ((3, 2, 1, 1), "7/2"), ((1, 1, 1), None)]:
            fam = WinningFamily.from_game(VotingGame(weights, quota=quota))
            res = is_trade_robust(fam)
            assert res.robust and res.witness is None

    def test_dictatorship_is_trivially_robust(self):
        fam = WinningFamily.from_minimal(4, [{0}])
        assert is_trade_robust(fam).robust

    def test_projective_style_family_fails_with_a_verified_witness(self):
        # Fano-plane lines: a single swap can leave both traded sets losing.
        lines = [
            {0, 1, 2}, {0, 3, 4}, {0, 5, 6},
            {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5},
        ]
        fam = WinningFamily.from_minimal(7, lines)
        res = is_trade_robust(fam)
        assert not res.robust
        w = res.witness
        assert all(fam.is_winning(c) for c in w.start)
        assert not any(fam.is_winning(c) for c in w.end)
        assert 1 <= len(w.trades) <= 3
        sizes = sorted(len(c) for c in w.start)
        assert sizes == sorted(len(c) for c in w.end)

    def test_two_disjoint_pairs_fail_in_one_trade(self):
        fam = WinningFamily.from_minimal(4, [{0, 1}, {2, 3}])
        res = is_trade_robust(fam)
        assert not res.robust
        assert len(res.witness.trades) == 1

    def test_trade_cap_must_be_positive(self):
        fam = WinningFamily.from_minimal(4, [{0, 1}])
        with pytest.raises(ValueError):
            is_trade_robust(fam, trade_size_cap=0)

    def test_capacity_gate(self):
        with pytest.raises(CapacityError):
            is_trade_robust(VotingGame((1,) * 13))
