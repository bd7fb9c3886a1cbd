from fractions import Fraction

import pytest

from engine.derivation import replay_derivation
from engine.oracle import enumerate_derivations, falsify_and_verify, falsify_by_enumeration
from engine.semantics import satisfies
from schema.errors import BoundOutOfRange, ResourceBudgetExceeded
from schema.models import AssumptionSet, Rule, qinc, rinc


class TestFalsify:
    def test_plain_inclusion(self):
        team = falsify_by_enumeration(AssumptionSet.of([]), qinc(["x"], ["y"], 0), max_rows=2, max_values=2)
        assert team is not None
        assert len(team) == 1
        assert not satisfies(team, qinc(["x"], ["y"], 0))

    def test_ratio_chain_needs_four_values(self, ratio_chain_sigma, ratio_chain_goal):
        team = falsify_and_verify(ratio_chain_sigma, ratio_chain_goal, max_rows=4, max_values=4)
        assert team is not None
        assert len(team) == 4
        assert all(satisfies(team, atom) for atom in ratio_chain_sigma)

    def test_ratio_chain_with_three_values_finds_nothing(self, ratio_chain_sigma, ratio_chain_goal):
        assert falsify_by_enumeration(ratio_chain_sigma, ratio_chain_goal, max_rows=4, max_values=3) is None

    def test_implied_goal_has_no_falsifier(self, ratio_chain_sigma):
        assert falsify_by_enumeration(ratio_chain_sigma, rinc(["x"], ["y"], Fraction(3, 4)), max_rows=4, max_values=3) is None

    def test_pair_chain(self, pair_chain_sigma, pair_chain_goal):
        team = falsify_by_enumeration(pair_chain_sigma, pair_chain_goal, max_rows=3, max_values=2)
        assert team is not None
        assert all(satisfies(team, atom) for atom in pair_chain_sigma)
        assert not satisfies(team, pair_chain_goal)

    def test_bounds(self, pair_chain_sigma, pair_chain_goal):
        with pytest.raises(BoundOutOfRange):
            falsify_by_enumeration(pair_chain_sigma, pair_chain_goal, max_rows=-1, max_values=2)
        with pytest.raises(BoundOutOfRange):
            falsify_by_enumeration(pair_chain_sigma, pair_chain_goal, max_rows=2, max_values=0)
        with pytest.raises(ResourceBudgetExceeded):
            falsify_by_enumeration(pair_chain_sigma, pair_chain_goal, max_rows=2, max_values=3, max_row_space=100)


class TestEnumerateDerivations:
    def test_pair_chain(self, pair_chain_sigma, pair_chain_goal):
        assert enumerate_derivations(pair_chain_sigma, pair_chain_goal, 4) is None
        goal = qinc(["x1", "x2"], ["y1", "y2"], 3)
        derivation = enumerate_derivations(pair_chain_sigma, goal, 4)
        replay_derivation(pair_chain_sigma, derivation, goal)

    def test_swap_witness_is_not_derivable(self, swap_witness):
        sigma, goal = swap_witness
        assert enumerate_derivations(sigma, goal, 6) is None

    def test_permuted_goal(self, pair_chain_sigma):
        goal = qinc(["x2", "x1"], ["y2", "y1"], 4)
        derivation = enumerate_derivations(pair_chain_sigma, goal, 4)
        replay_derivation(pair_chain_sigma, derivation, goal)
        assert Rule.Q5 in derivation.rules_used()

    def test_projection(self):
        sigma = AssumptionSet.of([qinc(["a", "b", "c"], ["d", "e", "f"], 1)])
        goal = qinc(["c"], ["f"], 1)
        derivation = enumerate_derivations(sigma, goal, 4)
        replay_derivation(sigma, derivation, goal)

    def test_ratio_top(self):
        goal = rinc(["x"], ["y"], 1)
        derivation = enumerate_derivations(AssumptionSet.of([]), goal, 1)
        assert derivation.rules_used() == [Rule.R6]

    def test_ratio_chain(self, ratio_chain_sigma, ratio_chain_goal):
        assert enumerate_derivations(ratio_chain_sigma, ratio_chain_goal, 4) is None
        goal = rinc(["x"], ["y"], Fraction(3, 4))
        replay_derivation(ratio_chain_sigma, enumerate_derivations(ratio_chain_sigma, goal, 4), goal)
