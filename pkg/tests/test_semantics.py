from fractions import Fraction

import pytest

from engine.semantics import (
    deficiency,
    minimal_quantity,
    minimal_ratio,
    satisfies,
    satisfies_inclusion,
)
from engine.team import Team
from schema.errors import ArityMismatch
from schema.models import qinc, rinc


def test_ratio_chain_team_deficiencies(ratio_chain_team):
    assert deficiency(ratio_chain_team, ["x"], ["y"]) == 3
    assert deficiency(ratio_chain_team, ["x"], ["w"]) == 1
    assert deficiency(ratio_chain_team, ["w"], ["y"]) == 2


def test_ratio_chain_team_satisfies_assumptions(ratio_chain_team, ratio_chain_sigma, ratio_chain_goal):
    assert all(satisfies(ratio_chain_team, atom) for atom in ratio_chain_sigma)
    assert not satisfies(ratio_chain_team, ratio_chain_goal)
    assert satisfies(ratio_chain_team, rinc(["x"], ["y"], Fraction(3, 5)))


def test_freshmen(freshmen_team):
    assert len(freshmen_team) == 40
    assert satisfies(freshmen_team, qinc(["x"], ["y"], 10))
    assert not satisfies(freshmen_team, qinc(["x"], ["y"], 9))
    assert satisfies(freshmen_team, rinc(["x"], ["y"], Fraction(1, 4)))
    assert not satisfies(freshmen_team, rinc(["x"], ["y"], Fraction(9, 40)))
    assert minimal_quantity(freshmen_team, ["x"], ["y"]) == 10
    assert minimal_ratio(freshmen_team, ["x"], ["y"]) == Fraction(1, 4)


def test_empty_team_satisfies_everything():
    team = Team.empty(["x", "y"])
    assert satisfies(team, qinc(["x"], ["y"], 0))
    assert satisfies(team, rinc(["x"], ["y"], 0))
    assert minimal_ratio(team, ["x"], ["y"]) == 0


def test_ratio_one_always_holds(ratio_chain_team):
    assert satisfies(ratio_chain_team, rinc(["x"], ["y"], 1))


def test_plain_inclusion_matches_zero_bound(ratio_chain_team):
    assert satisfies_inclusion(ratio_chain_team, ["y"], ["x"])
    assert satisfies(ratio_chain_team, qinc(["y"], ["x"], 0))
    assert not satisfies_inclusion(ratio_chain_team, ["x"], ["w"])
    assert not satisfies(ratio_chain_team, qinc(["x"], ["w"], 0))


def test_sequences_must_have_equal_length(ratio_chain_team):
    with pytest.raises(ArityMismatch):
        deficiency(ratio_chain_team, ["x", "w"], ["y"])


def test_order_of_columns_matters():
    team = Team.from_rows(["a", "b"], [["1", "2"]])
    assert satisfies(team, qinc(["a", "b"], ["a", "b"], 0))
    assert not satisfies(team, qinc(["a", "b"], ["b", "a"], 0))
    assert minimal_quantity(team, ["a", "b"], ["b", "a"]) == 1
