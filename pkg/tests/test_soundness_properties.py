"""Algebraic laws of the semantics and the team formats, checked on random small teams."""

import io
import json
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from engine.semantics import deficiency, minimal_quantity, minimal_ratio, satisfies, satisfies_inclusion
from engine.team import Team, project, union
from schema.models import qinc, rinc
from tools.team_io import read_team, team_to_csv, team_to_dict

VARIABLES = ("a", "b", "c", "d", "e", "f")
VALUES = st.sampled_from(["0", "1", "2"])


def teams(max_rows: int = 8):
    return st.lists(st.tuples(*[VALUES] * len(VARIABLES)), max_size=max_rows).map(lambda rows: Team(VARIABLES, rows))


@st.composite
def sequences(draw, count: int = 3):
    """`count` duplicate-free variable sequences of one common arity."""
    arity = draw(st.integers(min_value=1, max_value=3))
    return [draw(st.permutations(VARIABLES))[:arity] for _ in range(count)]


@given(teams(), sequences(1))
@settings(max_examples=200)
def test_projection_never_grows(team, seqs):
    assert len(project(team, seqs[0])) <= len(team)


@given(teams(), sequences(3))
@settings(max_examples=300)
def test_transitivity(team, seqs):
    x, z, y = seqs
    assert deficiency(team, x, y) <= deficiency(team, x, z) + deficiency(team, z, y)
    assert minimal_ratio(team, x, y) <= minimal_ratio(team, x, z) + minimal_ratio(team, z, y)


@given(teams(), sequences(2), st.data())
@settings(max_examples=300)
def test_permutation_and_projection(team, seqs, data):
    x, y = seqs
    order = data.draw(st.permutations(range(len(x))))
    x_perm = tuple(x[i] for i in order)
    y_perm = tuple(y[i] for i in order)
    assert deficiency(team, x_perm, y_perm) == deficiency(team, x, y)

    k = data.draw(st.integers(min_value=1, max_value=len(x)))
    assert deficiency(team, x[:k], y[:k]) <= deficiency(team, x, y)


@given(teams(), sequences(2), st.integers(min_value=0, max_value=3))
@settings(max_examples=200)
def test_weakening(team, seqs, extra):
    x, y = seqs
    n = minimal_quantity(team, x, y)
    assert satisfies(team, qinc(x, y, n))
    assert satisfies(team, qinc(x, y, n + extra))
    if n > 0:
        assert not satisfies(team, qinc(x, y, n - 1))


@given(teams(), sequences(2))
@settings(max_examples=200)
def test_ratio_threshold(team, seqs):
    x, y = seqs
    p = minimal_ratio(team, x, y)
    assert satisfies(team, rinc(x, y, p))
    assert satisfies(team, rinc(x, y, 1))
    if p > 0:
        assert not satisfies(team, rinc(x, y, p - Fraction(1, 100)))


@given(teams(), teams(), sequences(2))
@settings(max_examples=200)
def test_union_adds_deficiencies(first, second, seqs):
    x, y = seqs
    n, m = deficiency(first, x, y), deficiency(second, x, y)
    assert satisfies(union(first, second), qinc(x, y, n + m))


@given(teams(), sequences(1))
@settings(max_examples=100)
def test_reflexivity(team, seqs):
    x = seqs[0]
    assert satisfies(team, qinc(x, x, 0))
    assert satisfies(team, rinc(x, x, 0))


@given(teams(), sequences(2))
@settings(max_examples=300)
def test_zero_bound_is_plain_inclusion(team, seqs):
    x, y = seqs
    contained = project(team, x) <= project(team, y)
    assert satisfies(team, qinc(x, y, 0)) == contained
    assert satisfies_inclusion(team, x, y) == contained


@given(teams(), sequences(1), st.data())
@settings(max_examples=200)
def test_projection_follows_column_order(team, seqs, data):
    seq = seqs[0]
    order = data.draw(st.permutations(range(len(seq))))
    permuted = tuple(seq[i] for i in order)
    expected = {tuple(row[i] for i in order) for row in project(team, seq)}
    assert project(team, permuted) == expected


# 需要 CSV 转义的取值
AWKWARD_VALUES = st.sampled_from(["0", "1", "", "a,b", 'say "hi"', " padded ", "NA", "1.0"])


def awkward_teams(max_rows: int = 6):
    return st.lists(st.tuples(*[AWKWARD_VALUES] * 3), max_size=max_rows).map(lambda rows: Team(("x", "y", "z"), rows))


@given(awkward_teams())
@settings(max_examples=200)
def test_csv_round_trip(team):
    assert read_team(io.StringIO(team_to_csv(team))) == team


@given(awkward_teams())
@settings(max_examples=200)
def test_json_round_trip(team):
    assert read_team(io.StringIO(json.dumps(team_to_dict(team))), fmt="json") == team
