from fractions import Fraction

import pytest

from engine.team import Team
from schema.models import AssumptionSet, qinc, rinc
from schema.profiles import get_profile


@pytest.fixture(autouse=True)
def _no_budget_env(monkeypatch):
    monkeypatch.delenv("AID_NODE_BUDGET", raising=False)


@pytest.fixture
def profile():
    return get_profile("default")


@pytest.fixture
def pair_chain_sigma():
    """x1x2 ⊆_2 w1w2, w1w2 ⊆_1 y1y2."""
    return AssumptionSet.of([
        qinc(["x1", "x2"], ["w1", "w2"], 2),
        qinc(["w1", "w2"], ["y1", "y2"], 1),
    ])


@pytest.fixture
def pair_chain_goal():
    return qinc(["x1", "x2"], ["y1", "y2"], 2)


@pytest.fixture
def ratio_chain_sigma():
    """x ⊆_{1/4} w, w ⊆_{1/2} y."""
    return AssumptionSet.of([
        rinc(["x"], ["w"], Fraction(1, 4)),
        rinc(["w"], ["y"], Fraction(1, 2)),
    ])


@pytest.fixture
def ratio_chain_goal():
    return rinc(["x"], ["y"], Fraction(1, 2))


@pytest.fixture
def ratio_chain_team():
    return Team.from_rows(
        ["x", "w", "y"],
        [
            ["1", "1", "1"],
            ["2", "1", "1"],
            ["3", "3", "1"],
            ["4", "4", "1"],
            ["5", "5", "5"],
        ],
    )


@pytest.fixture
def freshmen_team():
    """40 freshmen (x) against registered students (y); 10 names are not registered yet."""
    rows = []
    for i in range(40):
        registered = f"s{i}" if i >= 10 else f"s{10 + i}"
        rows.append([f"s{i}", registered])
    return Team.from_rows(["x", "y"], rows)


@pytest.fixture
def swap_witness():
    """Implied but not derivable by shortest paths (arity 2)."""
    sigma = AssumptionSet.of([
        qinc(["x1", "x2"], ["u1", "u2"], 0),
        qinc(["x1", "x2"], ["u2", "u1"], 0),
        qinc(["u1", "u2"], ["v1", "v2"], 1),
        qinc(["v1", "v2"], ["y1", "y2"], 0),
        qinc(["v2", "v1"], ["y1", "y2"], 0),
        qinc(["x1", "x2"], ["y2", "y1"], 0),
    ])
    return sigma, qinc(["x1", "x2"], ["y1", "y2"], 0)


@pytest.fixture
def subteam():
    """Rows of the i-th diagonal subteam (values "i" / "i.5")."""

    def _subteam(team: Team, i: int) -> Team:
        tokens = {str(i), f"{i}.5"}
        return Team(team.variables, [r for r in team.rows if r[0] in tokens])

    return _subteam
