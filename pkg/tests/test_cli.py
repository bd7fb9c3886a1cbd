import json

import pytest

from cli import EXIT_BUDGET, EXIT_FALSE, EXIT_IO, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE, InclusionWorkflow, run_cli
from engine.team import Team
from schema.models import qinc
from tools.team_io import read_team

RATIO_CHAIN_CSV = "x,w,y\n1,1,1\n2,1,1\n3,3,1\n4,4,1\n5,5,5\n"


@pytest.fixture
def ratio_chain_file(tmp_path):
    path = tmp_path / "ratio_chain.csv"
    path.write_text(RATIO_CHAIN_CSV, encoding="utf-8")
    return str(path)


@pytest.fixture
def ratio_sigma(tmp_path):
    path = tmp_path / "ratio.txt"
    path.write_text("# x feeds w, w feeds y\nrinc(x; w; 1/4)\nrinc(w; y; 1/2)\n", encoding="utf-8")
    return str(path)


@pytest.fixture
def quantity_sigma(tmp_path):
    path = tmp_path / "quantity.txt"
    path.write_text("qinc(x1,x2; w1,w2; 2)\nqinc(w1,w2; y1,y2; 1)\n", encoding="utf-8")
    return str(path)


class TestCheckAndMeasure:
    def test_check(self, ratio_chain_file, capsys):
        assert run_cli(["check", "--team", ratio_chain_file, "--atom", "rinc(x; y; 3/5)"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "true"
        assert run_cli(["check", "--team", ratio_chain_file, "--atom", "qinc(x; y; 2)"]) == EXIT_FALSE

    def test_check_json(self, ratio_chain_file, capsys):
        assert run_cli(["check", "--json", "--team", ratio_chain_file, "--atom", "qinc(x; w; 1)"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["satisfied"] is True
        assert payload["deficiency"] == 1

    def test_empty_team(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        path.write_text("x,y\n", encoding="utf-8")
        assert run_cli(["check", "--team", str(path), "--atom", "qinc(x; y; 0)"]) == EXIT_OK

    def test_measure(self, ratio_chain_file, capsys):
        assert run_cli(["measure", "--team", ratio_chain_file, "--lhs", "x", "--rhs", "y"]) == EXIT_OK
        assert capsys.readouterr().out.split("\n")[:2] == ["n = 3", "p = 3/5"]

    def test_unknown_column(self, ratio_chain_file):
        assert run_cli(["check", "--team", ratio_chain_file, "--atom", "qinc(x; z; 0)"]) == EXIT_USAGE


class TestImplies:
    def test_not_implied_with_certificate(self, ratio_sigma, tmp_path, capsys, ratio_chain_team):
        out = tmp_path / "cert.csv"
        code = run_cli([
            "implies", "--kind", "r", "--assumptions", ratio_sigma,
            "--goal", "rinc(x; y; 1/2)", "--certificate", str(out),
        ])
        assert code == EXIT_FALSE
        assert capsys.readouterr().out.startswith("NOT_IMPLIED")
        assert read_team(out) == ratio_chain_team

    def test_implied_with_derivation(self, ratio_sigma, tmp_path, capsys):
        out = tmp_path / "proof.json"
        code = run_cli([
            "implies", "--kind", "r", "--assumptions", ratio_sigma,
            "--goal", "rinc(x; y; 3/4)", "--derivation", str(out), "-v", "--cross-check",
        ])
        assert code == EXIT_OK
        text = capsys.readouterr().out
        assert text.startswith("IMPLIED")
        assert "oracle agrees: true" in text
        steps = json.loads(out.read_text(encoding="utf-8"))["steps"]
        assert [s["rule"] for s in steps] == ["HYP", "HYP", "R2"]

    def test_json_verdict(self, quantity_sigma, capsys):
        code = run_cli([
            "implies", "--json", "--kind", "q", "--assumptions", quantity_sigma,
            "--goal", "qinc(x1,x2; y1,y2; 2)",
        ])
        assert code == EXIT_FALSE
        payload = json.loads(capsys.readouterr().out)
        assert payload["outcome"] == "NOT_IMPLIED"
        assert payload["distance"] == "3"
        assert payload["strategy"] == "diagonal"
        assert len(payload["certificate"]["rows"]) == 120

    def test_unknown(self, tmp_path):
        path = tmp_path / "wide.txt"
        path.write_text("qinc(a,b,c; d,e,f; 1)\n", encoding="utf-8")
        code = run_cli(["implies", "--kind", "q", "--assumptions", str(path), "--goal", "qinc(a,b; d,e; 0)"])
        assert code == EXIT_UNKNOWN

    def test_goal_of_the_wrong_kind(self, ratio_sigma):
        code = run_cli(["implies", "--kind", "r", "--assumptions", ratio_sigma, "--goal", "qinc(x; y; 1)"])
        assert code == EXIT_USAGE

    def test_bad_goal_syntax(self, ratio_sigma):
        assert run_cli(["implies", "--kind", "r", "--assumptions", ratio_sigma, "--goal", "rinc(x; y"]) == EXIT_USAGE


class TestExitCodes:
    def test_missing_arguments(self):
        assert run_cli(["implies", "--kind", "q"]) == EXIT_USAGE
        assert run_cli([]) == EXIT_USAGE

    def test_missing_file(self, tmp_path):
        code = run_cli(["check", "--team", str(tmp_path / "absent.csv"), "--atom", "qinc(x; y; 0)"])
        assert code == EXIT_IO

    def test_node_budget(self, quantity_sigma):
        code = run_cli([
            "implies", "--kind", "q", "--assumptions", quantity_sigma,
            "--goal", "qinc(x1,x2; y1,y2; 2)", "--node-budget", "1",
        ])
        assert code == EXIT_BUDGET

    def test_node_budget_from_environment(self, quantity_sigma, monkeypatch):
        monkeypatch.setenv("AID_NODE_BUDGET", "1")
        code = run_cli(["implies", "--kind", "q", "--assumptions", quantity_sigma, "--goal", "qinc(x1,x2; y1,y2; 2)"])
        assert code == EXIT_BUDGET

    def test_variable_cap(self, quantity_sigma):
        code = run_cli([
            "implies", "--kind", "q", "--assumptions", quantity_sigma,
            "--goal", "qinc(x1,x2; y1,y2; 2)", "--var-cap", "2",
        ])
        assert code == EXIT_BUDGET

    def test_huge_bound(self, tmp_path):
        path = tmp_path / "sigma.txt"
        path.write_text("qinc(x; w; 0)\n", encoding="utf-8")
        code = run_cli(["implies", "--kind", "q", "--assumptions", str(path), "--goal", "qinc(x; y; 10000000)"])
        assert code == EXIT_BUDGET


class TestCounterexampleAndFalsify:
    def test_counterexample_to_file(self, ratio_sigma, tmp_path):
        out = tmp_path / "team.json"
        code = run_cli([
            "counterexample", "--kind", "r", "--assumptions", ratio_sigma,
            "--goal", "rinc(x; y; 1/2)", "--out", str(out),
        ])
        assert code == EXIT_OK
        assert len(read_team(out)) == 5

    def test_counterexample_to_stdout(self, quantity_sigma, capsys):
        code = run_cli(["counterexample", "--kind", "q", "--assumptions", quantity_sigma, "--goal", "qinc(x1,x2; y1,y2; 0)"])
        assert code == EXIT_OK
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "x1,x2,w1,w2,y1,y2"

    def test_counterexample_of_derivable_goal(self, ratio_sigma):
        code = run_cli(["counterexample", "--kind", "r", "--assumptions", ratio_sigma, "--goal", "rinc(x; y; 3/4)"])
        assert code == EXIT_FALSE

    def test_falsify(self, ratio_sigma, capsys):
        code = run_cli([
            "falsify", "--assumptions", ratio_sigma, "--goal", "rinc(x; y; 1/2)",
            "--max-rows", "4", "--max-values", "4",
        ])
        assert code == EXIT_FALSE
        assert capsys.readouterr().out.startswith("x,w,y")

    def test_falsify_finds_nothing(self, ratio_sigma, capsys):
        code = run_cli(["falsify", "--assumptions", ratio_sigma, "--goal", "rinc(x; y; 3/4)", "--max-rows", "3"])
        assert code == EXIT_UNKNOWN
        assert capsys.readouterr().out.strip() == "none"


def test_log_file(tmp_path, ratio_chain_file):
    log_dir = tmp_path / "logs"
    code = run_cli([
        "--log-level", "INFO", "--log-dir", str(log_dir), "--run-id", "t1",
        "check", "--team", ratio_chain_file, "--atom", "qinc(x; y; 3)",
    ])
    assert code == EXIT_OK
    assert (log_dir / "approxinc_t1.log").exists()


def test_workflow():
    workflow = InclusionWorkflow("quick")
    team = Team.from_rows(["a", "b"], [["1", "2"]])
    assert workflow.check(team, qinc(["a"], ["b"], 0))["satisfied"] is False
    assert workflow.measure(team, ["a"], ["b"])["minimal_ratio"] == "1"
    assert workflow.profile.falsify_fallback is False
