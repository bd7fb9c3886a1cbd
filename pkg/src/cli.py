"""
approxinc command line

    check           does a team satisfy an atom?
    measure         least quantity / ratio approximation of lhs ⊆ rhs on a team
    implies         decide Σ ⊨ goal (IMPLIED / NOT_IMPLIED / UNKNOWN)
    counterexample  build the counterexample team for a non-implied goal
    falsify         bounded brute-force search for a falsifying team

Exit codes: verdicts 0/1/2, usage or invalid input 64, unreadable input 74,
search budget or variable cap exhausted 75.
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv
from loguru import logger

from engine.counterexample import build_quantity_certificate, ratio_counterexample
from engine.implication import decide
from engine.oracle import enumerate_derivations, falsify_and_verify
from engine.semantics import deficiency, minimal_quantity, minimal_ratio, satisfies
from engine.team import Team
from schema.errors import (
    ApproxIncError,
    CertificateVerificationError,
    DerivableGoal,
    MixedAssumptionKinds,
    ResourceBudgetExceeded,
    UnreadableInput,
    VariableCapExceeded,
)
from schema.models import AssumptionSet, Atom, AtomKind, QuantityAtom, Verdict, VerdictKind, check_varseq, format_atom
from schema.profiles import get_profile
from tools.atom_parser import parse_atom
from tools.reports import format_derivation, verdict_to_dict, write_derivation
from tools.team_io import read_assumptions, read_team, team_to_csv, team_to_dict, write_team
from utils.logging_setup import make_run_id, setup_logging

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 64
EXIT_IO = 74
EXIT_BUDGET = 75


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


class InclusionWorkflow:
    """
    approxinc 主工作流

    子命令:
    1. check / measure -> 在团队上直接求值
    2. implies -> 蕴含判定 (推导或自检过的反例)
    3. counterexample / falsify -> 只构造反例

    绑定一个求解配置；各方法接收已解析的输入，文件读写与打印留给 argparse 层。
    """

    def __init__(self, profile_id: str = "default", **overrides: Any):
        # .env 中的 AID_NODE_BUDGET 须在解析配置前载入
        load_dotenv()
        self.profile = get_profile(profile_id, **overrides)
        logger.info(
            f"🚀 approxinc workflow initialized (profile: {self.profile.profile_id}, "
            f"node budget {self.profile.node_budget}, var cap {self.profile.var_cap})"
        )

    def check(self, team: Team, atom: Atom) -> Dict[str, Any]:
        return {
            "atom": format_atom(atom),
            "satisfied": satisfies(team, atom),
            "deficiency": deficiency(team, atom.lhs, atom.rhs),
            "rows": len(team),
        }

    def measure(self, team: Team, lhs: Sequence[str], rhs: Sequence[str]) -> Dict[str, Any]:
        return {
            "lhs": list(lhs),
            "rhs": list(rhs),
            "rows": len(team),
            "minimal_quantity": minimal_quantity(team, lhs, rhs),
            "minimal_ratio": str(minimal_ratio(team, lhs, rhs)),
        }

    def implies(self, sigma: AssumptionSet, goal: Atom) -> Verdict:
        return decide(sigma, goal, self.profile)

    def counterexample(self, sigma: AssumptionSet, goal: Atom) -> Tuple[Team, str]:
        """返回 (反例团队, 构造策略)。"""
        if isinstance(goal, QuantityAtom):
            return build_quantity_certificate(sigma, goal, self.profile)
        return ratio_counterexample(sigma, goal, self.profile), "lcd"

    def falsify(self, sigma: AssumptionSet, goal: Atom, max_rows: int, max_values: int) -> Optional[Team]:
        return falsify_and_verify(sigma, goal, max_rows, max_values)

    def cross_check(self, sigma: AssumptionSet, goal: Atom, verdict: Verdict) -> bool:
        """Compare the verdict with bounded derivation search; UNKNOWN agrees with anything but a found derivation."""
        derivation = enumerate_derivations(sigma, goal, self.profile.derivation_max_steps)
        agrees = (derivation is not None) == (verdict.outcome == VerdictKind.IMPLIED)
        if not agrees:
            logger.warning(f"⚠️ Bounded derivation search disagrees with {verdict.outcome.value} for {format_atom(goal)}")
        return agrees


# =====================================================
# 子命令
# =====================================================

def _emit(args: argparse.Namespace, payload: Dict[str, Any], text: str) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    elif text:
        print(text)


def _kind(value: Optional[str]) -> Optional[AtomKind]:
    return {"q": AtomKind.QUANTITY, "r": AtomKind.RATIO}.get(value) if value else None


def _load_problem(args: argparse.Namespace) -> Tuple[AssumptionSet, Atom]:
    kind = _kind(getattr(args, "kind", None))
    sigma = read_assumptions(args.assumptions, kind)
    goal = parse_atom(args.goal)
    expected = kind or sigma.kind
    if expected is not None and goal.kind != expected:
        raise MixedAssumptionKinds(f"Goal {format_atom(goal)} is not a {expected.value}-atom")
    return sigma, goal


def cmd_check(workflow: InclusionWorkflow, args: argparse.Namespace) -> int:
    team = read_team(args.team, args.format)
    result = workflow.check(team, parse_atom(args.atom))
    _emit(args, result, "true" if result["satisfied"] else "false")
    return EXIT_OK if result["satisfied"] else EXIT_FALSE


def cmd_measure(workflow: InclusionWorkflow, args: argparse.Namespace) -> int:
    team = read_team(args.team, args.format)
    lhs = check_varseq([v.strip() for v in args.lhs.split(",")])
    rhs = check_varseq([v.strip() for v in args.rhs.split(",")])
    result = workflow.measure(team, lhs, rhs)
    _emit(args, result, f"n = {result['minimal_quantity']}\np = {result['minimal_ratio']}")
    return EXIT_OK


def cmd_implies(workflow: InclusionWorkflow, args: argparse.Namespace) -> int:
    sigma, goal = _load_problem(args)
    verdict = workflow.implies(sigma, goal)

    if args.certificate and verdict.certificate is not None:
        write_team(verdict.certificate, args.certificate)
    if args.derivation and verdict.derivation is not None:
        write_derivation(verdict.derivation, args.derivation)

    lines = [verdict.outcome.value]
    if verdict.derivation is not None and args.verbose:
        lines.append(format_derivation(verdict.derivation))
    if verdict.reason:
        lines.append(f"reason: {verdict.reason}")
    if verdict.unused:
        lines.append(f"unused assumptions (below goal arity): {list(verdict.unused)}")
    payload = verdict_to_dict(verdict)
    if args.cross_check:
        payload["oracle_agrees"] = workflow.cross_check(sigma, goal, verdict)
        lines.append(f"oracle agrees: {str(payload['oracle_agrees']).lower()}")
    _emit(args, payload, "\n".join(lines))
    return verdict.exit_code


def cmd_counterexample(workflow: InclusionWorkflow, args: argparse.Namespace) -> int:
    sigma, goal = _load_problem(args)
    try:
        team, strategy = workflow.counterexample(sigma, goal)
    except DerivableGoal as e:
        _emit(args, {"goal": format_atom(goal), "derivable": True, "distance": str(e.distance)}, str(e))
        return EXIT_FALSE
    except CertificateVerificationError as e:
        _emit(args, {"goal": format_atom(goal), "derivable": None, "reason": e.reason}, str(e))
        return EXIT_UNKNOWN

    to_stdout = args.out == "-"
    if not (to_stdout and args.json):
        write_team(team, args.out, args.format)
    payload = {"goal": format_atom(goal), "strategy": strategy, "rows": len(team), "out": args.out}
    if to_stdout and args.json:
        payload["team"] = team_to_dict(team)
    _emit(args, payload, "" if to_stdout else f"wrote {len(team)} rows ({strategy}) to {args.out}")
    return EXIT_OK


def cmd_falsify(workflow: InclusionWorkflow, args: argparse.Namespace) -> int:
    sigma, goal = _load_problem(args)
    team = workflow.falsify(sigma, goal, args.max_rows, args.max_values)
    if team is None:
        _emit(args, {"goal": format_atom(goal), "found": False}, "none")
        return EXIT_UNKNOWN
    _emit(args, {"goal": format_atom(goal), "found": True, "team": team_to_dict(team)}, team_to_csv(team).rstrip("\n"))
    return EXIT_FALSE


# =====================================================
# 参数解析
# =====================================================

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="approxinc", description="Quantity- and ratio-approximate inclusion dependencies")
    parser.add_argument("--log-level", type=str, default="WARNING", help="Log level (DEBUG/INFO/WARNING/...)")
    parser.add_argument("--log-dir", type=str, default=None, help="Also write a per-run log file here")
    parser.add_argument("--run-id", type=str, default=None, help="Run id for the log file name (default: timestamp)")

    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="Emit a machine-readable result object")

    solver = _Parser(add_help=False)
    solver.add_argument("--profile", type=str, default="default", help="Solver profile id from config/")
    solver.add_argument("--node-budget", type=int, default=None, help="Max expanded nodes in shortest-path search")
    solver.add_argument("--var-cap", type=int, default=None, help="Max variables for the quantity construction")

    problem = _Parser(add_help=False)
    problem.add_argument("--assumptions", required=True, help="Assumption file (one atom per line, '-' for stdin)")
    problem.add_argument("--goal", required=True, help='Goal atom, e.g. "rinc(x; y; 1/2)"')

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", parents=[common], help="Model-check one atom on a team")
    p.add_argument("--team", required=True)
    p.add_argument("--atom", required=True)
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("measure", parents=[common], help="Least n and p for lhs ⊆ rhs on a team")
    p.add_argument("--team", required=True)
    p.add_argument("--lhs", required=True, help="Comma-separated variables, e.g. x1,x2")
    p.add_argument("--rhs", required=True)
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.set_defaults(handler=cmd_measure)

    p = sub.add_parser("implies", parents=[common, solver, problem], help="Decide Σ ⊨ goal")
    p.add_argument("--kind", choices=["q", "r"], required=True)
    p.add_argument("--certificate", default=None, help="Write the counterexample team here (NOT_IMPLIED)")
    p.add_argument("--derivation", default=None, help="Write the derivation as JSON here (IMPLIED)")
    p.add_argument("-v", "--verbose", action="store_true", help="Print the derivation steps")
    p.add_argument("--cross-check", action="store_true", help="Also run bounded derivation search and report agreement")
    p.set_defaults(handler=cmd_implies)

    p = sub.add_parser("counterexample", parents=[common, solver, problem], help="Build a counterexample team")
    p.add_argument("--kind", choices=["q", "r"], required=True)
    p.add_argument("--out", default="-", help="Output team file (.csv or .json, '-' for stdout)")
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.set_defaults(handler=cmd_counterexample)

    p = sub.add_parser("falsify", parents=[common, solver, problem], help="Brute-force a falsifying team")
    p.add_argument("--kind", choices=["q", "r"], default=None)
    p.add_argument("--max-rows", type=int, default=None)
    p.add_argument("--max-values", type=int, default=None)
    p.set_defaults(handler=cmd_falsify)

    return parser


def run_cli(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE

    log_path = setup_logging(args.log_level, args.log_dir, args.run_id or make_run_id("cli"))
    if log_path:
        logger.info(f"🧾 Log file: {log_path}")

    overrides = {
        "node_budget": getattr(args, "node_budget", None),
        "var_cap": getattr(args, "var_cap", None),
    }
    try:
        workflow = InclusionWorkflow(getattr(args, "profile", "default"), **overrides)
        if args.command == "falsify":
            args.max_rows = args.max_rows or workflow.profile.falsify_max_rows
            args.max_values = args.max_values or workflow.profile.falsify_max_values
        return args.handler(workflow, args)
    except (ResourceBudgetExceeded, VariableCapExceeded) as e:
        logger.error(f"❌ {e}")
        return EXIT_BUDGET
    except (OSError, UnreadableInput) as e:
        logger.error(f"❌ {e}")
        return EXIT_IO
    except ApproxIncError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_USAGE
    except ValueError as e:
        # pydantic rejects out-of-range profile overrides
        logger.error(f"❌ {e}")
        return EXIT_USAGE


def main() -> int:
    return run_cli(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
