"""
Rendering of derivations and verdicts as text and JSON.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from schema.models import Derivation, Verdict, Weight, format_atom
from tools.team_io import team_to_dict, write_json


def format_weight(weight: Optional[Weight]) -> Optional[str]:
    return None if weight is None else str(weight)


def derivation_to_dict(derivation: Derivation) -> List[Dict[str, Any]]:
    return [
        {
            "index": i,
            "rule": step.rule.value,
            "premises": list(step.premises),
            "sigma_index": step.sigma_index,
            "conclusion": format_atom(step.conclusion),
        }
        for i, step in enumerate(derivation.steps)
    ]


def format_derivation(derivation: Derivation) -> str:
    lines = []
    for i, step in enumerate(derivation.steps):
        if step.sigma_index is not None:
            source = f"Σ[{step.sigma_index}]"
        else:
            source = ", ".join(str(p) for p in step.premises) or "axiom"
        lines.append(f"{i:>4}  {step.rule.value:<3}  {format_atom(step.conclusion):<40}  ({source})")
    return "\n".join(lines)


def write_derivation(derivation: Derivation, path: Union[str, Path]) -> None:
    write_json(path, {"steps": derivation_to_dict(derivation)})


def verdict_to_dict(verdict: Verdict) -> Dict[str, Any]:
    return {
        "outcome": verdict.outcome.value,
        "goal": format_atom(verdict.goal),
        "distance": format_weight(verdict.distance),
        "unused": list(verdict.unused),
        "strategy": verdict.strategy,
        "reason": verdict.reason,
        "derivation": derivation_to_dict(verdict.derivation) if verdict.derivation else None,
        "certificate": team_to_dict(verdict.certificate) if verdict.certificate is not None else None,
    }
