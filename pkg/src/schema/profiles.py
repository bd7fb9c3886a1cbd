"""
Solver profiles

Unified definition of the search budgets and construction caps used by the
implication, counterexample and oracle modules. A built-in default profile is
always available; further profiles are loaded from config/*.json.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from loguru import logger
from pydantic import BaseModel, Field

NODE_BUDGET_ENV = "AID_NODE_BUDGET"


class SolverProfile(BaseModel):
    """Tunables for one kind of workload."""
    profile_id: str = Field(..., description="配置 ID")
    description: str = Field(default="", description="配置说明")

    node_budget: int = Field(default=1_000_000, ge=1, description="最短路径搜索可展开的节点上限")
    var_cap: int = Field(default=16, ge=1, description="数量反例构造允许的最大变量数")
    row_budget: int = Field(default=2_000_000, ge=1, description="反例团队允许物化的最大行数")
    derivation_max_steps: int = Field(default=8, ge=1, description="穷举推导的轮数上限")
    falsify_max_rows: int = Field(default=4, ge=1, le=6, description="穷举反例的最大行数")
    falsify_max_values: int = Field(default=3, ge=1, le=5, description="穷举反例的值域大小")
    falsify_fallback: bool = Field(default=True, description="构造无法自检通过时是否回退到穷举搜索")
    falsify_max_row_space: int = Field(default=64, ge=1, description="回退搜索允许的候选行数上限 (值域^变量数)")


DEFAULT_PROFILE = SolverProfile(
    profile_id="default",
    description="Desk-scale budgets: 10^6 expanded nodes, 16-variable construction cap",
)


class ProfileManager:
    """Registry of solver profiles."""

    def __init__(self):
        self.profiles: Dict[str, SolverProfile] = {DEFAULT_PROFILE.profile_id: DEFAULT_PROFILE}

    def register_profile(self, profile: SolverProfile) -> None:
        self.profiles[profile.profile_id] = profile

    def register_profile_dict(self, profile_dict: Dict[str, Any]) -> SolverProfile:
        profile = SolverProfile(**profile_dict)
        self.register_profile(profile)
        return profile

    def get_profile(self, profile_id: str) -> SolverProfile:
        if profile_id not in self.profiles:
            logger.warning(f"Profile {profile_id!r} not found, using default")
            return self.profiles[DEFAULT_PROFILE.profile_id]
        return self.profiles[profile_id]

    def list_profiles(self) -> List[Dict[str, Any]]:
        return [
            {"id": p.profile_id, "description": p.description, "node_budget": p.node_budget, "var_cap": p.var_cap}
            for p in self.profiles.values()
        ]


profile_manager = ProfileManager()


# =====================================================
# 配置加载
# =====================================================

def load_profiles_from_config(config_path: Optional[str] = None, manager: Optional[ProfileManager] = None) -> int:
    """Load every JSON profile from a file or directory; returns how many were registered.

    A file holds one profile object or a list of them. Broken files and entries are
    skipped so the remaining profiles still load.
    """
    manager = manager or profile_manager
    if config_path:
        path = Path(config_path)
    else:
        # __file__ = src/schema/profiles.py -> project root is three levels up
        path = Path(__file__).resolve().parent.parent.parent / "config"

    if not path.exists():
        return 0

    json_files = sorted(path.glob("*.json")) if path.is_dir() else [path]
    loaded = 0
    for json_file in json_files:
        try:
            data = json.loads(json_file.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"Skipping profile file {json_file.name}: {e}")
            continue

        entries = [data] if isinstance(data, dict) else data if isinstance(data, list) else []
        for entry in entries:
            if not isinstance(entry, dict):
                continue
            try:
                manager.register_profile_dict(entry)
                loaded += 1
            except Exception as e:
                logger.warning(f"Skipping invalid profile in {json_file.name}: {e}")
    return loaded


load_profiles_from_config()


def get_profile(profile_id: str = "default", **overrides: Any) -> SolverProfile:
    """Resolve a profile, apply AID_NODE_BUDGET from the environment, then explicit overrides."""
    load_dotenv()
    profile = profile_manager.get_profile(profile_id)
    updates: Dict[str, Any] = {}

    env_budget = os.getenv(NODE_BUDGET_ENV)
    if env_budget:
        try:
            updates["node_budget"] = int(env_budget)
        except ValueError:
            logger.warning(f"Ignoring non-integer {NODE_BUDGET_ENV}={env_budget!r}")

    updates.update({k: v for k, v in overrides.items() if v is not None})
    if not updates:
        return profile
    return SolverProfile(**{**profile.model_dump(), **updates})
