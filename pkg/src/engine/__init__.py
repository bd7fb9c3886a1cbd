# src/engine/__init__.py
"""
approxinc 推理引擎层

提供的模块：
- team: 团队 (Team) 与投影 T[x]
- semantics: 数量/比例近似包含原子的模型检查与最小近似度
- graph: Σ′ 预处理、依赖图与最短路径
- derivation: 推导抽取与回放校验
- implication: 蕴含判定 (IMPLIED / NOT_IMPLIED / UNKNOWN)
- counterexample: 反例团队构造与自检
- oracle: 穷举反例与有界推导枚举（交叉验证用）
"""

from engine.team import Team, project, union
from engine.semantics import (
    deficiency,
    minimal_quantity,
    minimal_ratio,
    satisfies,
    satisfies_inclusion,
    satisfies_quantity,
    satisfies_ratio,
)
from engine.graph import (
    DependencyGraph,
    Edge,
    build_graph,
    distances_from,
    normalize_assumptions,
    shortest_path,
    shortest_weight,
)
from engine.derivation import replay_derivation
from engine.implication import decide, decide_quantity, decide_ratio
from engine.counterexample import (
    QuantityWitnessSpec,
    RatioWitnessSpec,
    describe_quantity_witness,
    describe_ratio_witness,
    quantity_counterexample,
    ratio_counterexample,
    verify_certificate,
)
from engine.oracle import enumerate_derivations, falsify_by_enumeration

__all__ = [
    "Team",
    "project",
    "union",
    "deficiency",
    "minimal_quantity",
    "minimal_ratio",
    "satisfies",
    "satisfies_inclusion",
    "satisfies_quantity",
    "satisfies_ratio",
    "DependencyGraph",
    "Edge",
    "build_graph",
    "distances_from",
    "normalize_assumptions",
    "shortest_path",
    "shortest_weight",
    "replay_derivation",
    "decide",
    "decide_quantity",
    "decide_ratio",
    "QuantityWitnessSpec",
    "RatioWitnessSpec",
    "describe_quantity_witness",
    "describe_ratio_witness",
    "quantity_counterexample",
    "ratio_counterexample",
    "verify_certificate",
    "enumerate_derivations",
    "falsify_by_enumeration",
]
