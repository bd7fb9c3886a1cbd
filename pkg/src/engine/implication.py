"""
Implication: decide Σ ⊨ goal by shortest-path search.

A derivation is extracted and replayed for every IMPLIED verdict, and a
counterexample team is verified for every NOT_IMPLIED verdict; anything that
cannot be backed this way is UNKNOWN.
"""

from typing import Optional

from loguru import logger

from engine.counterexample import build_quantity_certificate, problem_variables, ratio_counterexample
from engine.derivation import derivation_from_path, replay_derivation, top_derivation
from engine.graph import build_graph, normalize_assumptions, shortest_path
from engine.oracle import falsify_and_verify
from schema.errors import CertificateVerificationError, MixedAssumptionKinds, ResourceBudgetExceeded
from schema.models import AssumptionSet, Atom, AtomKind, QuantityAtom, RatioAtom, Verdict, format_atom, validate_atom
from schema.profiles import SolverProfile, get_profile

OVER_ARITY_REASON = "completeness open for assumptions of arity above the conclusion"
NON_UNARY_REASON = "completeness beyond unary ratio atoms is open"
NO_CERTIFICATE_REASON = "no derivation and no verified counterexample"


def _check_kinds(sigma: AssumptionSet, goal: Atom, kind: AtomKind) -> None:
    validate_atom(goal)
    if goal.kind != kind or (sigma.kind is not None and sigma.kind != kind):
        raise MixedAssumptionKinds(f"Cannot decide {format_atom(goal)} from {sigma.kind.value if sigma.kind else kind.value}-assumptions")


def decide_quantity(sigma: AssumptionSet, goal: QuantityAtom, profile: Optional[SolverProfile] = None) -> Verdict:
    """数量原子蕴含判定

    流程:
    1. 最短路径 -> 提取推导并重放
    2. 闭式反例构造 (对角 -> 定向 -> 混合) -> 自检
    3. 可选的有界穷举回退

    均未成功时返回 UNKNOWN。
    """
    profile = profile or get_profile()
    _check_kinds(sigma, goal, AtomKind.QUANTITY)
    l = goal.arity
    sigma_prime = normalize_assumptions(sigma, l)
    variables = problem_variables(sigma, goal)
    graph = build_graph(sigma_prime, l, variables)

    # 最短路径权重即可推出的最小 n
    found = shortest_path(graph, goal.lhs, goal.rhs, budget=profile.node_budget)
    distance = found[0] if found else None
    common = dict(distance=distance, unused=sigma_prime.unused)

    if found and distance <= goal.bound:
        derivation = derivation_from_path(sigma, found[1], goal)
        replay_derivation(sigma, derivation, goal)
        logger.info(f"✅ {format_atom(goal)} implied (shortest weight {distance}, {len(derivation)} steps)")
        return Verdict.implied(goal, derivation, strategy="shortest-path", **common)

    # 高元假设经投影后仍不可达：完备性未知
    if sigma.max_arity > l:
        logger.info(f"❓ {format_atom(goal)}: {OVER_ARITY_REASON}")
        return Verdict.unknown(goal, OVER_ARITY_REASON, **common)

    # NOT_IMPLIED 只随通过自检的反例团队返回
    try:
        team, strategy = build_quantity_certificate(sigma, goal, profile, graph)
        return Verdict.not_implied(goal, team, strategy=strategy, **common)
    except CertificateVerificationError as e:
        logger.warning(f"Closed-form counterexamples for {format_atom(goal)} failed: {e.reason}")

    if profile.falsify_fallback:
        try:
            team = falsify_and_verify(
                sigma, goal, profile.falsify_max_rows, profile.falsify_max_values, profile.falsify_max_row_space
            )
        except ResourceBudgetExceeded as e:
            logger.info(f"Skipping enumeration fallback: {e}")
            team = None
        if team is not None:
            return Verdict.not_implied(goal, team, strategy="enumeration", **common)

    logger.info(f"❓ {format_atom(goal)}: {NO_CERTIFICATE_REASON}")
    return Verdict.unknown(goal, f"{NO_CERTIFICATE_REASON} (shortest weight {distance})", **common)


def decide_ratio(sigma: AssumptionSet, goal: RatioAtom, profile: Optional[SolverProfile] = None) -> Verdict:
    """比例原子蕴含判定；一元情形完备，反例为最小公分母团队。"""
    profile = profile or get_profile()
    _check_kinds(sigma, goal, AtomKind.RATIO)
    l = goal.arity
    sigma_prime = normalize_assumptions(sigma, l)
    graph = build_graph(sigma_prime, l, problem_variables(sigma, goal))

    found = shortest_path(graph, goal.lhs, goal.rhs, budget=profile.node_budget)
    distance = found[0] if found else None
    common = dict(distance=distance, unused=sigma_prime.unused)
    # R6: p = 1 恒成立，权重截断到 1
    capped = 1 if distance is None else min(distance, 1)

    if capped <= goal.bound:
        if found and distance <= goal.bound:
            derivation = derivation_from_path(sigma, found[1], goal)
        else:
            derivation = top_derivation(goal)
        replay_derivation(sigma, derivation, goal)
        logger.info(f"✅ {format_atom(goal)} implied (capped weight {capped})")
        return Verdict.implied(goal, derivation, strategy="shortest-path", **common)

    if l != 1 or sigma.max_arity > 1:
        logger.info(f"❓ {format_atom(goal)}: {NON_UNARY_REASON}")
        return Verdict.unknown(goal, NON_UNARY_REASON, **common)

    team = ratio_counterexample(sigma, goal, profile)
    return Verdict.not_implied(goal, team, strategy="lcd", **common)


def decide(sigma: AssumptionSet, goal: Atom, profile: Optional[SolverProfile] = None) -> Verdict:
    """按目标原子类型分派。"""
    if goal.kind == AtomKind.QUANTITY:
        return decide_quantity(sigma, goal, profile)
    return decide_ratio(sigma, goal, profile)
