"""
Counterexample teams for non-implied goals.

Quantity goals x ⊆_n y are refuted by a union of n+1 subteams. Subteam i uses
its own tokens, so value tuples of different subteams never meet, and in each
subteam the "marker" tuple is missing exactly from the variable tuples whose
distance from x is at least i (or that feed into the part of the graph reached
from x without being reached themselves).

  diagonal  tokens "i" / "i.5", every assignment of them except those putting
            "i" on all of an excluded variable set; distances are set-level
  oriented  tokens "i:1".."i:l" plus the filler "i:0"; the marker is the tuple
            ("i:1", ..., "i:l") so orderings are told apart; distances are
            tuple-level
  mixed     diagonal subteams while the set-level distance to y lasts, then
            oriented ones

The diagonal team is sound by construction and is used whenever every ordering
of y lies at distance > n, which always holds for unary goals. The other two
can over-charge an assumption through its permuted copies, so every team is
verified against Σ and the goal before it is returned.

Unary ratio goals x ⊆_p y are refuted by the lcd team: with n−1 the least common
denominator of all bounds, row i of column w reads "1" for i ≤ q′(w)+1 and "i"
otherwise, where q′(w) = (n−1)·min(dist(x, w), 1).
"""

import math
from dataclasses import dataclass, field, replace
from itertools import permutations, product
from typing import Dict, Iterator, List, Optional, Tuple

from loguru import logger

from engine.graph import (
    DependencyGraph,
    SetNode,
    build_graph,
    co_reachable,
    distances_from,
    normalize_assumptions,
    set_distances_from,
    shortest_weight,
    tuple_predecessors,
)
from engine.semantics import satisfies
from engine.team import Row, Team
from schema.errors import (
    ArityRestrictionViolated,
    CertificateVerificationError,
    DerivableGoal,
    GoalBoundIsOne,
    MixedAssumptionKinds,
    NonUnaryAtoms,
    ResourceBudgetExceeded,
    VariableCapExceeded,
)
from schema.models import (
    AssumptionSet,
    Atom,
    AtomKind,
    QuantityAtom,
    RatioAtom,
    VarSeq,
    format_atom,
    validate_atom,
)
from schema.profiles import SolverProfile, get_profile

DIAGONAL = "diagonal"
ORIENTED = "oriented"
MIXED = "mixed"


def problem_variables(sigma: AssumptionSet, goal: Atom) -> VarSeq:
    """Variables of Σ in order of appearance, then those only the goal mentions."""
    names = dict.fromkeys(sigma.variables())
    names.update(dict.fromkeys(goal.lhs + goal.rhs))
    return tuple(names)


def _removed(entries: Dict, key, i: int) -> bool:
    if key not in entries:
        return False
    m = entries[key]
    return m is None or m >= i


@dataclass(frozen=True)
class QuantityWitnessSpec:
    """Blueprint of the quantity counterexample.

    Removal maps send a variable set (set_removal) or an l-tuple (tuple_removal)
    to its distance m from x, or None for ∞; the marker is removed from that
    set/tuple in every subteam i ≤ m. Keys that are absent are never removed.
    """
    goal: QuantityAtom
    variables: VarSeq
    subteam_count: int
    set_removal: Dict[SetNode, Optional[int]]
    tuple_removal: Dict[VarSeq, Optional[int]] = field(default_factory=dict)
    diagonal_rounds: int = 0

    @property
    def arity(self) -> int:
        return self.goal.arity

    @property
    def strategy(self) -> str:
        if self.diagonal_rounds >= self.subteam_count:
            return DIAGONAL
        return ORIENTED if self.diagonal_rounds == 0 else MIXED

    @property
    def removal_map(self) -> Dict[VarSeq, Optional[int]]:
        """The map the subteams actually use (set keys are sorted tuples)."""
        if self.strategy == DIAGONAL:
            return dict(self.set_removal)
        return dict(self.tuple_removal)

    def set_distance_to_goal(self) -> Optional[int]:
        return self.set_removal.get(tuple(sorted(self.goal.rhs)))

    def excludes_set(self, node: SetNode, i: int) -> bool:
        return _removed(self.set_removal, node, i)

    def excludes_tuple(self, node: VarSeq, i: int) -> bool:
        return _removed(self.tuple_removal, node, i)


@dataclass(frozen=True)
class RatioWitnessSpec:
    """Blueprint of the lcd team: base = n−1, team_size = n, column_map[w] = q′(w)."""
    goal: RatioAtom
    variables: VarSeq
    base: int
    column_map: Dict[str, int]

    @property
    def team_size(self) -> int:
        return self.base + 1


# =====================================================
# 自检 (Self-verification)
# =====================================================

def verify_certificate(sigma: AssumptionSet, goal: Atom, team: Team) -> None:
    """Raise CertificateVerificationError unless `team` satisfies Σ and falsifies `goal`."""
    for idx, atom in enumerate(sigma):
        if not satisfies(team, atom):
            raise CertificateVerificationError(f"assumption {idx} {format_atom(atom)} is violated")
    if satisfies(team, goal):
        raise CertificateVerificationError(f"goal {format_atom(goal)} is satisfied")


# =====================================================
# Quantity
# =====================================================

def _check_quantity_problem(sigma: AssumptionSet, goal: QuantityAtom) -> None:
    validate_atom(goal)
    if sigma.kind == AtomKind.RATIO or goal.kind != AtomKind.QUANTITY:
        raise MixedAssumptionKinds()
    for atom in sigma:
        if atom.arity > goal.arity:
            raise ArityRestrictionViolated(atom.arity, goal.arity)


def _set_removal(graph: DependencyGraph, goal: QuantityAtom, budget: int) -> Dict[SetNode, Optional[int]]:
    n = goal.bound
    dist = set_distances_from(graph, goal.lhs, horizon=n, budget=budget)
    region = set(dist) | {tuple(sorted(goal.rhs))}
    removal: Dict[SetNode, Optional[int]] = {node: int(m) for node, m in dist.items()}
    for node in co_reachable(region, graph.set_predecessors, budget=budget):
        removal.setdefault(node, None)
    return removal


def _tuple_removal(graph: DependencyGraph, goal: QuantityAtom, budget: int) -> Dict[VarSeq, Optional[int]]:
    n = goal.bound
    dist = distances_from(graph, goal.lhs, horizon=n, budget=budget)
    region = set(dist) | {goal.rhs}
    removal: Dict[VarSeq, Optional[int]] = {node: int(m) for node, m in dist.items()}
    for node in co_reachable(region, tuple_predecessors(graph), budget=budget):
        removal.setdefault(node, None)
    return removal


def describe_quantity_witness(
    sigma: AssumptionSet,
    goal: QuantityAtom,
    profile: Optional[SolverProfile] = None,
    graph: Optional[DependencyGraph] = None,
) -> QuantityWitnessSpec:
    """Compute the blueprint without materializing any rows."""
    profile = profile or get_profile()
    _check_quantity_problem(sigma, goal)
    variables = problem_variables(sigma, goal)
    l, n = goal.arity, goal.bound
    graph = graph or build_graph(normalize_assumptions(sigma, l), l, variables)

    distance = shortest_weight(graph, goal.lhs, goal.rhs, budget=profile.node_budget)
    if distance is not None and distance <= n:
        raise DerivableGoal(format_atom(goal), distance)
    if len(variables) > profile.var_cap:
        raise VariableCapExceeded(len(variables), profile.var_cap)

    set_removal = _set_removal(graph, goal, profile.node_budget)
    spec = QuantityWitnessSpec(goal=goal, variables=variables, subteam_count=n + 1, set_removal=set_removal)
    m_y = spec.set_distance_to_goal()
    if m_y is None:
        # every ordering of y is farther than n: the diagonal team works
        return replace(spec, diagonal_rounds=n + 1)
    logger.debug(f"Set-level distance to {goal.rhs} is {m_y} ≤ {n}; using tuple-level removal")
    return replace(spec, tuple_removal=_tuple_removal(graph, goal, profile.node_budget))


def _diagonal_rows(spec: QuantityWitnessSpec, i: int) -> Iterator[Row]:
    pos = {v: j for j, v in enumerate(spec.variables)}
    excluded = [
        sum(1 << pos[v] for v in node)
        for node in spec.set_removal
        if spec.excludes_set(node, i)
    ]
    # 位掩码 mask：第 j 位为 1 表示第 j 个变量取 "i"，否则取 "i.5"
    hi, lo = str(i), f"{i}.5"
    width = len(spec.variables)
    for mask in range(1 << width):
        # 某个被排除的变量集合全取 "i"
        if any(mask & w == w for w in excluded):
            continue
        yield tuple(hi if mask >> j & 1 else lo for j in range(width))


def _oriented_rows(spec: QuantityWitnessSpec, i: int) -> Iterator[Row]:
    l, width = spec.arity, len(spec.variables)
    # "i:0" 为填充值，"i:1".."i:l" 为标记值
    tokens = [f"{i}:{k}" for k in range(l + 1)]
    base = [tokens[0]] * width
    markers = set(permutations(range(1, l + 1)))
    for w in permutations(range(width), l):
        for tau in product(range(l + 1), repeat=l):
            if tau in markers:
                continue
            row = list(base)
            for j, t in zip(w, tau):
                row[j] = tokens[t]
            yield tuple(row)
    # one row per allowed marked tuple: its k-th variable carries "i:k"
    for w in permutations(range(width), l):
        marked = tuple(spec.variables[j] for j in w)
        if spec.excludes_tuple(marked, i):
            continue
        row = list(base)
        for k, j in enumerate(w, start=1):
            row[j] = tokens[k]
        yield tuple(row)


def materialize_quantity_witness(spec: QuantityWitnessSpec, row_budget: Optional[int] = None) -> Team:
    """Build the union of the n+1 subteams; raises ResourceBudgetExceeded past `row_budget` rows."""
    if row_budget is not None and spec.subteam_count > row_budget:
        raise ResourceBudgetExceeded("certificate rows", row_budget)
    rows: List[Row] = []
    for i in range(1, spec.subteam_count + 1):
        if i <= spec.diagonal_rounds:
            rows.extend(_diagonal_rows(spec, i))
        else:
            rows.extend(_oriented_rows(spec, i))
        if row_budget is not None and len(rows) > row_budget:
            raise ResourceBudgetExceeded("certificate rows", row_budget)
    return Team(spec.variables, rows)


def build_quantity_certificate(
    sigma: AssumptionSet,
    goal: QuantityAtom,
    profile: Optional[SolverProfile] = None,
    graph: Optional[DependencyGraph] = None,
) -> Tuple[Team, str]:
    """Try the constructions in order and return the first verified team with its strategy name."""
    profile = profile or get_profile()
    spec = describe_quantity_witness(sigma, goal, profile, graph)
    candidates = [spec]
    if spec.strategy != DIAGONAL:
        m_y = spec.set_distance_to_goal()
        if m_y:
            candidates.append(replace(spec, diagonal_rounds=m_y))

    failure: Optional[CertificateVerificationError] = None
    for candidate in candidates:
        team = materialize_quantity_witness(candidate, profile.row_budget)
        try:
            verify_certificate(sigma, goal, team)
        except CertificateVerificationError as e:
            logger.warning(f"{candidate.strategy} construction rejected: {e.reason}")
            failure = e
            continue
        logger.info(f"✅ {candidate.strategy} counterexample: {len(team)} rows over {len(team.variables)} variables")
        return team, candidate.strategy
    raise failure


def quantity_counterexample(
    sigma: AssumptionSet,
    goal: QuantityAtom,
    profile: Optional[SolverProfile] = None,
) -> Team:
    """A verified team satisfying Σ and falsifying x ⊆_n y."""
    team, _ = build_quantity_certificate(sigma, goal, profile)
    return team


# =====================================================
# Ratio
# =====================================================

def describe_ratio_witness(
    sigma: AssumptionSet,
    goal: RatioAtom,
    profile: Optional[SolverProfile] = None,
    graph: Optional[DependencyGraph] = None,
) -> RatioWitnessSpec:
    profile = profile or get_profile()
    validate_atom(goal)
    if sigma.kind == AtomKind.QUANTITY or goal.kind != AtomKind.RATIO:
        raise MixedAssumptionKinds()
    if goal.bound == 1:
        raise GoalBoundIsOne()
    if goal.arity != 1 or any(atom.arity != 1 for atom in sigma):
        raise NonUnaryAtoms()

    variables = problem_variables(sigma, goal)
    graph = graph or build_graph(normalize_assumptions(sigma, 1), 1, variables)
    dist = distances_from(graph, goal.lhs, budget=profile.node_budget)
    reach = dist.get(goal.rhs)
    if reach is not None and min(reach, 1) <= goal.bound:
        raise DerivableGoal(format_atom(goal), reach)

    base = math.lcm(goal.bound.denominator, *(atom.bound.denominator for atom in sigma))
    column_map = {v: int(base * min(dist.get((v,), 1), 1)) for v in variables}
    return RatioWitnessSpec(goal=goal, variables=variables, base=base, column_map=column_map)


def materialize_ratio_witness(spec: RatioWitnessSpec) -> Team:
    rows = [
        tuple("1" if i <= spec.column_map[v] + 1 else str(i) for v in spec.variables)
        for i in range(1, spec.team_size + 1)
    ]
    return Team(spec.variables, rows)


def ratio_counterexample(
    sigma: AssumptionSet,
    goal: RatioAtom,
    profile: Optional[SolverProfile] = None,
) -> Team:
    """The verified lcd team for a unary, non-implied x ⊆_p y."""
    profile = profile or get_profile()
    spec = describe_ratio_witness(sigma, goal, profile)
    if spec.team_size > profile.row_budget:
        raise ResourceBudgetExceeded("certificate rows", profile.row_budget)
    team = materialize_ratio_witness(spec)
    verify_certificate(sigma, goal, team)
    logger.info(f"✅ lcd counterexample: {len(team)} rows, base {spec.base}")
    return team
