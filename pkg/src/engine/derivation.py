"""
Derivations: extraction from graph paths and mechanical replay.

A derivation is a list of steps; HYP cites an atom of Σ, every other step
applies one rule to earlier steps. Extraction emits, per edge of the path,
HYP, the block swaps (Q3/R3) that bring the used positions into the edge's
order, a projection (Q4/R4) when the atom was wider than the goal, then a
left-to-right transitivity chain (Q2/R2) and at most one trailing weakening
(Q5/R5).
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from engine.graph import Edge
from schema.errors import ApproxIncError, InvalidRuleInstance
from schema.models import (
    RULES,
    AssumptionSet,
    Atom,
    AtomKind,
    Derivation,
    DerivationStep,
    Rule,
    format_atom,
    make_atom,
    validate_atom,
)


@dataclass(frozen=True)
class DerivedFact:
    """A conclusion together with the tree of rule applications that produced it."""
    rule: Rule
    conclusion: Atom
    premises: Tuple["DerivedFact", ...] = ()
    sigma_index: Optional[int] = None


def linearize(fact: DerivedFact) -> Derivation:
    """Flatten a fact tree into steps, sharing identical subtrees."""
    steps: List[DerivationStep] = []
    index: Dict[int, int] = {}

    def visit(node: DerivedFact) -> int:
        key = id(node)
        if key in index:
            return index[key]
        premises = tuple(visit(p) for p in node.premises)
        steps.append(DerivationStep(rule=node.rule, premises=premises, sigma_index=node.sigma_index, conclusion=node.conclusion))
        index[key] = len(steps) - 1
        return index[key]

    visit(fact)
    return Derivation(steps=tuple(steps))


class _Builder:
    def __init__(self):
        self.steps: List[DerivationStep] = []

    def add(self, rule: Rule, conclusion: Atom, premises: Sequence[int] = (), sigma_index: Optional[int] = None) -> int:
        self.steps.append(DerivationStep(rule=rule, premises=tuple(premises), sigma_index=sigma_index, conclusion=conclusion))
        return len(self.steps) - 1


def _select_order(builder: _Builder, start: int, atom: Atom, order: Sequence[int], kind: AtomKind) -> Tuple[int, Atom]:
    """Block swaps moving positions `order` of `atom` to the front, in that order.

    Each swap is cur = X Y Z → X Z Y with X the already placed prefix and Z
    starting at the next wanted position.
    """
    rules = RULES[kind]
    cur = list(range(atom.arity))
    step, current = start, atom
    for p, want in enumerate(order):
        j = cur.index(want)
        if j == p:
            continue
        cur = cur[:p] + cur[j:] + cur[p:j]
        current = make_atom(kind, [atom.lhs[c] for c in cur], [atom.rhs[c] for c in cur], atom.bound)
        step = builder.add(rules.perm, current, (step,))
    if len(order) < atom.arity:
        k = len(order)
        current = make_atom(kind, current.lhs[:k], current.rhs[:k], atom.bound)
        step = builder.add(rules.proj, current, (step,))
    return step, current


def derivation_from_path(sigma: AssumptionSet, path: Sequence[Edge], goal: Atom) -> Derivation:
    """Turn a lightest path x → y into a derivation of `goal` (whose bound covers the path weight)."""
    kind = goal.kind
    rules = RULES[kind]
    builder = _Builder()
    used: Dict[Tuple[int, Tuple[int, ...]], Tuple[int, Atom]] = {}

    # 每条边：HYP -> (Q4 投影) -> (Q3 置换)，相同的 (假设, 顺序) 只推一次
    links: List[Tuple[int, Atom]] = []
    for edge in path:
        order = tuple(edge.positions[p] for p in edge.permutation)
        key = (edge.sigma_index, order)
        if key not in used:
            source_atom = sigma[edge.sigma_index]
            hyp = builder.add(Rule.HYP, source_atom, sigma_index=edge.sigma_index)
            used[key] = _select_order(builder, hyp, source_atom, order, kind)
        links.append(used[key])

    # 空路径即 x = y，用自反公理
    if not links:
        acc_step = builder.add(rules.axiom, make_atom(kind, goal.lhs, goal.lhs, 0))
        acc = builder.steps[acc_step].conclusion
    else:
        acc_step, acc = links[0]
        for step, atom in links[1:]:
            # 传递：权重相加
            acc = make_atom(kind, acc.lhs, atom.rhs, acc.bound + atom.bound)
            acc_step = builder.add(rules.trans, acc, (acc_step, step))

    if acc.bound < goal.bound:
        builder.add(rules.weaken, make_atom(kind, acc.lhs, acc.rhs, goal.bound), (acc_step,))
    return Derivation(steps=tuple(builder.steps))


def top_derivation(goal: Atom) -> Derivation:
    """x ⊆_1 y in one step (R6)."""
    return Derivation(steps=(DerivationStep(rule=Rule.R6, conclusion=make_atom(AtomKind.RATIO, goal.lhs, goal.rhs, 1)),))


# =====================================================
# 回放校验 (Replay)
# =====================================================

def _is_block_swap(premise: Atom, conclusion: Atom) -> bool:
    n = premise.arity
    if conclusion.arity != n:
        return False
    for a in range(n + 1):
        for b in range(a, n + 1):
            if (
                conclusion.lhs == premise.lhs[:a] + premise.lhs[b:] + premise.lhs[a:b]
                and conclusion.rhs == premise.rhs[:a] + premise.rhs[b:] + premise.rhs[a:b]
            ):
                return True
    return False


def _check_step(sigma: AssumptionSet, steps: Sequence[DerivationStep], i: int) -> None:
    """校验第 i 步是否为合法的规则实例，失败时抛出 InvalidRuleInstance。"""
    step = steps[i]
    c = step.conclusion

    def fail(reason: str):
        raise InvalidRuleInstance(i, reason)

    for p in step.premises:
        if not 0 <= p < i:
            fail(f"premise {p} is not an earlier step")
    if sigma.kind is not None and c.kind != sigma.kind:
        fail(f"{c.kind.value}-atom in a derivation from {sigma.kind.value}-assumptions")
    try:
        validate_atom(c)
    except ApproxIncError as e:
        fail(f"conclusion is not a valid atom: {e}")

    if step.rule == Rule.HYP:
        if step.premises or step.sigma_index is None or not 0 <= step.sigma_index < len(sigma):
            fail("HYP must cite an assumption index and have no premises")
        if sigma[step.sigma_index] != c:
            fail(f"HYP conclusion differs from assumption {step.sigma_index}")
        return

    family = RULES[c.kind]
    if step.rule not in vars(family).values():
        fail(f"{step.rule.value} does not apply to {c.kind.value}-atoms")
    prem = [steps[p].conclusion for p in step.premises]
    if any(p.kind != c.kind for p in prem):
        fail("premises and conclusion are of different kinds")

    def arity(k: int):
        if len(prem) != k:
            fail(f"{step.rule.value} takes {k} premise(s), got {len(prem)}")

    if step.rule == family.axiom:
        arity(0)
        if c.lhs != c.rhs or c.bound != 0:
            fail(f"{step.rule.value} concludes x ⊆_0 x only")
    elif step.rule == family.top:
        arity(0)
        if c.bound != 1:
            fail("R6 concludes x ⊆_1 y only")
    elif step.rule == family.trans:
        arity(2)
        first, second = prem
        if first.rhs != second.lhs:
            fail("middle sequences do not match")
        if c.lhs != first.lhs or c.rhs != second.rhs:
            fail("conclusion does not join the outer sequences")
        if c.bound != first.bound + second.bound:
            fail(f"bound must be {first.bound + second.bound}")
    elif step.rule == family.perm:
        arity(1)
        if c.bound != prem[0].bound or not _is_block_swap(prem[0], c):
            fail("not a block swap xyz ⊆ uvw → xzy ⊆ uwv")
    elif step.rule == family.proj:
        arity(1)
        k = c.arity
        if k < 1 or k > prem[0].arity or c.lhs != prem[0].lhs[:k] or c.rhs != prem[0].rhs[:k]:
            fail("not a prefix projection")
        if c.bound != prem[0].bound:
            fail("projection keeps the bound")
    elif step.rule == family.weaken:
        arity(1)
        if c.lhs != prem[0].lhs or c.rhs != prem[0].rhs:
            fail("weakening keeps both sequences")
        if c.bound < prem[0].bound:
            fail(f"weakening needs a bound ≥ {prem[0].bound}")


def replay_derivation(sigma: AssumptionSet, derivation: Derivation, goal: Optional[Atom] = None) -> None:
    """Check every step; raises InvalidRuleInstance at the first bad one.

    When `goal` is given the last conclusion must equal it.
    """
    steps = derivation.steps
    for i in range(len(steps)):
        _check_step(sigma, steps, i)
    if goal is not None:
        if not steps:
            raise InvalidRuleInstance(0, "empty derivation")
        if steps[-1].conclusion != goal:
            raise InvalidRuleInstance(len(steps) - 1, f"concludes {format_atom(steps[-1].conclusion)}, not {format_atom(goal)}")
