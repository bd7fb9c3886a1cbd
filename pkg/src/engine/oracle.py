"""
Brute-force oracles used to cross-check the solver.

falsify_by_enumeration searches small teams directly; enumerate_derivations
closes Σ under the rules round by round. Neither is a decision procedure: both
only answer within their bounds.
"""

import string
from collections import defaultdict
from typing import Dict, Iterator, List, Optional, Tuple

from loguru import logger

from engine.counterexample import problem_variables, verify_certificate
from engine.derivation import DerivedFact, linearize
from engine.semantics import satisfies
from engine.team import Team
from schema.errors import BoundOutOfRange, ResourceBudgetExceeded
from schema.models import RULES, AssumptionSet, Atom, AtomKind, Derivation, Rule, VarSeq, make_atom

RECOMMENDED_MAX_ROWS = 6
RECOMMENDED_MAX_VALUES = 4


def value_token(k: int) -> str:
    """a, b, c, ... then v26, v27, ..."""
    return string.ascii_lowercase[k] if k < 26 else f"v{k}"


def _canonical_teams(width: int, rows: int, values: int) -> Iterator[List[Tuple[int, ...]]]:
    """Teams of exactly `rows` rows, one representative per value renaming.

    Rows are strictly increasing and the row-major value sequence introduces
    values in order 0, 1, 2, ... (a restricted growth string).
    """
    team: List[Tuple[int, ...]] = []

    def extend(prev: Optional[Tuple[int, ...]], top: int) -> Iterator[List[Tuple[int, ...]]]:
        if len(team) == rows:
            yield list(team)
            return
        for row, new_top in _rows_after(prev, width, values, top):
            team.append(row)
            yield from extend(row, new_top)
            team.pop()

    yield from extend(None, -1)


def _rows_after(prev: Optional[Tuple[int, ...]], width: int, values: int, top: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Rows lexicographically after `prev` whose values respect the growth bound `top`."""
    row: List[int] = []

    def fill(j: int, top: int, tight: bool) -> Iterator[Tuple[Tuple[int, ...], int]]:
        if j == width:
            if not tight:
                yield tuple(row), top
            return
        # tight: 目前与 prev 前缀相同，下一位不能更小
        low = prev[j] if (tight and prev is not None) else 0
        for v in range(low, min(top + 1, values - 1) + 1):
            row.append(v)
            yield from fill(j + 1, max(top, v), tight and prev is not None and v == prev[j])
            row.pop()

    yield from fill(0, top, prev is not None)


def falsify_by_enumeration(
    sigma: AssumptionSet,
    goal: Atom,
    max_rows: int,
    max_values: int,
    max_row_space: Optional[int] = None,
) -> Optional[Team]:
    """Smallest team (≤ max_rows rows, ≤ max_values values) satisfying Σ and falsifying `goal`, or None.

    Exhaustive up to renaming of values.
    """
    if max_rows < 0:
        raise BoundOutOfRange(max_rows, "a natural number of rows")
    if max_values < 1:
        raise BoundOutOfRange(max_values, "at least one value")
    if max_rows > RECOMMENDED_MAX_ROWS or max_values > RECOMMENDED_MAX_VALUES:
        logger.warning(f"Enumerating up to {max_rows} rows over {max_values} values; this may take long")

    variables = problem_variables(sigma, goal)
    width = len(variables)
    if max_row_space is not None and max_values ** width > max_row_space:
        raise ResourceBudgetExceeded(f"falsification row space ({max_values}^{width})", max_row_space)

    # 行数从小到大，找到的第一个即为最小反例
    checked = 0
    for rows in range(1, max_rows + 1):
        for candidate in _canonical_teams(width, rows, max_values):
            checked += 1
            team = Team(variables, [tuple(value_token(v) for v in row) for row in candidate])
            # 先查目标：大多数候选在这里被排除
            if satisfies(team, goal) or not all(satisfies(team, atom) for atom in sigma):
                continue
            logger.info(f"Falsifying team found after {checked} candidates ({rows} rows)")
            return team
    logger.info(f"No falsifying team within {max_rows} rows / {max_values} values ({checked} candidates)")
    return None


def falsify_and_verify(sigma: AssumptionSet, goal: Atom, max_rows: int, max_values: int, max_row_space: Optional[int] = None) -> Optional[Team]:
    """穷举后再走一遍与闭式构造相同的自检。"""
    team = falsify_by_enumeration(sigma, goal, max_rows, max_values, max_row_space)
    if team is not None:
        verify_certificate(sigma, goal, team)
    return team


# =====================================================
# 推导枚举 (Bounded derivation search)
# =====================================================

def _block_swaps(atom: Atom) -> Iterator[Tuple[VarSeq, VarSeq]]:
    n = atom.arity
    for a in range(n):
        for b in range(a + 1, n):
            yield (
                atom.lhs[:a] + atom.lhs[b:] + atom.lhs[a:b],
                atom.rhs[:a] + atom.rhs[b:] + atom.rhs[a:b],
            )


def enumerate_derivations(sigma: AssumptionSet, goal: Atom, max_steps: int) -> Optional[Derivation]:
    """Close Σ under the rules for up to `max_steps` rounds and return a derivation of `goal`, or None.

    Each round applies block swaps, prefix projections and transitivity to every
    known conclusion. Only the least bound per (lhs, rhs) pair is kept, and
    conclusions narrower than the goal or with a bound above it are dropped since
    no rule lowers a bound or widens an atom.
    """
    kind = goal.kind
    rules = RULES[kind]
    l, limit = goal.arity, goal.bound

    if kind == AtomKind.RATIO and goal.bound == 1:
        return linearize(DerivedFact(Rule.R6, goal))

    known: Dict[Tuple[VarSeq, VarSeq], DerivedFact] = {}

    def offer(fact: DerivedFact) -> bool:
        c = fact.conclusion
        if c.arity < l or c.bound > limit:
            return False
        key = (c.lhs, c.rhs)
        old = known.get(key)
        if old is not None and old.conclusion.bound <= c.bound:
            return False
        known[key] = fact
        return True

    def found() -> Optional[Derivation]:
        fact = known.get((goal.lhs, goal.rhs))
        if fact is None:
            return None
        if fact.conclusion.bound < goal.bound:
            fact = DerivedFact(rules.weaken, goal, (fact,))
        return linearize(fact)

    for idx, atom in enumerate(sigma):
        if atom.kind == kind:
            offer(DerivedFact(Rule.HYP, atom, sigma_index=idx))
    if goal.lhs == goal.rhs:
        offer(DerivedFact(rules.axiom, make_atom(kind, goal.lhs, goal.lhs, 0)))

    for _ in range(max_steps):
        result = found()
        if result is not None:
            return result
        frontier = list(known.values())
        changed = False
        for fact in frontier:
            c = fact.conclusion
            for lhs, rhs in _block_swaps(c):
                changed |= offer(DerivedFact(rules.perm, make_atom(kind, lhs, rhs, c.bound), (fact,)))
            for k in range(l, c.arity):
                changed |= offer(DerivedFact(rules.proj, make_atom(kind, c.lhs[:k], c.rhs[:k], c.bound), (fact,)))

        by_lhs: Dict[VarSeq, List[DerivedFact]] = defaultdict(list)
        for fact in frontier:
            by_lhs[fact.conclusion.lhs].append(fact)
        for first in frontier:
            for second in by_lhs.get(first.conclusion.rhs, ()):
                total = first.conclusion.bound + second.conclusion.bound
                if total > limit:
                    continue
                conclusion = make_atom(kind, first.conclusion.lhs, second.conclusion.rhs, total)
                changed |= offer(DerivedFact(rules.trans, conclusion, (first, second)))
        if not changed:
            break
    return found()
