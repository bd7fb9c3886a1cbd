"""
Dependency graph

Nodes are duplicate-free l-tuples of variables; an atom u ⊆_k v of arity l gives
an edge σ(u) → σ(v) of weight k for every position permutation σ. Edges are
expanded lazily: atoms are indexed by the variable set of their left side, and
for a node w the permutation is fixed by w itself, so each atom contributes at
most one edge per node.

The set-level view (nodes are variable sets, edges set(u) → set(v)) is what the
diagonal counterexample construction measures distances on.
"""

import heapq
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from loguru import logger

from schema.errors import ArityMismatch, ResourceBudgetExceeded
from schema.models import AssumptionSet, VarSeq, Weight, check_varseq, make_atom

SetNode = Tuple[str, ...]   # variable set, stored sorted


@dataclass(frozen=True)
class Edge:
    source: VarSeq
    target: VarSeq
    weight: Weight
    atom_index: int                 # index into Σ′
    permutation: Tuple[int, ...]    # source[j] = Σ′[atom_index].lhs[permutation[j]]
    sigma_index: int                # index into Σ
    positions: Tuple[int, ...]      # positions of Σ[sigma_index] kept by the projection


def normalize_assumptions(sigma: AssumptionSet, l: int) -> AssumptionSet:
    """Σ′: project every atom of arity ≥ l onto each size-l position subset.

    Positions are kept in order and the same subset is taken on both sides.
    Atoms of arity below l cannot contribute to an arity-l conclusion; their
    indices are returned in `unused`.
    """
    atoms, provenance, unused = [], [], []
    for idx, atom in enumerate(sigma):
        if atom.arity < l:
            unused.append(idx)
            continue
        for positions in combinations(range(atom.arity), l):
            atoms.append(make_atom(
                atom.kind,
                [atom.lhs[p] for p in positions],
                [atom.rhs[p] for p in positions],
                atom.bound,
            ))
            provenance.append((idx, positions))
    if unused:
        logger.debug(f"{len(unused)} assumption(s) below arity {l} left out of the graph: {unused}")
    return AssumptionSet(
        atoms=tuple(atoms),
        kind=sigma.kind,
        provenance=tuple(provenance),
        unused=tuple(unused),
    )


class DependencyGraph:
    """Permutation-closed graph over l-tuples, built from an arity-l Σ′."""

    def __init__(self, sigma_prime: AssumptionSet, arity: int, variables: Sequence[str] = ()):
        self.sigma_prime = sigma_prime
        self.arity = arity
        names = dict.fromkeys(variables)
        names.update(dict.fromkeys(sigma_prime.variables()))
        self.variables: Tuple[str, ...] = tuple(names)

        self._by_lhs: Dict[frozenset, List[int]] = defaultdict(list)
        self._by_rhs: Dict[frozenset, List[int]] = defaultdict(list)
        for idx, atom in enumerate(sigma_prime):
            if atom.arity != arity:
                raise ArityMismatch(atom.arity, arity)
            self._by_lhs[frozenset(atom.lhs)].append(idx)
            self._by_rhs[frozenset(atom.rhs)].append(idx)

    def _provenance(self, idx: int) -> Tuple[int, Tuple[int, ...]]:
        if self.sigma_prime.provenance:
            return self.sigma_prime.provenance[idx]
        return idx, tuple(range(self.arity))

    def _edge(self, idx: int, perm: Tuple[int, ...]) -> Edge:
        atom = self.sigma_prime[idx]
        sigma_index, positions = self._provenance(idx)
        return Edge(
            source=tuple(atom.lhs[p] for p in perm),
            target=tuple(atom.rhs[p] for p in perm),
            weight=atom.bound,
            atom_index=idx,
            permutation=perm,
            sigma_index=sigma_index,
            positions=positions,
        )

    def successors(self, node: VarSeq) -> Iterator[Edge]:
        for idx in self._by_lhs.get(frozenset(node), ()):
            where = {v: j for j, v in enumerate(self.sigma_prime[idx].lhs)}
            yield self._edge(idx, tuple(where[v] for v in node))

    def predecessors(self, node: VarSeq) -> Iterator[Edge]:
        for idx in self._by_rhs.get(frozenset(node), ()):
            where = {v: j for j, v in enumerate(self.sigma_prime[idx].rhs)}
            yield self._edge(idx, tuple(where[v] for v in node))

    def edges(self) -> List[Edge]:
        """Materialize every edge; only sensible for small graphs."""
        return [self._edge(idx, perm) for idx in range(len(self.sigma_prime)) for perm in permutations(range(self.arity))]

    # ---------- set-level view ----------

    def set_successors(self, node: SetNode) -> Iterator[Tuple[SetNode, Weight, int]]:
        for idx in self._by_lhs.get(frozenset(node), ()):
            atom = self.sigma_prime[idx]
            yield tuple(sorted(atom.rhs)), atom.bound, idx

    def set_predecessors(self, node: SetNode) -> Iterator[Tuple[SetNode, Weight, int]]:
        for idx in self._by_rhs.get(frozenset(node), ()):
            atom = self.sigma_prime[idx]
            yield tuple(sorted(atom.lhs)), atom.bound, idx


def build_graph(sigma_prime: AssumptionSet, l: int, variables: Sequence[str] = ()) -> DependencyGraph:
    graph = DependencyGraph(sigma_prime, l, variables)
    logger.debug(f"Dependency graph: arity {l}, {len(graph.variables)} variables, {len(sigma_prime)} atoms")
    return graph


# =====================================================
# 最短路径 (Dijkstra)
# =====================================================

Successors = Callable[[Hashable], Iterable[Tuple[Hashable, Weight, object]]]


def dijkstra(
    source: Hashable,
    successors: Successors,
    target: Optional[Hashable] = None,
    horizon: Optional[Weight] = None,
    budget: Optional[int] = None,
) -> Tuple[Dict[Hashable, Weight], Dict[Hashable, Tuple[Hashable, object]]]:
    """Single-source shortest paths with non-negative weights.

    Stops early at `target` or once the frontier exceeds `horizon`. Ties are
    broken by the natural order of the nodes, which makes the returned paths
    deterministic. Returns (distance, parent) over settled nodes only.
    """
    best: Dict[Hashable, Weight] = {source: 0}
    parent: Dict[Hashable, Tuple[Hashable, object]] = {}
    settled: Dict[Hashable, Weight] = {}
    heap = [(0, source)]
    while heap:
        dist, node = heapq.heappop(heap)
        # 堆中的过期条目
        if node in settled:
            continue
        if horizon is not None and dist > horizon:
            break
        settled[node] = dist
        # 预算按已定节点计数
        if budget is not None and len(settled) > budget:
            raise ResourceBudgetExceeded("shortest-path search (expanded nodes)", budget)
        if node == target:
            break
        for nxt, weight, label in successors(node):
            if nxt in settled:
                continue
            nd = dist + weight
            old = best.get(nxt)
            if old is None or nd < old:
                best[nxt] = nd
                parent[nxt] = (node, label)
                heapq.heappush(heap, (nd, nxt))
    return settled, {n: parent[n] for n in settled if n in parent}


def _tuple_successors(graph: DependencyGraph) -> Successors:
    return lambda node: ((e.target, e.weight, e) for e in graph.successors(node))


def shortest_path(
    graph: DependencyGraph,
    source: Sequence[str],
    target: Sequence[str],
    budget: Optional[int] = None,
) -> Optional[Tuple[Weight, List[Edge]]]:
    """Lightest path source → target as (weight, edges), or None when unreachable."""
    source, target = check_varseq(source), check_varseq(target)
    if len(source) != graph.arity or len(target) != graph.arity:
        raise ArityMismatch(len(source), graph.arity)
    dist, parent = dijkstra(source, _tuple_successors(graph), target=target, budget=budget)
    if target not in dist:
        return None
    # 沿 parent 回溯出边序列
    path: List[Edge] = []
    node = target
    while node != source:
        node, edge = parent[node]
        path.append(edge)
    path.reverse()
    return dist[target], path


def shortest_weight(
    graph: DependencyGraph,
    source: Sequence[str],
    target: Sequence[str],
    budget: Optional[int] = None,
) -> Optional[Weight]:
    """Minimum total weight over paths source → target; 0 when they coincide, None when unreachable."""
    found = shortest_path(graph, source, target, budget)
    return found[0] if found else None


def distances_from(
    graph: DependencyGraph,
    source: Sequence[str],
    horizon: Optional[Weight] = None,
    budget: Optional[int] = None,
) -> Dict[VarSeq, Weight]:
    """Distance table from `source`; nodes farther than `horizon` are left out."""
    dist, _ = dijkstra(check_varseq(source), _tuple_successors(graph), horizon=horizon, budget=budget)
    return dist


def set_distances_from(
    graph: DependencyGraph,
    source: Sequence[str],
    horizon: Optional[Weight] = None,
    budget: Optional[int] = None,
) -> Dict[SetNode, Weight]:
    """Distances between variable sets: the least tuple distance over all orderings of the target."""
    dist, _ = dijkstra(tuple(sorted(source)), graph.set_successors, horizon=horizon, budget=budget)
    return dist


def co_reachable(
    targets: Iterable[Hashable],
    predecessors: Callable[[Hashable], Iterable[Tuple[Hashable, Weight, object]]],
    budget: Optional[int] = None,
) -> Set[Hashable]:
    """Every node with a path into `targets` (targets included)."""
    seen = set(targets)
    stack = list(seen)
    while stack:
        node = stack.pop()
        for prev, _, _ in predecessors(node):
            if prev not in seen:
                seen.add(prev)
                if budget is not None and len(seen) > budget:
                    raise ResourceBudgetExceeded("reverse reachability (visited nodes)", budget)
                stack.append(prev)
    return seen


def tuple_predecessors(graph: DependencyGraph) -> Callable[[VarSeq], Iterable[Tuple[VarSeq, Weight, Edge]]]:
    return lambda node: ((e.source, e.weight, e) for e in graph.predecessors(node))
