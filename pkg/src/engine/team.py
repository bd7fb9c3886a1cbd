"""
Team model

A team is a finite set of assignments over a fixed variable set, i.e. a
uni-relational table without duplicate rows. Rows are stored as value tuples
aligned with `variables`; values are opaque strings compared by exact equality.
"""

from typing import Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple

import pandas as pd
from loguru import logger

from schema.errors import DuplicateVariableInSequence, RaggedRow, UnknownVariable
from schema.models import check_varseq, validate_variable

Row = Tuple[str, ...]


class Team:
    """Immutable set of assignments.

    Two teams are equal when they have the same variable set and the same
    assignments, regardless of column order.
    """

    __slots__ = ("variables", "rows", "dropped", "_index")

    def __init__(self, variables: Sequence[str], rows: Iterable[Sequence[str]] = (), dropped: int = 0):
        variables = tuple(variables)
        for name in variables:
            validate_variable(name)
        if len(set(variables)) != len(variables):
            raise DuplicateVariableInSequence(variables)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "_index", {v: j for j, v in enumerate(variables)})
        object.__setattr__(self, "rows", frozenset(tuple(r) for r in rows))
        object.__setattr__(self, "dropped", dropped)

    def __setattr__(self, key, value):
        raise AttributeError("Team is immutable")

    # ---------- construction ----------

    @classmethod
    def from_rows(cls, variables: Sequence[str], rows: Iterable[Sequence[object]]) -> "Team":
        """Build a team from raw rows, stringifying values and dropping duplicates."""
        variables = tuple(variables)
        seen: Set[Row] = set()
        dropped = 0
        for line, raw in enumerate(rows, start=1):
            row = tuple(str(v) for v in raw)
            if len(row) != len(variables):
                raise RaggedRow(line, len(variables), len(row))
            if row in seen:
                dropped += 1
                continue
            seen.add(row)
        if dropped:
            logger.warning(f"Dropped {dropped} duplicate row(s); a team is a set of assignments")
        return cls(variables, seen, dropped=dropped)

    @classmethod
    def from_assignments(cls, variables: Sequence[str], assignments: Iterable[Dict[str, object]]) -> "Team":
        variables = tuple(variables)
        rows = []
        for line, assignment in enumerate(assignments, start=1):
            if set(assignment) != set(variables):
                raise RaggedRow(line, len(variables), len(assignment))
            rows.append([assignment[v] for v in variables])
        return cls.from_rows(variables, rows)

    @classmethod
    def from_frame(cls, df: pd.DataFrame) -> "Team":
        """从 DataFrame 构造；列名即变量名，所有值转为字符串。"""
        return cls.from_rows([str(c) for c in df.columns], df.astype(str).itertuples(index=False, name=None))

    @classmethod
    def empty(cls, variables: Sequence[str]) -> "Team":
        return cls(variables)

    # ---------- access ----------

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Team):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self) -> int:
        return hash(self._canonical())

    def __repr__(self) -> str:
        return f"Team(variables={list(self.variables)}, rows={len(self.rows)})"

    def _canonical(self) -> Tuple[FrozenSet[str], FrozenSet[FrozenSet[Tuple[str, str]]]]:
        # 与列顺序无关的规范形式
        return (
            frozenset(self.variables),
            frozenset(frozenset(zip(self.variables, row)) for row in self.rows),
        )

    def positions(self, seq: Sequence[str]) -> Tuple[int, ...]:
        missing = [v for v in seq if v not in self._index]
        if missing:
            raise UnknownVariable(missing, self.variables)
        return tuple(self._index[v] for v in seq)

    def sorted_rows(self) -> List[Row]:
        return sorted(self.rows)

    def column(self, name: str) -> List[str]:
        (j,) = self.positions((name,))
        return [row[j] for row in self.sorted_rows()]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.sorted_rows(), columns=list(self.variables), dtype=str)

    def project(self, seq: Sequence[str]) -> Set[Row]:
        return project(self, seq)


def project(team: Team, seq: Sequence[str]) -> Set[Row]:
    """T[z] = {s(z) | s ∈ T}."""
    seq = check_varseq(seq)
    idx = team.positions(seq)
    return {tuple(row[j] for j in idx) for row in team.rows}


def union(first: Team, *rest: Team) -> Team:
    """Set union of teams over the same variables (columns aligned to the first team)."""
    variables = first.variables
    rows: Set[Row] = set(first.rows)
    for team in rest:
        if set(team.variables) != set(variables):
            raise UnknownVariable(sorted(set(team.variables) ^ set(variables)), variables)
        idx = team.positions(variables)
        rows.update(tuple(row[j] for j in idx) for row in team.rows)
    return Team(variables, rows)
