"""
Model checking of approximate inclusion atoms on a team.

All comparisons are exact: ratio satisfaction is decided by integer
cross-multiplication, never by division.
"""

from fractions import Fraction
from typing import Sequence

from engine.team import Team, project
from schema.errors import ArityMismatch
from schema.models import Atom, AtomKind, QuantityAtom, RatioAtom, check_varseq


def deficiency(team: Team, lhs: Sequence[str], rhs: Sequence[str]) -> int:
    """|T[x] \\ T[y]|: how many value tuples of lhs are missing from rhs."""
    if len(lhs) != len(rhs):
        raise ArityMismatch(len(lhs), len(rhs))
    return len(project(team, lhs) - project(team, rhs))


def satisfies_quantity(team: Team, atom: QuantityAtom) -> bool:
    return deficiency(team, atom.lhs, atom.rhs) <= atom.bound


def satisfies_ratio(team: Team, atom: RatioAtom) -> bool:
    bound = atom.bound
    # |T[x] \ T[y]| ≤ p·|T|，交叉相乘
    return deficiency(team, atom.lhs, atom.rhs) * bound.denominator <= bound.numerator * len(team)


def satisfies(team: Team, atom: Atom) -> bool:
    """按原子类型分派。"""
    if atom.kind == AtomKind.QUANTITY:
        return satisfies_quantity(team, atom)
    return satisfies_ratio(team, atom)


def satisfies_inclusion(team: Team, lhs: Sequence[str], rhs: Sequence[str]) -> bool:
    """Plain inclusion read row by row: every s has some s' with s(lhs) = s'(rhs)."""
    lhs, rhs = check_varseq(lhs), check_varseq(rhs)
    if len(lhs) != len(rhs):
        raise ArityMismatch(len(lhs), len(rhs))
    left, right = team.positions(lhs), team.positions(rhs)
    rows = team.sorted_rows()
    # 不经过投影，逐行寻找见证行 s'
    for s in rows:
        if not any(all(s[a] == t[b] for a, b in zip(left, right)) for t in rows):
            return False
    return True


def minimal_quantity(team: Team, lhs: Sequence[str], rhs: Sequence[str]) -> int:
    """Smallest n with T ⊨ lhs ⊆_n rhs."""
    return deficiency(team, lhs, rhs)


def minimal_ratio(team: Team, lhs: Sequence[str], rhs: Sequence[str]) -> Fraction:
    """Smallest p with T ⊨ lhs ⊆_p rhs; the empty team satisfies every p, so 0."""
    missing = deficiency(team, lhs, rhs)
    if not team.rows:
        return Fraction(0)
    return Fraction(missing, len(team))
