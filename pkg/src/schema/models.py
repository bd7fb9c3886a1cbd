from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from schema.errors import (
    ArityMismatch,
    BoundOutOfRange,
    DuplicateVariableInSequence,
    InvalidVariableName,
    MixedAssumptionKinds,
)

# Characters the atom grammar reserves; a variable name may contain none of them.
RESERVED_CHARS = frozenset("();,/")

VarSeq = Tuple[str, ...]
Weight = Union[int, Fraction]


def validate_variable(name: str) -> str:
    if not isinstance(name, str) or not name:
        raise InvalidVariableName(str(name))
    if any(ch.isspace() or ch in RESERVED_CHARS for ch in name):
        raise InvalidVariableName(name)
    return name


def check_varseq(seq: Sequence[str]) -> VarSeq:
    """Validate names and reject repetition inside one sequence."""
    seq = tuple(seq)
    for name in seq:
        validate_variable(name)
    if len(set(seq)) != len(seq):
        raise DuplicateVariableInSequence(seq)
    return seq


class AtomKind(str, Enum):
    QUANTITY = "q"
    RATIO = "r"


class QuantityAtom(BaseModel):
    """x ⊆_n y: at most n value tuples of x are missing from y."""
    model_config = ConfigDict(frozen=True)

    kind: Literal[AtomKind.QUANTITY] = AtomKind.QUANTITY
    lhs: VarSeq = Field(..., description="左侧变量序列 x")
    rhs: VarSeq = Field(..., description="右侧变量序列 y")
    bound: int = Field(..., description="允许缺失的值元组个数 n")

    @property
    def arity(self) -> int:
        return len(self.lhs)

    def __str__(self) -> str:
        return format_atom(self)


class RatioAtom(BaseModel):
    """x ⊆_p y: at most p·|T| value tuples of x are missing from y."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal[AtomKind.RATIO] = AtomKind.RATIO
    lhs: VarSeq = Field(..., description="左侧变量序列 x")
    rhs: VarSeq = Field(..., description="右侧变量序列 y")
    bound: Fraction = Field(..., description="相对团队大小的缺失比例 p")

    @field_validator("bound", mode="before")
    @classmethod
    def _coerce_fraction(cls, value: Any) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, float):
            raise ValueError("ratio bounds must be exact (int, str or Fraction), not float")
        try:
            return Fraction(value)
        except (TypeError, ZeroDivisionError) as e:
            raise ValueError(str(e)) from e

    @property
    def arity(self) -> int:
        return len(self.lhs)

    def __str__(self) -> str:
        return format_atom(self)


Atom = Union[QuantityAtom, RatioAtom]


def format_atom(atom: "Atom") -> str:
    """Canonical concrete syntax, e.g. `qinc(x1,x2; y1,y2; 2)` or `rinc(x; y; 1/4)`."""
    keyword = "qinc" if atom.kind == AtomKind.QUANTITY else "rinc"
    return f"{keyword}({','.join(atom.lhs)}; {','.join(atom.rhs)}; {atom.bound})"


def validate_atom(atom: Atom) -> Atom:
    """Enforce the side conditions: equal arity, no repetition, bound range."""
    check_varseq(atom.lhs)
    check_varseq(atom.rhs)
    if len(atom.lhs) != len(atom.rhs):
        raise ArityMismatch(len(atom.lhs), len(atom.rhs))
    if not atom.lhs:
        raise ArityMismatch(0, 0)
    if isinstance(atom, QuantityAtom):
        if isinstance(atom.bound, bool) or atom.bound < 0:
            raise BoundOutOfRange(atom.bound, "a natural number")
    elif not (0 <= atom.bound <= 1):
        raise BoundOutOfRange(atom.bound, "a rational in [0, 1]")
    return atom


def _build(model: type, lhs: Sequence[str], rhs: Sequence[str], bound: Any, expected: str) -> Atom:
    """构造原子；pydantic 的校验错误转换为命名错误。"""
    try:
        return model(lhs=tuple(lhs), rhs=tuple(rhs), bound=bound)
    except ValidationError as e:
        first = e.errors()[0]
        where = first["loc"][0] if first["loc"] else "bound"
        if where == "bound":
            raise BoundOutOfRange(bound, expected) from None
        # lhs/rhs: 非字符串的变量名
        seq = lhs if where == "lhs" else rhs
        bad = next((v for v in seq if not isinstance(v, str)), seq)
        raise InvalidVariableName(str(bad)) from None


def qinc(lhs: Sequence[str], rhs: Sequence[str], bound: int) -> QuantityAtom:
    return validate_atom(_build(QuantityAtom, lhs, rhs, bound, "a natural number"))


def rinc(lhs: Sequence[str], rhs: Sequence[str], bound: Union[int, str, Fraction]) -> RatioAtom:
    return validate_atom(_build(RatioAtom, lhs, rhs, bound, "an exact rational in [0, 1]"))


def make_atom(kind: AtomKind, lhs: Sequence[str], rhs: Sequence[str], bound: Weight) -> Atom:
    """Build an atom of the given kind without side-condition checks (used by rule applications)."""
    if kind == AtomKind.QUANTITY:
        return _build(QuantityAtom, lhs, rhs, int(bound), "a natural number")
    return _build(RatioAtom, lhs, rhs, Fraction(bound), "an exact rational in [0, 1]")


@dataclass(frozen=True)
class AssumptionSet:
    """Σ: a finite, homogeneous list of atoms.

    `provenance` and `unused` are only filled in by normalize_assumptions: for each
    atom, the Σ index it was projected from and the kept positions.
    """
    atoms: Tuple[Atom, ...] = ()
    kind: Optional[AtomKind] = None
    provenance: Tuple[Tuple[int, Tuple[int, ...]], ...] = ()
    unused: Tuple[int, ...] = ()

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        kinds = {a.kind for a in atoms}
        if len(kinds) > 1:
            raise MixedAssumptionKinds()
        if kinds:
            found = kinds.pop()
            if self.kind is not None and self.kind != found:
                raise MixedAssumptionKinds(f"Expected {self.kind.value}-atoms, found {found.value}-atoms")
            object.__setattr__(self, "kind", found)

    @classmethod
    def of(cls, atoms: Sequence[Atom], kind: Optional[AtomKind] = None) -> "AssumptionSet":
        for atom in atoms:
            validate_atom(atom)
        return cls(atoms=tuple(atoms), kind=kind)

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __getitem__(self, index: int) -> Atom:
        return self.atoms[index]

    def variables(self) -> List[str]:
        """Variables in order of first appearance."""
        seen: Dict[str, None] = {}
        for atom in self.atoms:
            for name in atom.lhs + atom.rhs:
                seen.setdefault(name, None)
        return list(seen)

    @property
    def max_arity(self) -> int:
        return max((a.arity for a in self.atoms), default=0)


# =====================================================
# 推导 (Derivations)
# =====================================================

class Rule(str, Enum):
    """Inference rules; HYP cites an atom of Σ."""
    HYP = "HYP"
    Q1 = "Q1"
    Q2 = "Q2"
    Q3 = "Q3"
    Q4 = "Q4"
    Q5 = "Q5"
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    R5 = "R5"
    R6 = "R6"


@dataclass(frozen=True)
class RuleFamily:
    axiom: Rule
    trans: Rule
    perm: Rule
    proj: Rule
    weaken: Rule
    top: Optional[Rule] = None


RULES = {
    AtomKind.QUANTITY: RuleFamily(Rule.Q1, Rule.Q2, Rule.Q3, Rule.Q4, Rule.Q5),
    AtomKind.RATIO: RuleFamily(Rule.R1, Rule.R2, Rule.R3, Rule.R4, Rule.R5, Rule.R6),
}


class DerivationStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    rule: Rule = Field(..., description="应用的规则")
    premises: Tuple[int, ...] = Field(default=(), description="前提步骤的下标")
    sigma_index: Optional[int] = Field(default=None, description="HYP 步引用的 Σ 下标")
    conclusion: Union[QuantityAtom, RatioAtom] = Field(..., description="结论原子")


class Derivation(BaseModel):
    model_config = ConfigDict(frozen=True)

    steps: Tuple[DerivationStep, ...] = Field(default=(), description="有序的规则应用列表")

    @property
    def conclusion(self) -> Optional[Atom]:
        return self.steps[-1].conclusion if self.steps else None

    def __len__(self) -> int:
        return len(self.steps)

    def rules_used(self) -> List[Rule]:
        return [s.rule for s in self.steps]


# =====================================================
# 判定结果 (Verdicts)
# =====================================================

class VerdictKind(str, Enum):
    IMPLIED = "IMPLIED"
    NOT_IMPLIED = "NOT_IMPLIED"
    UNKNOWN = "UNKNOWN"


class Verdict(BaseModel):
    """Outcome of an implication query."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    outcome: VerdictKind = Field(..., description="IMPLIED / NOT_IMPLIED / UNKNOWN")
    goal: Union[QuantityAtom, RatioAtom] = Field(..., description="查询的目标原子")
    derivation: Optional[Derivation] = Field(default=None, description="IMPLIED 时的推导")
    certificate: Optional[Any] = Field(default=None, description="NOT_IMPLIED 时的反例团队 (Team)")
    reason: Optional[str] = Field(default=None, description="UNKNOWN 的原因或附加说明")
    distance: Optional[Weight] = Field(default=None, description="最短路径权重，不可达为 None")
    unused: Tuple[int, ...] = Field(default=(), description="低于目标元数、未参与推理的 Σ 下标")
    strategy: Optional[str] = Field(default=None, description="生成反例所用的构造")

    @property
    def exit_code(self) -> int:
        return {VerdictKind.IMPLIED: 0, VerdictKind.NOT_IMPLIED: 1, VerdictKind.UNKNOWN: 2}[self.outcome]

    @classmethod
    def implied(cls, goal: Atom, derivation: Derivation, **kwargs) -> "Verdict":
        return cls(outcome=VerdictKind.IMPLIED, goal=goal, derivation=derivation, **kwargs)

    @classmethod
    def not_implied(cls, goal: Atom, certificate: Any, **kwargs) -> "Verdict":
        return cls(outcome=VerdictKind.NOT_IMPLIED, goal=goal, certificate=certificate, **kwargs)

    @classmethod
    def unknown(cls, goal: Atom, reason: str, **kwargs) -> "Verdict":
        return cls(outcome=VerdictKind.UNKNOWN, goal=goal, reason=reason, **kwargs)
