"""
approxinc error hierarchy

Every error the library raises derives from ApproxIncError (itself a ValueError,
so callers that only know about ValueError keep working).
"""

from typing import Optional, Sequence


class ApproxIncError(ValueError):
    """Base class for all library errors."""


# ========== core-model ==========

class InvalidVariableName(ApproxIncError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Invalid variable name: {name!r}")


class UnknownVariable(ApproxIncError):
    def __init__(self, names: Sequence[str], domain: Sequence[str] = ()):
        self.names = tuple(names)
        self.domain = tuple(domain)
        super().__init__(f"Unknown variable(s) {', '.join(self.names)} (team has: {', '.join(self.domain) or '-'})")


class ArityMismatch(ApproxIncError):
    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        super().__init__(f"Arity mismatch: {left} vs {right}")


class DuplicateVariableInSequence(ApproxIncError):
    def __init__(self, seq: Sequence[str]):
        self.seq = tuple(seq)
        super().__init__(f"Variable repeated within sequence ({', '.join(self.seq)})")


class BoundOutOfRange(ApproxIncError):
    def __init__(self, bound, expected: str):
        self.bound = bound
        super().__init__(f"Bound {bound} out of range, expected {expected}")


class MixedAssumptionKinds(ApproxIncError):
    def __init__(self, message: str = "Assumption set mixes quantity and ratio atoms"):
        super().__init__(message)


# ========== io-cli ==========

class AtomSyntaxError(ApproxIncError):
    def __init__(self, text: str, position: int, expected: str):
        self.text = text
        self.position = position
        self.expected = expected
        super().__init__(f"Syntax error at position {position}: expected {expected} in {text!r}")


class RaggedRow(ApproxIncError):
    def __init__(self, line: int, expected: int, got: Optional[int] = None):
        self.line = line
        self.expected = expected
        self.got = got
        detail = f", got {got}" if got is not None else ""
        super().__init__(f"Row {line} has the wrong number of fields (expected {expected}{detail})")


class DuplicateHeader(ApproxIncError):
    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        super().__init__(f"Duplicate column(s) in header: {', '.join(self.names)}")


class EmptyHeader(ApproxIncError):
    def __init__(self, message: str = "Team input has an empty header"):
        super().__init__(message)


class UnreadableInput(ApproxIncError):
    """Input that is not a CSV/JSON team or assumption file at all."""

    def __init__(self, source: str, detail: str):
        self.source = source
        self.detail = detail
        super().__init__(f"Cannot read {source}: {detail}")


# ========== implication / counterexample ==========

class InvalidRuleInstance(ApproxIncError):
    def __init__(self, step_index: int, reason: str):
        self.step_index = step_index
        self.reason = reason
        super().__init__(f"Step {step_index}: {reason}")


class DerivableGoal(ApproxIncError):
    def __init__(self, goal: str, distance):
        self.goal = goal
        self.distance = distance
        super().__init__(f"{goal} is derivable (shortest weight {distance}); no counterexample exists")


class VariableCapExceeded(ApproxIncError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} variables exceed the construction cap of {cap}")


class ArityRestrictionViolated(ApproxIncError):
    def __init__(self, arity: int, goal_arity: int):
        self.arity = arity
        self.goal_arity = goal_arity
        super().__init__(f"Assumption of arity {arity} exceeds the goal arity {goal_arity}")


class NonUnaryAtoms(ApproxIncError):
    def __init__(self, message: str = "Ratio counterexamples need unary atoms only"):
        super().__init__(message)


class GoalBoundIsOne(ApproxIncError):
    def __init__(self):
        super().__init__("Goal bound 1 is always satisfied (R6); no counterexample exists")


class CertificateVerificationError(ApproxIncError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Counterexample failed self-verification: {reason}")


class ResourceBudgetExceeded(ApproxIncError):
    def __init__(self, what: str, budget: int):
        self.what = what
        self.budget = budget
        super().__init__(f"{what} exceeded the budget of {budget}")
