from __future__ import annotations

from typing import Any, List, Optional, Sequence, Tuple


class GradealgError(Exception):
    """Base class for every error raised by gradealg."""


class DimensionMismatch(GradealgError):
    pass


class NonSquare(GradealgError):
    def __init__(self, rows: int, cols: int):
        self.rows = rows
        self.cols = cols
        super().__init__(f"determinant needs a square matrix, got {rows}x{cols}")


class AlgebraMismatch(GradealgError):
    pass


class GroupMismatch(GradealgError):
    pass


class NotTriviallyGraded(GradealgError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"basis element {label!r} is not of degree 0")


class CocycleLawViolated(GradealgError):
    def __init__(self, triple: Tuple[Any, Any, Any]):
        self.triple = triple
        g, h, k = triple
        super().__init__(f"2-cocycle law fails at (g, h, k) = ({g}, {h}, {k})")


class BadParams(GradealgError):
    pass


class TooLarge(GradealgError):
    def __init__(self, what: str, value: int, limit: int):
        self.value = value
        self.limit = limit
        super().__init__(f"{what} = {value} exceeds the limit {limit}")


class SizeMismatch(GradealgError):
    pass


class NotBetaCommutative(GradealgError):
    """Two homogeneous basis elements do not commute up to a degree-only scalar."""

    def __init__(self, pair: Tuple[str, str], reason: str):
        self.pair = pair
        self.reason = reason
        super().__init__(f"not beta-commutative at ({pair[0]}, {pair[1]}): {reason}")


class UndeterminedBicharacter(GradealgError):
    def __init__(self, pairs: Sequence[Tuple[Any, Any]]):
        self.pairs = list(pairs)
        shown = ", ".join(f"({g}, {h})" for g, h in self.pairs)
        super().__init__(f"beta is unconstrained at {shown}: all products between the components vanish")


class IrrationalBicharacter(GradealgError):
    pass


class DegreeMismatch(GradealgError):
    pass


class SearchBudgetExceeded(GradealgError):
    def __init__(self, needed: int, bound: int):
        self.needed = needed
        self.bound = bound
        super().__init__(f"search needs {needed} evaluations, budget is {bound}")


class MultilinearityError(GradealgError):
    pass


class NoWitness(GradealgError):
    def __init__(self, degrees: Sequence[Any]):
        self.degrees = list(degrees)
        super().__init__(f"no homogeneous basis tuple of degrees {self.degrees} has a nonzero product")


class IndependenceFailure(GradealgError):
    def __init__(self, rank: int, expected: int):
        self.rank = rank
        self.expected = expected
        super().__init__(f"monomials in the witness generators have rank {rank}, expected {expected}")


class PreconditionViolated(GradealgError):
    pass


class NotHomogeneous(GradealgError):
    pass


class GalgSyntaxError(GradealgError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class DuplicateBasisLabel(GradealgError):
    def __init__(self, label: str, line: Optional[int] = None):
        self.label = label
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}duplicate basis label {label!r}")


class ValidationError(GradealgError):
    def __init__(self, message: str, witness: Optional[Tuple[str, ...]] = None, line: Optional[int] = None):
        self.witness = witness
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class UsageError(GradealgError):
    pass


class InvariantViolation(GradealgError):
    pass


class AggregateError(GradealgError):
    def __init__(self, title: str, exceptions: Sequence[BaseException]):
        self.title = title
        self.exceptions: List[BaseException] = list(exceptions)
        summary = ", ".join(f"{type(e).__name__}: {e}" for e in self.exceptions)
        super().__init__(f"{len(self.exceptions)} exception(s) occurred during '{title}': {summary}")
