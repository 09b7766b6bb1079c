"""Exact computations with group-graded algebras, Grassmann algebras and graded identities."""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import Element, GradedAlgebra, GradedMap, Subspace, multiply, validate
from .errors import AggregateError, GradealgError
from .grassmann import GrassmannElement, envelope, materialize
from .groups import Z2, FiniteAbelianGroup
from .steps import aggregate_step, set_step_logging, step

__all__ = [
    "__version__",
    "AggregateError",
    "Element",
    "FiniteAbelianGroup",
    "GradealgError",
    "GradedAlgebra",
    "GradedMap",
    "GrassmannElement",
    "Subspace",
    "Z2",
    "aggregate_step",
    "envelope",
    "materialize",
    "multiply",
    "set_step_logging",
    "step",
    "validate",
]
