"""
Jacobson radical through the trace form.

In characteristic 0 the radical of a finite-dimensional associative algebra is the kernel of
``(x, y) -> tr(L_{xy})`` where ``L`` is the left regular representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List
import logging

from .algebra import Element, GradedAlgebra, Subspace, multiply
from .errors import InvariantViolation
from .groups import GroupElement
from .linalg import ZERO, Matrix, kernel_basis

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Radical:
    space: Subspace
    components: Dict[GroupElement, Subspace]

    @property
    def dim(self) -> int:
        return self.space.dim

    def component_dim(self, g: GroupElement) -> int:
        part = self.components.get(g)
        return part.dim if part is not None else 0


def left_traces(algebra: GradedAlgebra) -> List[Fraction]:
    """tr(L_{b_k}) for every basis element."""
    traces = [ZERO] * algebra.dim
    for (k, i), prod in algebra.structure.items():
        coeff = prod.get(i)
        if coeff:
            traces[k] += coeff
    return traces


def trace_form(algebra: GradedAlgebra) -> Matrix:
    traces = left_traces(algebra)
    n = algebra.dim
    entries = [ZERO] * (n * n)
    for (i, j), prod in algebra.structure.items():
        entries[i * n + j] = sum((x * traces[k] for k, x in prod.items()), ZERO)
    return Matrix(n, n, tuple(entries))


def jacobson_radical(algebra: GradedAlgebra) -> Radical:
    form = trace_form(algebra)
    # x is radical iff sum_i x_i T(b_i, b_j) = 0 for every j
    kernel = kernel_basis(form.transpose())
    space = Subspace.span(algebra, [algebra.from_vector(v) for v in kernel])
    if not space.is_graded():
        raise InvariantViolation(f"the radical of {algebra.name} is not a graded subspace")
    components = {g: space.homogeneous_part(g) for g in algebra.group.elements()}
    logger.debug(
        "J(%s) has dim %d with components %s", algebra.name, space.dim, {g: c.dim for g, c in components.items()}
    )
    return Radical(space, components)


def nilpotency_index(element: Element) -> int:
    """Smallest m with element^m = 0, or 0 when the element is not nilpotent."""
    power = element
    for m in range(1, element.algebra.dim + 2):
        if not power:
            return m
        power = multiply(power, element)
    return 0


def is_two_sided_ideal(space: Subspace) -> bool:
    algebra = space.algebra
    sb = space.span_basis()
    for x in space.basis():
        for b in algebra.basis():
            if not sb.contains(multiply(b, x).coeffs) or not sb.contains(multiply(x, b).coeffs):
                return False
    return True
