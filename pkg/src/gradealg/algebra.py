"""
Structure-constant graded algebras, their elements, subspaces and graded maps.

An algebra is stored as a sparse table ``(i, j) -> {k: c}`` meaning ``b_i b_j = sum_k c b_k``; a
missing key is a zero product. Basis labels are only used at the edges (files, reports); all
computation is on basis indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union
import logging

from .errors import AlgebraMismatch, DimensionMismatch, DuplicateBasisLabel, GroupMismatch, NotHomogeneous
from .groups import FiniteAbelianGroup, GroupElement, format_element
from .linalg import ONE, ZERO, Matrix, SparseVector, SpanBasis, Vector, format_scalar, to_dense

logger = logging.getLogger(__name__)

Structure = Dict[Tuple[int, int], Dict[int, Fraction]]
Coefficient = Union[int, Fraction]


def _clean(coeffs: Mapping[int, Coefficient]) -> Dict[int, Fraction]:
    return {i: Fraction(c) for i, c in sorted(coeffs.items()) if c != 0}


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    group: FiniteAbelianGroup
    basis_labels: Tuple[str, ...]
    grades: Tuple[GroupElement, ...]
    structure: Structure
    unit: Dict[int, Fraction]
    name: str = "A"
    _index: Dict[str, int] = field(init=False, repr=False)
    _by_degree: Dict[GroupElement, Tuple[int, ...]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        index: Dict[str, int] = {}
        for i, label in enumerate(self.basis_labels):
            if label in index:
                raise DuplicateBasisLabel(label)
            index[label] = i
        if len(self.grades) != len(self.basis_labels):
            raise DimensionMismatch(f"{len(self.grades)} grades for {len(self.basis_labels)} basis elements")
        grades = tuple(self.group.element(g) for g in self.grades)
        structure: Structure = {}
        for (i, j), prod in sorted(self.structure.items()):
            cleaned = _clean(prod)
            if cleaned:
                structure[(i, j)] = cleaned
        by_degree: Dict[GroupElement, List[int]] = {g: [] for g in self.group.elements()}
        for i, g in enumerate(grades):
            by_degree[g].append(i)
        object.__setattr__(self, "grades", grades)
        object.__setattr__(self, "structure", structure)
        object.__setattr__(self, "unit", _clean(self.unit))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_by_degree", {g: tuple(ix) for g, ix in by_degree.items()})

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, GradedAlgebra):
            return NotImplemented
        return (
            self.group == other.group
            and self.basis_labels == other.basis_labels
            and self.grades == other.grades
            and self.structure == other.structure
            and self.unit == other.unit
        )

    def __hash__(self) -> int:
        return hash((self.group, self.basis_labels, self.grades))

    def __repr__(self) -> str:
        return f"GradedAlgebra({self.name!r}, dim={self.dim}, group={self.group})"

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not a basis label of {self.name}") from None

    def indices_of_degree(self, g: GroupElement) -> Tuple[int, ...]:
        return self._by_degree.get(self.group.element(g), ())

    def basis_product(self, i: int, j: int) -> Dict[int, Fraction]:
        return self.structure.get((i, j), {})

    def element(self, coeffs: Mapping[int, Coefficient]) -> "Element":
        return Element(self, _clean(coeffs))

    def element_from_labels(self, coeffs: Mapping[str, Coefficient]) -> "Element":
        return self.element({self.index_of(label): c for label, c in coeffs.items()})

    def basis_element(self, i: int) -> "Element":
        return Element(self, {i: ONE})

    def basis(self) -> List["Element"]:
        return [self.basis_element(i) for i in range(self.dim)]

    def one(self) -> "Element":
        return Element(self, dict(self.unit))

    def zero(self) -> "Element":
        return Element(self, {})

    def from_vector(self, vector: Union[Sequence[Coefficient], SparseVector]) -> "Element":
        if isinstance(vector, dict):
            return self.element(vector)
        if len(vector) != self.dim:
            raise DimensionMismatch(f"vector of length {len(vector)} for an algebra of dim {self.dim}")
        return self.element(dict(enumerate(vector)))

    def component_dims(self) -> Dict[GroupElement, int]:
        return {g: len(ix) for g, ix in self._by_degree.items()}

    def renamed(self, name: str) -> "GradedAlgebra":
        return GradedAlgebra(self.group, self.basis_labels, self.grades, self.structure, self.unit, name)


@dataclass(frozen=True, eq=False)
class Element:
    algebra: GradedAlgebra
    coeffs: Dict[int, Fraction]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return (self.algebra is other.algebra or self.algebra == other.algebra) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _check(self, other: "Element") -> None:
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise AlgebraMismatch(f"elements of {self.algebra.name} and {other.algebra.name} cannot be combined")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.coeffs)
        for i, x in other.coeffs.items():
            value = out.get(i, ZERO) + x
            if value:
                out[i] = value
            else:
                out.pop(i, None)
        return Element(self.algebra, dict(sorted(out.items())))

    def __neg__(self) -> "Element":
        return Element(self.algebra, {i: -x for i, x in self.coeffs.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scaled(self, factor: Coefficient) -> "Element":
        if factor == 0:
            return self.algebra.zero()
        f = Fraction(factor)
        return Element(self.algebra, {i: x * f for i, x in self.coeffs.items()})

    def __mul__(self, other: Union["Element", Coefficient]) -> "Element":
        if isinstance(other, Element):
            return multiply(self, other)
        return self.scaled(other)

    def __rmul__(self, other: Coefficient) -> "Element":
        return self.scaled(other)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> List[GroupElement]:
        return sorted({self.algebra.grades[i] for i in self.coeffs})

    def degree(self) -> Optional[GroupElement]:
        """The degree of a nonzero homogeneous element, None otherwise."""
        degrees = self.degrees()
        return degrees[0] if len(degrees) == 1 else None

    def is_homogeneous(self, g: Optional[GroupElement] = None) -> bool:
        degrees = self.degrees()
        if not degrees:
            return True
        if len(degrees) > 1:
            return False
        return g is None or degrees[0] == self.algebra.group.element(g)

    def components(self) -> Dict[GroupElement, "Element"]:
        parts: Dict[GroupElement, Dict[int, Fraction]] = {}
        for i, x in self.coeffs.items():
            parts.setdefault(self.algebra.grades[i], {})[i] = x
        return {g: Element(self.algebra, coeffs) for g, coeffs in sorted(parts.items())}

    def to_vector(self) -> Vector:
        return to_dense(self.coeffs, self.algebra.dim)

    def sparse(self) -> SparseVector:
        return dict(self.coeffs)

    def normalized_key(self) -> Tuple[Tuple[int, Fraction], ...]:
        """Key identifying the line through a nonzero element (first coefficient scaled to 1)."""
        if not self.coeffs:
            return ()
        lead = self.coeffs[min(self.coeffs)]
        return tuple((i, x / lead) for i, x in sorted(self.coeffs.items()))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        labels = self.algebra.basis_labels
        return " + ".join(f"{format_scalar(x)} {labels[i]}" for i, x in sorted(self.coeffs.items()))

    def __repr__(self) -> str:
        return f"Element({self})"


def multiply(a: Element, b: Element) -> Element:
    """Bilinear extension of the structure table."""
    a._check(b)
    algebra = a.algebra
    out: Dict[int, Fraction] = {}
    for i, x in a.coeffs.items():
        for j, y in b.coeffs.items():
            prod = algebra.structure.get((i, j))
            if not prod:
                continue
            xy = x * y
            for k, z in prod.items():
                out[k] = out.get(k, ZERO) + xy * z
    return Element(algebra, {k: v for k, v in sorted(out.items()) if v})


def product(elements: Sequence[Element]) -> Element:
    if not elements:
        raise DimensionMismatch("empty product has no algebra")
    result = elements[0]
    for e in elements[1:]:
        if not result:
            return result
        result = multiply(result, e)
    return result


# ---------------------------------------------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    algebra: str
    grading_violations: List[Tuple[str, str, str]] = field(default_factory=list)
    associativity_violations: List[Tuple[str, str, str]] = field(default_factory=list)
    unit_violations: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.grading_violations or self.associativity_violations or self.unit_violations)

    def first_failure(self) -> Optional[Tuple[str, Tuple[str, ...]]]:
        if self.grading_violations:
            return ("grading law", self.grading_violations[0])
        if self.associativity_violations:
            return ("associativity", self.associativity_violations[0])
        if self.unit_violations:
            return ("unit law", self.unit_violations[0])
        return None

    def to_dict(self) -> Dict[str, object]:
        return {
            "algebra": self.algebra,
            "valid": self.ok,
            "grading_violations": [list(t) for t in self.grading_violations],
            "associativity_violations": [list(t) for t in self.associativity_violations],
            "unit_violations": [list(t) for t in self.unit_violations],
        }


def _sparse_times_basis(algebra: GradedAlgebra, left: Mapping[int, Fraction], k: int) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for m, x in left.items():
        for t, y in algebra.structure.get((m, k), {}).items():
            out[t] = out.get(t, ZERO) + x * y
    return {t: v for t, v in out.items() if v}


def _basis_times_sparse(algebra: GradedAlgebra, i: int, right: Mapping[int, Fraction]) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for m, x in right.items():
        for t, y in algebra.structure.get((i, m), {}).items():
            out[t] = out.get(t, ZERO) + x * y
    return {t: v for t, v in out.items() if v}


def validate(algebra: GradedAlgebra) -> ValidationReport:
    """Check the grading law, associativity on all basis triples and the unit law."""
    labels = algebra.basis_labels
    group = algebra.group
    report = ValidationReport(algebra.name)

    for (i, j), prod in algebra.structure.items():
        expected = group.add(algebra.grades[i], algebra.grades[j])
        for k in prod:
            if algebra.grades[k] != expected:
                report.grading_violations.append((labels[i], labels[j], labels[k]))

    # (b_i b_j) b_k can only be nonzero when b_i b_j is, and b_i (b_j b_k) only when b_j b_k is
    triples = set()
    for i, j in algebra.structure:
        for k in range(algebra.dim):
            triples.add((i, j, k))
            triples.add((k, i, j))
    for i, j, k in sorted(triples):
        left = _sparse_times_basis(algebra, algebra.structure.get((i, j), {}), k)
        right = _basis_times_sparse(algebra, i, algebra.structure.get((j, k), {}))
        if left != right:
            report.associativity_violations.append((labels[i], labels[j], labels[k]))

    unit = algebra.unit
    if not unit:
        report.unit_violations.append(("<unit>", "unit is zero"))
    for i in range(algebra.dim):
        basis = {i: ONE}
        if _sparse_times_basis(algebra, unit, i) != basis:
            report.unit_violations.append((labels[i], "unit*x != x"))
        if _basis_times_sparse(algebra, i, unit) != basis:
            report.unit_violations.append((labels[i], "x*unit != x"))

    if not report.ok:
        logger.info("%s failed validation: %s", algebra.name, report.first_failure())
    return report


# ---------------------------------------------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of an algebra held as canonical (RREF) coordinate rows."""

    algebra: GradedAlgebra
    rows: Tuple[Tuple[Tuple[int, Fraction], ...], ...]

    @classmethod
    def span(cls, algebra: GradedAlgebra, elements: Iterable[Element]) -> "Subspace":
        sb = SpanBasis()
        for e in elements:
            if e.algebra is not algebra and e.algebra != algebra:
                raise AlgebraMismatch("spanning element from another algebra")
            sb.add(e.coeffs)
        return cls.from_span_basis(algebra, sb)

    @classmethod
    def from_span_basis(cls, algebra: GradedAlgebra, sb: SpanBasis) -> "Subspace":
        return cls(algebra, tuple(tuple(sorted(row.items())) for row in sb.rows()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.rows == other.rows and (self.algebra is other.algebra or self.algebra == other.algebra)

    def __hash__(self) -> int:
        return hash(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> List[Element]:
        return [Element(self.algebra, dict(row)) for row in self.rows]

    def span_basis(self) -> SpanBasis:
        sb = SpanBasis()
        for row in self.rows:
            sb.add(dict(row))
        return sb

    def contains(self, element: Element) -> bool:
        return self.span_basis().contains(element.coeffs)

    def contains_subspace(self, other: "Subspace") -> bool:
        sb = self.span_basis()
        return all(sb.contains(dict(row)) for row in other.rows)

    def homogeneous_part(self, g: GroupElement) -> "Subspace":
        """Projections of the basis onto degree g (equal to the intersection when the subspace is graded)."""
        g = self.algebra.group.element(g)
        parts = [e.components().get(g) for e in self.basis()]
        return Subspace.span(self.algebra, [p for p in parts if p is not None])

    def is_graded(self) -> bool:
        sb = self.span_basis()
        return all(sb.contains(part.coeffs) for e in self.basis() for part in e.components().values())

    def __str__(self) -> str:
        return "span{" + ", ".join(str(e) for e in self.basis()) + "}"


def homogeneous_component(algebra: GradedAlgebra, g: GroupElement) -> Subspace:
    return Subspace.span(algebra, [algebra.basis_element(i) for i in algebra.indices_of_degree(g)])


def generated_subalgebra(algebra: GradedAlgebra, elements: Sequence[Element]) -> Subspace:
    """Span of the unit and every word in ``elements``: the subalgebra they generate."""
    sb = SpanBasis()
    queue: List[Element] = []
    for e in [algebra.one(), *elements]:
        if e.algebra is not algebra and e.algebra != algebra:
            raise AlgebraMismatch("generator from another algebra")
        if sb.add(e.coeffs):
            queue.append(e)
    while queue:
        word = queue.pop(0)
        for g in elements:
            extended = multiply(word, g)
            if extended and sb.add(extended.coeffs):
                queue.append(extended)
    return Subspace.from_span_basis(algebra, sb)


# ---------------------------------------------------------------------------------------------------------------
# commutativity


class CommutativityVerdict(NamedTuple):
    commutative: bool
    witness: Optional[Tuple[str, str]]


def is_commutative(algebra: GradedAlgebra) -> CommutativityVerdict:
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            if algebra.basis_product(i, j) != algebra.basis_product(j, i):
                return CommutativityVerdict(False, (algebra.basis_labels[i], algebra.basis_labels[j]))
    return CommutativityVerdict(True, None)


# ---------------------------------------------------------------------------------------------------------------
# graded maps


@dataclass(frozen=True, eq=False)
class GradedMap:
    """Linear map given by the images of the source basis."""

    source: GradedAlgebra
    target: GradedAlgebra
    images: Tuple[Element, ...]
    name: str = "f"

    def __post_init__(self) -> None:
        if self.source.group != self.target.group:
            raise GroupMismatch(f"map from a {self.source.group}-graded to a {self.target.group}-graded algebra")
        if len(self.images) != self.source.dim:
            raise DimensionMismatch(f"{len(self.images)} images for a source of dim {self.source.dim}")
        for image in self.images:
            if image.algebra is not self.target and image.algebra != self.target:
                raise AlgebraMismatch("image outside the target algebra")

    def apply(self, element: Element) -> Element:
        if element.algebra is not self.source and element.algebra != self.source:
            raise AlgebraMismatch(f"{self.name} is not defined on {element.algebra.name}")
        out = self.target.zero()
        for i, x in element.coeffs.items():
            out = out + self.images[i].scaled(x)
        return out

    def __call__(self, element: Element) -> Element:
        return self.apply(element)

    def matrix(self) -> Matrix:
        """Target-dim x source-dim coordinate matrix."""
        columns = [image.to_vector() for image in self.images]
        return Matrix(
            self.target.dim,
            self.source.dim,
            tuple(columns[j][i] for i in range(self.target.dim) for j in range(self.source.dim)),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.images == other.images

    def __hash__(self) -> int:
        return hash((self.source, self.target))


def identity_map(algebra: GradedAlgebra) -> GradedMap:
    return GradedMap(algebra, algebra, tuple(algebra.basis()), name=f"id_{algebra.name}")


def map_compose(outer: GradedMap, inner: GradedMap) -> GradedMap:
    """outer ∘ inner."""
    if inner.target is not outer.source and inner.target != outer.source:
        raise AlgebraMismatch(f"cannot compose {outer.name} after {inner.name}: target and source differ")
    return GradedMap(
        inner.source, outer.target, tuple(outer.apply(img) for img in inner.images), f"{outer.name}∘{inner.name}"
    )


class HomomorphismVerdict(NamedTuple):
    holds: bool
    witness: Optional[Tuple[str, ...]]
    reason: Optional[str]


def is_graded_homomorphism(f: GradedMap) -> HomomorphismVerdict:
    labels = f.source.basis_labels
    for i, image in enumerate(f.images):
        if not image.is_homogeneous(f.source.grades[i]):
            return HomomorphismVerdict(False, (labels[i],), "image not homogeneous of the same degree")
    for i in range(f.source.dim):
        for j in range(f.source.dim):
            lhs = f.apply(f.source.element(f.source.basis_product(i, j)))
            rhs = multiply(f.images[i], f.images[j])
            if lhs != rhs:
                return HomomorphismVerdict(False, (labels[i], labels[j]), "f(xy) != f(x)f(y)")
    return HomomorphismVerdict(True, None, None)


def is_injective(f: GradedMap) -> bool:
    sb = SpanBasis()
    return all(sb.add(image.coeffs) for image in f.images)


def require_homogeneous(elements: Sequence[Element]) -> None:
    for e in elements:
        if not e or e.degree() is None:
            raise NotHomogeneous(f"{e} is not a nonzero homogeneous element")


def describe_degree(g: Optional[GroupElement]) -> str:
    return "-" if g is None else format_element(g)
