"""
Regular gradings: bicharacter extraction and axioms, the decomposition matrix, minimality,
k-regularity with witnesses, strong regularity and the beta(h, h) = -1 obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple, Union
import logging

from .algebra import Element, GradedAlgebra, multiply
from .config import parallel_map
from .errors import (
    GroupMismatch,
    InvariantViolation,
    IrrationalBicharacter,
    NotBetaCommutative,
    UndeterminedBicharacter,
)
from .groups import FiniteAbelianGroup, GroupElement, Z2, format_element
from .linalg import ONE, Matrix, SpanBasis, det, format_scalar

logger = logging.getLogger(__name__)

Pair = Tuple[GroupElement, GroupElement]


def _exact(value: object) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, Fraction, str)):
        raise IrrationalBicharacter(f"bicharacter values must be exact rationals, got {value!r}")
    return Fraction(value)


@dataclass(frozen=True, eq=False)
class Bicharacter:
    group: FiniteAbelianGroup
    table: Dict[Pair, Fraction]

    def __post_init__(self) -> None:
        elements = self.group.elements()
        table: Dict[Pair, Fraction] = {}
        for g in elements:
            for h in elements:
                if (g, h) not in self.table:
                    raise UndeterminedBicharacter([(g, h)])
                value = _exact(self.table[(g, h)])
                if value == 0:
                    raise IrrationalBicharacter(f"beta({g}, {h}) = 0 is not a unit")
                table[(g, h)] = value
        object.__setattr__(self, "table", table)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bicharacter):
            return NotImplemented
        return self.group == other.group and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.group, tuple(sorted(self.table.items()))))

    def __call__(self, g: GroupElement, h: GroupElement) -> Fraction:
        return self.table[(self.group.element(g), self.group.element(h))]

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup) -> "Bicharacter":
        return cls(group, {(g, h): ONE for g in group.elements() for h in group.elements()})

    @classmethod
    def grassmann(cls) -> "Bicharacter":
        """beta(0,0) = beta(0,1) = beta(1,0) = 1 and beta(1,1) = -1."""
        table = {(g, h): Fraction(-1) if g == h == (1,) else ONE for g in Z2.elements() for h in Z2.elements()}
        return cls(Z2, table)

    def to_dict(self) -> Dict[str, str]:
        return {f"{format_element(g)};{format_element(h)}": format_scalar(v) for (g, h), v in self.table.items()}


GRASSMANN_TABLE: Mapping[Pair, Fraction] = {((0,), (0,)): ONE, ((0,), (1,)): ONE, ((1,), (0,)): ONE, ((1,), (1,)): -ONE}


# ---------------------------------------------------------------------------------------------------------------
# extraction


def _ratio(p: Mapping[int, Fraction], q: Mapping[int, Fraction]) -> Optional[Fraction]:
    """The scalar r with p = r q, or None when p and q are not proportional."""
    if p.keys() != q.keys():
        return None
    k0 = next(iter(q))
    r = p[k0] / q[k0]
    if any(p[k] != r * q[k] for k in q):
        return None
    return r


def extract_partial_bicharacter(algebra: GradedAlgebra) -> Dict[Pair, Fraction]:
    """
    beta on every degree pair pinned by a nonzero basis product.

    Bilinearity of (x, y) -> xy - beta yx makes basis pairs sufficient. Raises NotBetaCommutative
    with the first offending basis pair.
    """
    labels = algebra.basis_labels
    determined: Dict[Pair, Fraction] = {}
    for i in range(algebra.dim):
        for j in range(i, algebra.dim):
            p = algebra.basis_product(i, j)
            q = algebra.basis_product(j, i)
            if not p and not q:
                continue
            if not p or not q:
                zero, nonzero = ("yx", "xy") if p else ("xy", "yx")
                raise NotBetaCommutative((labels[i], labels[j]), f"{nonzero} != 0 while {zero} = 0")
            r = _ratio(p, q)
            if r is None:
                raise NotBetaCommutative((labels[i], labels[j]), "xy is not a scalar multiple of yx")
            g, h = algebra.grades[i], algebra.grades[j]
            for pair, value in (((g, h), r), ((h, g), 1 / r)):
                seen = determined.get(pair)
                if seen is None:
                    determined[pair] = value
                elif seen != value:
                    raise NotBetaCommutative(
                        (labels[i], labels[j]),
                        f"beta({format_element(pair[0])}, {format_element(pair[1])}) "
                        f"would be both {format_scalar(seen)} and {format_scalar(value)}",
                    )
    return determined


def undetermined_pairs(algebra: GradedAlgebra, determined: Mapping[Pair, Fraction]) -> List[Pair]:
    elements = algebra.group.elements()
    return [(g, h) for g in elements for h in elements if (g, h) not in determined]


def extract_bicharacter(algebra: GradedAlgebra) -> Bicharacter:
    determined = extract_partial_bicharacter(algebra)
    missing = undetermined_pairs(algebra, determined)
    if missing:
        logger.info("beta of %s is undetermined at %s", algebra.name, missing)
        raise UndeterminedBicharacter(missing)
    return Bicharacter(algebra.group, determined)


def agrees_with(determined: Mapping[Pair, Fraction], beta: Union[Bicharacter, Mapping[Pair, Fraction]]) -> bool:
    table = beta.table if isinstance(beta, Bicharacter) else beta
    return all(table.get(pair) == value for pair, value in determined.items())


# ---------------------------------------------------------------------------------------------------------------
# axioms and the decomposition matrix


class AxiomVerdict(NamedTuple):
    holds: bool
    violations: List[str]


def verify_bicharacter_axioms(beta: Bicharacter) -> AxiomVerdict:
    """
    Antisymmetry beta(g,h) beta(h,g) = 1 and biadditivity in both arguments.

    The second argument uses beta(g, s+h) = beta(g, s) beta(g, h).
    """
    group = beta.group
    elements = group.elements()
    violations: List[str] = []
    for g in elements:
        for h in elements:
            if beta(g, h) * beta(h, g) != 1:
                violations.append(f"antisymmetry at ({format_element(g)}, {format_element(h)})")
    for g in elements:
        for s in elements:
            for h in elements:
                if beta(group.add(g, s), h) != beta(g, h) * beta(s, h):
                    violations.append(
                        f"additivity in the first argument at ({format_element(g)}, {format_element(s)}, "
                        f"{format_element(h)})"
                    )
                if beta(g, group.add(s, h)) != beta(g, s) * beta(g, h):
                    violations.append(
                        f"additivity in the second argument at ({format_element(g)}, {format_element(s)}, "
                        f"{format_element(h)})"
                    )
    return AxiomVerdict(not violations, violations)


@dataclass(frozen=True)
class DecompositionMatrix:
    matrix: Matrix
    determinant: Fraction
    minimal: bool
    equal_columns: Optional[Tuple[GroupElement, GroupElement]]


def decomposition_matrix(beta: Bicharacter) -> DecompositionMatrix:
    """M = (beta(g, h))_{g,h} with G enumerated lexicographically; minimality by columns and by det."""
    elements = beta.group.elements()
    rows = [[beta(g, h) for h in elements] for g in elements]
    matrix = Matrix.from_rows(rows)
    determinant = det(matrix)
    equal: Optional[Tuple[GroupElement, GroupElement]] = None
    for a in range(len(elements)):
        for b in range(a + 1, len(elements)):
            if equal is None and matrix.column(a) == matrix.column(b):
                equal = (elements[a], elements[b])
    by_columns = equal is None
    by_det = determinant != 0
    if by_columns != by_det:
        raise InvariantViolation(
            f"minimality by columns ({by_columns}) disagrees with det != 0 ({by_det}) for {beta.to_dict()}"
        )
    return DecompositionMatrix(matrix, determinant, by_columns, equal)


def permutation_conjugate(m1: Matrix, m2: Matrix) -> Optional[List[int]]:
    """
    A permutation s with m2[s(i), s(j)] = m1[i, j] for all i, j, or None.

    Candidates are pruned by the multiset of each row together with its diagonal entry.
    """
    if (m1.rows, m1.cols) != (m2.rows, m2.cols) or m1.rows != m1.cols:
        return None
    n = m1.rows

    def signature(m: Matrix, i: int) -> Tuple[Fraction, Tuple[Fraction, ...], Tuple[Fraction, ...]]:
        return (m[i, i], tuple(sorted(m.row(i))), tuple(sorted(m.column(i))))

    sig1 = [signature(m1, i) for i in range(n)]
    sig2 = [signature(m2, i) for i in range(n)]
    if sorted(sig1) != sorted(sig2):
        return None
    assignment: List[int] = []
    used: Set[int] = set()

    def extend(i: int) -> bool:
        if i == n:
            return True
        for candidate in range(n):
            if candidate in used or sig2[candidate] != sig1[i]:
                continue
            if all(
                m2[candidate, assignment[j]] == m1[i, j] and m2[assignment[j], candidate] == m1[j, i] for j in range(i)
            ):
                assignment.append(candidate)
                used.add(candidate)
                if extend(i + 1):
                    return True
                assignment.pop()
                used.discard(candidate)
        return False

    return list(assignment) if extend(0) else None


def infinite_dim_obligations(beta: Bicharacter) -> List[GroupElement]:
    """Every h with beta(h, h) = -1: a fully regular algebra with such an h is infinite-dimensional."""
    return [h for h in beta.group.elements() if beta(h, h) == -1]


# ---------------------------------------------------------------------------------------------------------------
# k-regularity


def find_witness(algebra: GradedAlgebra, degrees: Sequence[GroupElement]) -> Optional[Tuple[int, ...]]:
    """
    Lexicographically first tuple of basis indices of the given degrees with a nonzero product.

    Depth-first in lexicographic order; a partial product that already failed at some depth (up to a
    nonzero scalar) is never expanded again.
    """
    degrees = [algebra.group.element(g) for g in degrees]
    if not degrees:
        return ()
    candidates = [algebra.indices_of_degree(g) for g in degrees]
    basis = algebra.basis()
    dead: Set[Tuple[int, Tuple[Tuple[int, Fraction], ...]]] = set()
    prefix: List[int] = []

    def search(depth: int, current: Element) -> bool:
        if depth == len(degrees):
            return True
        key = (depth, current.normalized_key())
        if key in dead:
            return False
        for i in candidates[depth]:
            nxt = multiply(current, basis[i])
            if not nxt:
                continue
            prefix.append(i)
            if search(depth + 1, nxt):
                return True
            prefix.pop()
        dead.add(key)
        return False

    for i in candidates[0]:
        prefix.append(i)
        if search(1, basis[i]):
            return tuple(prefix)
        prefix.pop()
    return None


@dataclass
class KRegularity:
    algebra: str
    k: int
    witnesses: Dict[Tuple[GroupElement, ...], Tuple[str, ...]] = field(default_factory=dict)
    failures: List[Tuple[GroupElement, ...]] = field(default_factory=list)

    @property
    def regular(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, object]:
        def key(t: Tuple[GroupElement, ...]) -> str:
            return " ".join(format_element(g) for g in t)

        return {
            "k": self.k,
            "regular": self.regular,
            "witnesses": {key(t): list(w) for t, w in self.witnesses.items()},
            "failures": [key(t) for t in self.failures],
        }


def all_tuples(group: FiniteAbelianGroup, k: int) -> List[Tuple[GroupElement, ...]]:
    return [tuple(t) for t in cartesian(group.elements(), repeat=k)]


def is_k_regular(
    algebra: GradedAlgebra, k: int, tuples: Optional[Sequence[Sequence[GroupElement]]] = None
) -> KRegularity:
    """
    Search a witness for each degree tuple (all of G^k by default).

    A failing tuple of length j fails after any extension, so checking G^k covers every shorter length.
    """
    chosen = all_tuples(algebra.group, k) if tuples is None else [tuple(t) for t in tuples]
    logger.debug("k-regularity of %s: %d tuples", algebra.name, len(chosen))
    results = parallel_map(lambda t: find_witness(algebra, t), chosen)
    report = KRegularity(algebra.name, k)
    labels = algebra.basis_labels
    for t, witness in zip(chosen, results):
        if witness is None:
            report.failures.append(t)
        else:
            report.witnesses[t] = tuple(labels[i] for i in witness)
    return report


def regularity_index(algebra: GradedAlgebra, k_max: int) -> int:
    """Largest k <= k_max for which the algebra is k-regular (0 when not even 1-regular)."""
    best = 0
    for k in range(1, k_max + 1):
        if not is_k_regular(algebra, k).regular:
            break
        best = k
    return best


class StrongRegularity(NamedTuple):
    strongly_regular: bool
    witness: Optional[Element]


def is_strongly_regular(algebra: GradedAlgebra) -> StrongRegularity:
    """True iff no nonzero odd b has b·c = 0 for every odd c."""
    if not algebra.group.is_z2():
        raise GroupMismatch(f"strong regularity is defined for Z2-gradings, got {algebra.group}")
    odd = algebra.indices_of_degree((1,))
    dim = algebra.dim

    def column(o: int) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = {}
        for block, c in enumerate(odd):
            for t, x in algebra.basis_product(o, c).items():
                out[block * dim + t] = x
        return out

    sb = SpanBasis()
    added: List[int] = []
    for o in odd:
        col = column(o)
        coords = sb.coordinates(col)
        if coords is None:
            sb.add(col)
            added.append(o)
            continue
        kernel = {o: ONE}
        for position, x in coords.items():
            kernel[added[position]] = -x
        return StrongRegularity(False, algebra.element(kernel))
    return StrongRegularity(True, None)


# ---------------------------------------------------------------------------------------------------------------
# combined report


@dataclass
class RegularityReport:
    algebra: str
    beta: Optional[Bicharacter]
    failure: Optional[str]
    matrix: Optional[Matrix]
    determinant: Optional[Fraction]
    minimal: Optional[bool]
    k_checked: int
    k_regularity: List[KRegularity]
    strongly_regular: Optional[bool]
    infinite_dim_obligations: List[GroupElement]

    @property
    def k_witnesses(self) -> Dict[Tuple[GroupElement, ...], Tuple[str, ...]]:
        out: Dict[Tuple[GroupElement, ...], Tuple[str, ...]] = {}
        for level in self.k_regularity:
            out.update(level.witnesses)
        return out

    @property
    def k_failures(self) -> List[Tuple[GroupElement, ...]]:
        return [t for level in self.k_regularity for t in level.failures]

    def regular_up_to(self) -> int:
        best = 0
        for level in self.k_regularity:
            if not level.regular:
                break
            best = level.k
        return best

    def to_dict(self) -> Dict[str, object]:
        return {
            "algebra": self.algebra,
            "bicharacter": self.beta.to_dict() if self.beta else None,
            "bicharacter_failure": self.failure,
            "matrix": [[format_scalar(x) for x in row] for row in self.matrix.to_rows()] if self.matrix else None,
            "determinant": format_scalar(self.determinant) if self.determinant is not None else None,
            "minimal": self.minimal,
            "k_checked": self.k_checked,
            "regular_up_to": self.regular_up_to(),
            "k_regularity": [level.to_dict() for level in self.k_regularity],
            "strongly_regular": self.strongly_regular,
            "infinite_dim_obligations": [format_element(h) for h in self.infinite_dim_obligations],
        }


def regularity_report(algebra: GradedAlgebra, k: int) -> RegularityReport:
    beta: Optional[Bicharacter] = None
    failure: Optional[str] = None
    try:
        beta = extract_bicharacter(algebra)
    except (NotBetaCommutative, UndeterminedBicharacter) as exc:
        failure = f"{type(exc).__name__}: {exc}"
    decomposition = decomposition_matrix(beta) if beta is not None else None
    levels = [is_k_regular(algebra, j) for j in range(1, k + 1)]
    strong = is_strongly_regular(algebra).strongly_regular if algebra.group.is_z2() else None
    return RegularityReport(
        algebra=algebra.name,
        beta=beta,
        failure=failure,
        matrix=decomposition.matrix if decomposition else None,
        determinant=decomposition.determinant if decomposition else None,
        minimal=decomposition.minimal if decomposition else None,
        k_checked=k,
        k_regularity=levels,
        strongly_regular=strong,
        infinite_dim_obligations=infinite_dim_obligations(beta) if beta is not None else [],
    )
