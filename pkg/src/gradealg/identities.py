"""
Multilinear graded polynomials and graded polynomial identities.

A polynomial of degree d lists its d graded variables once; each term is a permutation ``p`` of
``range(d)`` standing for the monomial ``v[p[0]] v[p[1]] ... v[p[d-1]]``. Because every term is
multilinear, a polynomial vanishes on an algebra as soon as it vanishes on all tuples of homogeneous
basis elements of the right degrees, so identity testing is a finite search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product as cartesian
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union
import logging
import re
import threading

from .algebra import Coefficient, Element, GradedAlgebra
from .config import parallel_map
from .errors import (
    DegreeMismatch,
    GalgSyntaxError,
    GroupMismatch,
    MultilinearityError,
    SearchBudgetExceeded,
    TooLarge,
)
from .groups import GroupElement, format_element
from .linalg import ONE, ZERO, Matrix, SpanBasis, format_scalar, kernel_basis, rref

logger = logging.getLogger(__name__)

MAX_DEGREE = 8
MAX_SPACE_DEGREE = 5
DEFAULT_BUDGET = 5_000_000

Permutation = Tuple[int, ...]


@dataclass(frozen=True, order=True)
class GradedVariable:
    index: int
    degree: GroupElement

    def __post_init__(self) -> None:
        if self.index < 1:
            raise MultilinearityError(f"variable index must be positive, got {self.index}")
        object.__setattr__(self, "degree", tuple(self.degree))

    def __str__(self) -> str:
        return f"x{self.index}:{format_element(self.degree)}"


@dataclass(frozen=True, eq=False)
class MultilinearGradedPolynomial:
    variables: Tuple[GradedVariable, ...]
    terms: Dict[Permutation, Fraction]

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        d = len(variables)
        if d > MAX_DEGREE:
            raise TooLarge("polynomial degree", d, MAX_DEGREE)
        if len(set(variables)) != d:
            raise MultilinearityError(f"repeated variable in {', '.join(map(str, variables))}")
        identity = tuple(range(d))
        terms: Dict[Permutation, Fraction] = {}
        for perm, c in self.terms.items():
            perm = tuple(perm)
            if tuple(sorted(perm)) != identity:
                raise MultilinearityError(f"term {perm} does not use each of the {d} variables exactly once")
            value = terms.get(perm, ZERO) + Fraction(c)
            if value:
                terms[perm] = value
            else:
                terms.pop(perm, None)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", dict(sorted(terms.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultilinearGradedPolynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.variables, tuple(self.terms.items())))

    @property
    def degree(self) -> int:
        return len(self.variables)

    @property
    def pattern(self) -> Tuple[GroupElement, ...]:
        return tuple(v.degree for v in self.variables)

    @classmethod
    def monomial(
        cls, variables: Sequence[GradedVariable], order: Optional[Sequence[int]] = None, coeff: Coefficient = 1
    ) -> "MultilinearGradedPolynomial":
        perm = tuple(order) if order is not None else tuple(range(len(variables)))
        return cls(tuple(variables), {perm: Fraction(coeff)})

    @classmethod
    def commutator(cls, x: GradedVariable, y: GradedVariable) -> "MultilinearGradedPolynomial":
        """[x, y] = xy - yx."""
        return cls((x, y), {(0, 1): ONE, (1, 0): -ONE})

    @classmethod
    def anticommutator(cls, x: GradedVariable, y: GradedVariable) -> "MultilinearGradedPolynomial":
        """xy + yx."""
        return cls((x, y), {(0, 1): ONE, (1, 0): ONE})

    def _same_variables(self, other: "MultilinearGradedPolynomial") -> None:
        if self.variables != other.variables:
            raise MultilinearityError("polynomials in different variables cannot be added")

    def __add__(self, other: "MultilinearGradedPolynomial") -> "MultilinearGradedPolynomial":
        self._same_variables(other)
        terms = dict(self.terms)
        for perm, c in other.terms.items():
            terms[perm] = terms.get(perm, ZERO) + c
        return MultilinearGradedPolynomial(self.variables, terms)

    def scaled(self, factor: Coefficient) -> "MultilinearGradedPolynomial":
        return MultilinearGradedPolynomial(self.variables, {p: c * factor for p, c in self.terms.items()})

    def __neg__(self) -> "MultilinearGradedPolynomial":
        return self.scaled(-1)

    def __sub__(self, other: "MultilinearGradedPolynomial") -> "MultilinearGradedPolynomial":
        return self + (-other)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"MultilinearGradedPolynomial({self})"


# ---------------------------------------------------------------------------------------------------------------
# literal syntax

_COEFF = re.compile(r"^[+-]?\d+(/\d+)?$")
_VARIABLE = re.compile(r"^x(\d+):(\d+(?:,\d+)*)$")


def parse_polynomial(literal: str) -> MultilinearGradedPolynomial:
    """
    Parse ``1/1 x1:1 x2:1 + 1/1 x2:1 x1:1``: a coefficient, then the variables of one monomial.

    Terms are separated by ``+``; a leading coefficient may be negative and defaults to 1 when omitted.
    Every monomial must contain the same variables exactly once.
    """
    chunks = [c.strip() for c in re.split(r"\s\+\s", literal)]
    if not literal.strip() or any(not c for c in chunks):
        raise GalgSyntaxError(1, f"empty term in polynomial {literal!r}")
    monomials: List[Tuple[Fraction, List[GradedVariable]]] = []
    for chunk in chunks:
        tokens = chunk.split()
        coeff = ONE
        if _COEFF.match(tokens[0]):
            coeff = Fraction(tokens[0])
            tokens = tokens[1:]
        elif tokens[0] == "-":
            raise GalgSyntaxError(1, "write negative coefficients as '-p/q', not as a '-' separator")
        if not tokens:
            raise GalgSyntaxError(1, f"term {chunk!r} has no variables")
        word: List[GradedVariable] = []
        for token in tokens:
            match = _VARIABLE.match(token)
            if match is None:
                raise GalgSyntaxError(1, f"bad variable {token!r}; expected x<index>:<degree>")
            word.append(GradedVariable(int(match.group(1)), tuple(int(c) for c in match.group(2).split(","))))
        monomials.append((coeff, word))
    variables = tuple(sorted(monomials[0][1]))
    position = {v: i for i, v in enumerate(variables)}
    terms: Dict[Permutation, Fraction] = {}
    for coeff, word in monomials:
        if sorted(word) != list(variables):
            raise MultilinearityError(
                f"monomial {' '.join(map(str, word))} does not use exactly the variables "
                f"{' '.join(map(str, variables))}"
            )
        perm = tuple(position[v] for v in word)
        terms[perm] = terms.get(perm, ZERO) + coeff
    return MultilinearGradedPolynomial(variables, terms)


def format_polynomial(f: MultilinearGradedPolynomial) -> str:
    if not f.terms:
        return "0"
    return " + ".join(
        f"{format_scalar(c)} " + " ".join(str(f.variables[i]) for i in perm) for perm, c in f.terms.items()
    )


# ---------------------------------------------------------------------------------------------------------------
# evaluation


class _WordCache:
    """Products of basis words, memoised by prefix."""

    def __init__(self, algebra: GradedAlgebra):
        self.algebra = algebra
        self._values: Dict[Tuple[int, ...], Dict[int, Fraction]] = {}
        self._lock = threading.Lock()

    def value(self, word: Tuple[int, ...]) -> Dict[int, Fraction]:
        cached = self._values.get(word)
        if cached is not None:
            return cached
        if len(word) == 1:
            result = {word[0]: ONE}
        else:
            prefix = self.value(word[:-1])
            last = word[-1]
            out: Dict[int, Fraction] = {}
            for m, x in prefix.items():
                for t, y in self.algebra.structure.get((m, last), {}).items():
                    out[t] = out.get(t, ZERO) + x * y
            result = {t: v for t, v in out.items() if v}
        with self._lock:
            self._values[word] = result
        return result


def _evaluate_basis(f: MultilinearGradedPolynomial, cache: _WordCache, indices: Sequence[int]) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for perm, c in f.terms.items():
        for t, y in cache.value(tuple(indices[i] for i in perm)).items():
            out[t] = out.get(t, ZERO) + c * y
    return {t: v for t, v in out.items() if v}


def _assignment_list(
    f: MultilinearGradedPolynomial, assignment: Union[Sequence[Element], Mapping[GradedVariable, Element]]
) -> List[Element]:
    if isinstance(assignment, Mapping):
        missing = [str(v) for v in f.variables if v not in assignment]
        if missing:
            raise DegreeMismatch(f"no value assigned to {', '.join(missing)}")
        return [assignment[v] for v in f.variables]
    values = list(assignment)
    if len(values) != f.degree:
        raise DegreeMismatch(f"{len(values)} values for {f.degree} variables")
    return values


def evaluate(
    f: MultilinearGradedPolynomial,
    algebra: GradedAlgebra,
    assignment: Union[Sequence[Element], Mapping[GradedVariable, Element]],
) -> Element:
    values = _assignment_list(f, assignment)
    for var, value in zip(f.variables, values):
        if value.algebra is not algebra and value.algebra != algebra:
            raise DegreeMismatch(f"value of {var} lies outside {algebra.name}")
        if not value.is_homogeneous(var.degree):
            raise DegreeMismatch(f"{value} is not homogeneous of degree {format_element(var.degree)} for {var}")
    out = algebra.zero()
    for perm, c in f.terms.items():
        term = values[perm[0]]
        for i in perm[1:]:
            if not term:
                break
            term = term * values[i]
        out = out + term.scaled(c)
    return out


class IdentityVerdict(NamedTuple):
    holds: bool
    counterexample: Optional[Tuple[Element, ...]]
    value: Optional[Element]

    def counterexample_labels(self) -> Optional[Tuple[str, ...]]:
        if self.counterexample is None:
            return None
        return tuple(str(e) for e in self.counterexample)


def _candidates(algebra: GradedAlgebra, pattern: Sequence[GroupElement]) -> List[Tuple[int, ...]]:
    return [algebra.indices_of_degree(g) for g in pattern]


def _search_size(candidates: Sequence[Sequence[int]], terms: int) -> int:
    size = terms
    for c in candidates:
        size *= len(c)
    return size


def is_graded_identity(
    algebra: GradedAlgebra, f: MultilinearGradedPolynomial, budget: int = DEFAULT_BUDGET
) -> IdentityVerdict:
    """
    Decide whether f vanishes on every homogeneous substitution.

    Basis tuples are scanned lexicographically; the first one with a nonzero value is the counterexample.
    """
    if not f.terms:
        return IdentityVerdict(True, None, None)
    candidates = _candidates(algebra, f.pattern)
    needed = _search_size(candidates, len(f.terms))
    if needed > budget:
        raise SearchBudgetExceeded(needed, budget)
    logger.debug("identity search for %s on %s: %d term evaluations", f, algebra.name, needed)
    cache = _WordCache(algebra)

    def scan(first: int) -> Optional[Tuple[Tuple[int, ...], Dict[int, Fraction]]]:
        for rest in cartesian(*candidates[1:]):
            indices = (first, *rest)
            value = _evaluate_basis(f, cache, indices)
            if value:
                return indices, value
        return None

    for hit in parallel_map(scan, candidates[0]):
        if hit is not None:
            indices, value = hit
            return IdentityVerdict(False, tuple(algebra.basis_element(i) for i in indices), algebra.element(value))
    return IdentityVerdict(True, None, None)


def grassmann_t_ideal_generators() -> List[MultilinearGradedPolynomial]:
    """[x1^(0), x2^(0)], [x1^(0), x1^(1)] and x1^(1) x2^(1) + x2^(1) x1^(1)."""
    even1, even2 = GradedVariable(1, (0,)), GradedVariable(2, (0,))
    odd1, odd2 = GradedVariable(1, (1,)), GradedVariable(2, (1,))
    return [
        MultilinearGradedPolynomial.commutator(even1, even2),
        MultilinearGradedPolynomial.commutator(even1, odd1),
        MultilinearGradedPolynomial.anticommutator(odd1, odd2),
    ]


class GrassmannIdentityVerdict(NamedTuple):
    holds: bool
    failing: Optional[MultilinearGradedPolynomial]
    counterexample: Optional[Tuple[Element, ...]]


def satisfies_grassmann_identities(algebra: GradedAlgebra) -> GrassmannIdentityVerdict:
    if not algebra.group.is_z2():
        raise GroupMismatch(f"the Grassmann identities are Z2-graded, got a {algebra.group}-grading")
    for generator in grassmann_t_ideal_generators():
        verdict = is_graded_identity(algebra, generator)
        if not verdict.holds:
            logger.info("%s fails the Grassmann identity %s", algebra.name, generator)
            return GrassmannIdentityVerdict(False, generator, verdict.counterexample)
    return GrassmannIdentityVerdict(True, None, None)


# ---------------------------------------------------------------------------------------------------------------
# identity spaces


def pattern_variables(pattern: Sequence[GroupElement]) -> Tuple[GradedVariable, ...]:
    return tuple(GradedVariable(i + 1, tuple(g)) for i, g in enumerate(pattern))


def identity_space(
    algebra: GradedAlgebra, pattern: Sequence[GroupElement], budget: int = DEFAULT_BUDGET
) -> List[MultilinearGradedPolynomial]:
    """
    Basis of the multilinear identities in the variables x1..xd of the given degrees.

    The unknowns are the d! coefficients (permutations in lexicographic order); every basis tuple
    contributes one equation per coordinate of the value. The kernel is returned in reduced row
    echelon form, so two algebras have the same identities for the pattern iff the lists are equal.
    """
    pattern = [algebra.group.element(g) for g in pattern]
    d = len(pattern)
    if d < 1:
        raise MultilinearityError("identity spaces need at least one variable")
    if d > MAX_SPACE_DEGREE:
        raise TooLarge("identity space degree", d, MAX_SPACE_DEGREE)
    perms = list(permutations(range(d)))
    candidates = _candidates(algebra, pattern)
    needed = _search_size(candidates, len(perms))
    if needed > budget:
        raise SearchBudgetExceeded(needed, budget)
    cache = _WordCache(algebra)
    equations = SpanBasis()
    for indices in cartesian(*candidates):
        rows: Dict[int, Dict[int, Fraction]] = {}
        for unknown, perm in enumerate(perms):
            for t, y in cache.value(tuple(indices[i] for i in perm)).items():
                rows.setdefault(t, {})[unknown] = y
        for row in rows.values():
            equations.add(row)
            if equations.rank == len(perms):
                break
        if equations.rank == len(perms):
            break
    unknowns = len(perms)
    if equations.rank:
        dense = [[row.get(u, ZERO) for u in range(unknowns)] for row in equations.rows()]
        kernel = kernel_basis(Matrix.from_rows(dense))
    else:
        kernel = [tuple(ONE if u == v else ZERO for u in range(unknowns)) for v in range(unknowns)]
    if not kernel:
        return []
    variables = pattern_variables(pattern)
    canonical = rref(Matrix.from_rows(kernel))
    out = []
    for r in range(canonical.rank):
        row = canonical.reduced.row(r)
        out.append(MultilinearGradedPolynomial(variables, {perms[u]: c for u, c in enumerate(row) if c}))
    logger.debug("identity space of %s at %s has dim %d", algebra.name, pattern, len(out))
    return out


def nondecreasing_patterns(elements: Sequence[GroupElement], length: int) -> List[Tuple[GroupElement, ...]]:
    out: List[Tuple[GroupElement, ...]] = []

    def extend(start: int, prefix: Tuple[GroupElement, ...]) -> None:
        if len(prefix) == length:
            out.append(prefix)
            return
        for i in range(start, len(elements)):
            extend(i, prefix + (elements[i],))

    extend(0, ())
    return out


@dataclass
class IdentityComparison:
    max_degree: int
    dims: List[Tuple[Tuple[GroupElement, ...], int, int]]
    first_difference: Optional[Tuple[GroupElement, ...]]

    @property
    def equal(self) -> bool:
        return self.first_difference is None

    @property
    def verdict(self) -> str:
        if self.equal:
            return f"equal up to degree {self.max_degree}"
        return "differ at pattern (" + ", ".join(format_element(g) for g in self.first_difference or ()) + ")"

    def to_dict(self) -> Dict[str, object]:
        return {
            "max_degree": self.max_degree,
            "verdict": self.verdict,
            "equal_up_to_degree": self.equal,
            "patterns": [
                {"pattern": [format_element(g) for g in p], "dim_a": a, "dim_b": b} for p, a, b in self.dims
            ],
        }


def compare_identity_spaces(
    a: GradedAlgebra, b: GradedAlgebra, max_degree: int, budget: int = DEFAULT_BUDGET
) -> IdentityComparison:
    """
    Degree-bounded comparison of the multilinear identities of two algebras.

    Equal spaces for every pattern up to ``max_degree`` are evidence, never a proof, that the
    T-ideals coincide; the verdict says "equal up to degree d" for that reason.
    """
    if a.group != b.group:
        raise GroupMismatch(f"cannot compare a {a.group}-graded and a {b.group}-graded algebra")
    if max_degree > MAX_SPACE_DEGREE:
        raise TooLarge("identity space degree", max_degree, MAX_SPACE_DEGREE)
    dims: List[Tuple[Tuple[GroupElement, ...], int, int]] = []
    for length in range(1, max_degree + 1):
        for pattern in nondecreasing_patterns(a.group.elements(), length):
            space_a = identity_space(a, pattern, budget)
            space_b = identity_space(b, pattern, budget)
            dims.append((pattern, len(space_a), len(space_b)))
            if space_a != space_b:
                logger.info("identities of %s and %s differ at %s", a.name, b.name, pattern)
                return IdentityComparison(max_degree, dims, pattern)
    return IdentityComparison(max_degree, dims, None)

