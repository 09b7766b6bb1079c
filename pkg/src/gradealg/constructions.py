"""Algebra constructors: sums, tensor products, envelopes, twisted group algebras and the fixture corpus."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union
import logging

from .algebra import Coefficient, GradedAlgebra, Structure
from .errors import BadParams, CocycleLawViolated, GroupMismatch, InvariantViolation, NotTriviallyGraded
from .groups import Z2, FiniteAbelianGroup, GroupElement

logger = logging.getLogger(__name__)

CocycleTable = Mapping[Tuple[GroupElement, GroupElement], Coefficient]
Cocycle = Union[CocycleTable, Callable[[GroupElement, GroupElement], Coefficient]]


def algebra_from_table(
    name: str,
    group: FiniteAbelianGroup,
    labels: Sequence[str],
    grades: Sequence[Iterable[int]],
    products: Mapping[Tuple[str, str], Mapping[str, Coefficient]],
    unit: Mapping[str, Coefficient],
) -> GradedAlgebra:
    """Build an algebra from label-keyed products; omitted pairs multiply to zero."""
    index = {label: i for i, label in enumerate(labels)}
    structure: Structure = {}
    for (a, b), prod in products.items():
        structure[(index[a], index[b])] = {index[c]: Fraction(x) for c, x in prod.items()}
    return GradedAlgebra(
        group=group,
        basis_labels=tuple(labels),
        grades=tuple(tuple(g) for g in grades),
        structure=structure,
        unit={index[c]: Fraction(x) for c, x in unit.items()},
        name=name,
    )


def trivial_algebra(group: FiniteAbelianGroup = Z2) -> GradedAlgebra:
    """The base field K, concentrated in degree 0."""
    return algebra_from_table("K", group, ["1"], [group.identity], {("1", "1"): {"1": 1}}, {"1": 1})


def k_plus_ck(square: Coefficient = 1) -> GradedAlgebra:
    """K ⊕ cK with c odd and c² = square·1."""
    if square == 0:
        raise BadParams("c² = 0 is not graded simple; use odd_nilpotent()")
    products = {("1", "1"): {"1": 1}, ("1", "c"): {"c": 1}, ("c", "1"): {"c": 1}, ("c", "c"): {"1": square}}
    return algebra_from_table("K+cK", Z2, ["1", "c"], [(0,), (1,)], products, {"1": 1})


def odd_nilpotent() -> GradedAlgebra:
    """K ⊕ tK with t odd and t² = 0."""
    products = {("1", "1"): {"1": 1}, ("1", "t"): {"t": 1}, ("t", "1"): {"t": 1}}
    return algebra_from_table("K+tK", Z2, ["1", "t"], [(0,), (1,)], products, {"1": 1})


def _power_label(prefix: str, i: int) -> str:
    if i == 0:
        return prefix or "1"
    return f"{prefix}x" if i == 1 else f"{prefix}x{i}"


def truncated_polynomial(m: int, group: FiniteAbelianGroup = Z2) -> GradedAlgebra:
    """K[x]/(x^m) with the trivial grading."""
    if m < 1:
        raise BadParams(f"truncated polynomial algebra needs m >= 1, got {m}")
    labels = [_power_label("", i) for i in range(m)]
    products = {(labels[i], labels[j]): {labels[i + j]: 1} for i in range(m) for j in range(m) if i + j < m}
    return algebra_from_table(f"K[x]/(x^{m})", group, labels, [group.identity] * m, products, {"1": 1})


def cyclic_polynomial_quotient(n: int, m: int) -> GradedAlgebra:
    """K[x]/(x^m) graded by Z_n through the exponent of x."""
    if n < 1 or m < 1:
        raise BadParams(f"cyclic polynomial quotient needs n, m >= 1, got n={n}, m={m}")
    group = FiniteAbelianGroup.cyclic(n)
    labels = [_power_label("", i) for i in range(m)]
    products = {(labels[i], labels[j]): {labels[i + j]: 1} for i in range(m) for j in range(m) if i + j < m}
    grades = [(i % n,) for i in range(m)]
    return algebra_from_table(f"K[x]/(x^{m}) over Z{n}", group, labels, grades, products, {"1": 1})


def poly_quotient(m: int) -> GradedAlgebra:
    """K[x]/(x^m) ⊕ tK[x]/(x^m) with t odd and t² = 1."""
    if m < 1:
        raise BadParams(f"poly-quotient needs m >= 1, got {m}")
    even = [_power_label("", i) for i in range(m)]
    odd = [_power_label("t", i) for i in range(m)]
    products: Dict[Tuple[str, str], Dict[str, Coefficient]] = {}
    for i in range(m):
        for j in range(m):
            if i + j >= m:
                continue
            products[(even[i], even[j])] = {even[i + j]: 1}
            products[(even[i], odd[j])] = {odd[i + j]: 1}
            products[(odd[i], even[j])] = {odd[i + j]: 1}
            products[(odd[i], odd[j])] = {even[i + j]: 1}
    grades = [(0,)] * m + [(1,)] * m
    return algebra_from_table(f"K[x,t]/(x^{m},t^2-1)", Z2, even + odd, grades, products, {"1": 1})


def direct_sum(a: GradedAlgebra, b: GradedAlgebra) -> GradedAlgebra:
    """A ⊕ B with componentwise product; basis labels get the suffixes _1 and _2."""
    if a.group != b.group:
        raise GroupMismatch(f"cannot add a {a.group}-graded and a {b.group}-graded algebra")
    offset = a.dim
    labels = tuple(f"{x}_1" for x in a.basis_labels) + tuple(f"{x}_2" for x in b.basis_labels)
    structure: Structure = dict(a.structure)
    for (i, j), prod in b.structure.items():
        structure[(i + offset, j + offset)] = {k + offset: x for k, x in prod.items()}
    unit = dict(a.unit)
    unit.update({k + offset: x for k, x in b.unit.items()})
    return GradedAlgebra(a.group, labels, a.grades + b.grades, structure, unit, f"({a.name})+({b.name})")


def tensor_trivial(a: GradedAlgebra, w: GradedAlgebra) -> GradedAlgebra:
    """A ⊗ W for a trivially graded W; the pair (i, j) has the degree of the A-factor."""
    for j, g in enumerate(w.grades):
        if any(g):
            raise NotTriviallyGraded(w.basis_labels[j])
    dw = w.dim

    def pair(i: int, j: int) -> int:
        return i * dw + j

    labels = tuple(f"{x}*{y}" for x in a.basis_labels for y in w.basis_labels)
    grades = tuple(g for g in a.grades for _ in range(dw))
    structure: Structure = {}
    for (i1, i2), pa in a.structure.items():
        for (j1, j2), pw in w.structure.items():
            structure[(pair(i1, j1), pair(i2, j2))] = {
                pair(k, m): x * y for k, x in pa.items() for m, y in pw.items()
            }
    unit = {pair(k, m): x * y for k, x in a.unit.items() for m, y in w.unit.items()}
    return GradedAlgebra(a.group, labels, grades, structure, unit, f"{a.name}⊗{w.name}")


def r_envelope(r: GradedAlgebra, b: GradedAlgebra, name: Optional[str] = None) -> GradedAlgebra:
    """The R-envelope (R_0 ⊗ B_0) ⊕ (R_1 ⊗ B_1) of two Z2-graded algebras, ordered by (R index, B index)."""
    if not (r.group.is_z2() and b.group.is_z2()):
        raise GroupMismatch(f"envelopes need Z2-graded factors, got {r.group} and {b.group}")
    pairs: List[Tuple[int, int]] = [
        (i, j) for i in range(r.dim) for j in range(b.dim) if r.grades[i] == b.grades[j]
    ]
    index = {p: n for n, p in enumerate(pairs)}
    labels = tuple(f"{r.basis_labels[i]}.{b.basis_labels[j]}" for i, j in pairs)
    grades = tuple(r.grades[i] for i, _ in pairs)
    by_left: Dict[int, List[Tuple[int, int]]] = {}
    for n, (i, j) in enumerate(pairs):
        by_left.setdefault(i, []).append((n, j))
    structure: Structure = {}
    for (i1, i2), pr in r.structure.items():
        for n1, j1 in by_left.get(i1, []):
            for n2, j2 in by_left.get(i2, []):
                pb = b.structure.get((j1, j2))
                if not pb:
                    continue
                out: Dict[int, Fraction] = {}
                for k, x in pr.items():
                    for m, y in pb.items():
                        target = index.get((k, m))
                        if target is None:
                            raise InvariantViolation(
                                f"envelope product leaves the parity-matched part at "
                                f"({r.basis_labels[k]}, {b.basis_labels[m]}); is the input graded?"
                            )
                        out[target] = out.get(target, Fraction(0)) + x * y
                structure[(n1, n2)] = out
    unit: Dict[int, Fraction] = {}
    for k, x in r.unit.items():
        for m, y in b.unit.items():
            target = index.get((k, m))
            if target is not None:
                unit[target] = x * y
    return GradedAlgebra(Z2, labels, grades, structure, unit, name or f"{r.name}({b.name})")


def _cocycle_value(alpha: Cocycle, g: GroupElement, h: GroupElement) -> Fraction:
    value = alpha(g, h) if callable(alpha) else alpha.get((g, h), 1)
    return Fraction(value)


def twisted_group_algebra(group: FiniteAbelianGroup, alpha: Cocycle) -> GradedAlgebra:
    """
    K^alpha G with basis X_g and X_g X_h = alpha(g, h) X_{g+h}.

    A mapping cocycle defaults to 1 on missing pairs. The 2-cocycle law is checked on every triple.
    """
    elements = group.elements()
    table = {(g, h): _cocycle_value(alpha, g, h) for g in elements for h in elements}
    for (g, h), value in table.items():
        if value == 0:
            raise BadParams(f"cocycle value at ({g}, {h}) is zero")
    for g in elements:
        for h in elements:
            for k in elements:
                lhs = table[(g, h)] * table[(group.add(g, h), k)]
                rhs = table[(h, k)] * table[(g, group.add(h, k))]
                if lhs != rhs:
                    raise CocycleLawViolated((g, h, k))

    def label(g: GroupElement) -> str:
        return "X" + "_".join(str(c) for c in g)

    labels = [label(g) for g in elements]
    products = {(label(g), label(h)): {label(group.add(g, h)): table[(g, h)]} for g in elements for h in elements}
    zero = group.identity
    unit = {label(zero): 1 / table[(zero, zero)]}
    algebra = algebra_from_table(f"K^a[{group}]", group, labels, elements, products, unit)
    return algebra


def anticommuting_z2z2_cocycle(g: GroupElement, h: GroupElement) -> int:
    """alpha(g, h) = (-1)^(g_2 h_1): the two generators of Z2xZ2 anticommute in K^alpha G."""
    return -1 if (g[1] * h[0]) % 2 else 1


def twisted_z2z2() -> GradedAlgebra:
    return twisted_group_algebra(FiniteAbelianGroup((2, 2)), anticommuting_z2z2_cocycle).renamed("K^a[Z2xZ2]")


def _matrix_unit_label(i: int, j: int, n: int) -> str:
    return f"E{i + 1}{j + 1}" if n < 10 else f"E{i + 1}_{j + 1}"


def _matrix_algebra(n: int, odd: Callable[[int, int], bool], name: str) -> GradedAlgebra:
    labels = [_matrix_unit_label(i, j, n) for i in range(n) for j in range(n)]
    grades = [(1,) if odd(i, j) else (0,) for i in range(n) for j in range(n)]
    products = {
        (_matrix_unit_label(i, j, n), _matrix_unit_label(j, k, n)): {_matrix_unit_label(i, k, n): 1}
        for i in range(n)
        for j in range(n)
        for k in range(n)
    }
    unit = {_matrix_unit_label(i, i, n): 1 for i in range(n)}
    return algebra_from_table(name, Z2, labels, grades, products, unit)


def wall_fixture(kind: str, n: Optional[int] = None, k: Optional[int] = None, l: Optional[int] = None) -> GradedAlgebra:
    """
    Graded simple Z2-algebras: A1 = M_n(K) trivially graded, A2 = M_{k,l} with block grading,
    A3 = M_n(K ⊕ cK) with c² = 1.
    """
    kind = kind.upper()
    if kind == "A1":
        if n is None or n < 1:
            raise BadParams(f"wall A1 needs n >= 1, got {n}")
        return _matrix_algebra(n, lambda i, j: False, f"M{n}(K)")
    if kind == "A2":
        if k is None or l is None or not k >= l > 0:
            raise BadParams(f"wall A2 needs k >= l > 0, got k={k}, l={l}")
        size = k + l
        return _matrix_algebra(size, lambda i, j: (i < k) != (j < k), f"M{k},{l}(K)")
    if kind == "A3":
        if n is None or n < 1:
            raise BadParams(f"wall A3 needs n >= 1, got {n}")
        return tensor_trivial(k_plus_ck(1), _matrix_algebra(n, lambda i, j: False, f"M{n}(K)")).renamed(
            f"M{n}(K+cK)"
        )
    raise BadParams(f"unknown Wall type {kind!r}; expected A1, A2 or A3")
