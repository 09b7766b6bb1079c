"""
The ``.galg`` algebra file format.

Line oriented, ``#`` starts a comment::

    algebra K+cK
    group Z2
    basis 1 c
    grade 1 0
    grade c 1
    unit 1/1 1
    sc 1 1 = 1/1 1
    sc 1 c = 1/1 c
    sc c 1 = 1/1 c
    sc c c = 1/1 1

Omitted ``sc`` pairs multiply to zero. Coefficients are ``p/q`` (an integer ``p`` is accepted);
serialization always writes the canonical ``p/q`` form, so parse and serialize round-trip.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union
import logging
import re

from .algebra import Element, GradedAlgebra, Structure, validate
from .errors import BadParams, DuplicateBasisLabel, GalgSyntaxError, ValidationError
from .groups import FiniteAbelianGroup, GroupElement, format_element
from .linalg import format_scalar

logger = logging.getLogger(__name__)

_COEFF = re.compile(r"^[+-]?\d+(/\d+)?$")
_LABEL = re.compile(r"^[^\s#=+]+$")

CocycleValues = Dict[Tuple[GroupElement, GroupElement], Fraction]


def parse_coefficient(token: str, line: int) -> Fraction:
    if not _COEFF.match(token):
        raise GalgSyntaxError(line, f"bad coefficient {token!r}; expected p/q")
    if "/" in token and int(token.split("/")[1]) == 0:
        raise GalgSyntaxError(line, f"zero denominator in {token!r}")
    return Fraction(token)


def _parse_terms(text: str, index: Dict[str, int], line: int) -> Dict[int, Fraction]:
    """``<coeff> <label> [+ <coeff> <label>]...``; a bare label has coefficient 1."""
    out: Dict[int, Fraction] = {}
    for chunk in re.split(r"\s\+\s", text.strip()):
        tokens = chunk.split()
        if len(tokens) == 1:
            coeff, label = Fraction(1), tokens[0]
        elif len(tokens) == 2:
            coeff, label = parse_coefficient(tokens[0], line), tokens[1]
        else:
            raise GalgSyntaxError(line, f"bad term {chunk!r}; expected '<coeff> <label>'")
        if label not in index:
            raise GalgSyntaxError(line, f"unknown basis label {label!r}")
        i = index[label]
        out[i] = out.get(i, Fraction(0)) + coeff
    return {i: x for i, x in out.items() if x}


def _parse_degree(text: str, group: FiniteAbelianGroup, line: int) -> GroupElement:
    try:
        comps = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise GalgSyntaxError(line, f"bad degree {text!r}") from None
    if len(comps) != len(group.factor_orders):
        raise GalgSyntaxError(line, f"degree {text!r} does not belong to {group}")
    if any(not 0 <= c < n for c, n in zip(comps, group.factor_orders)):
        raise GalgSyntaxError(line, f"degree {text!r} is not reduced modulo {group}")
    return comps


class _Parser:
    def __init__(self) -> None:
        self.name = "A"
        self.group: Optional[FiniteAbelianGroup] = None
        self.labels: List[str] = []
        self.index: Dict[str, int] = {}
        self.basis_line = 0
        self.grades: Dict[str, GroupElement] = {}
        self.unit: Optional[Dict[int, Fraction]] = None
        self.unit_line: Optional[int] = None
        self.structure: Structure = {}
        self.sc_lines: Dict[Tuple[int, int], int] = {}

    def feed(self, raw: str, line: int) -> None:
        text = raw.split("#", 1)[0].strip()
        if not text:
            return
        keyword, _, rest = text.partition(" ")
        rest = rest.strip()
        handler = getattr(self, f"_on_{keyword}", None)
        if handler is None:
            raise GalgSyntaxError(line, f"unknown directive {keyword!r}")
        handler(rest, line)

    def _on_algebra(self, rest: str, line: int) -> None:
        if not rest:
            raise GalgSyntaxError(line, "algebra needs a name")
        self.name = rest

    def _on_group(self, rest: str, line: int) -> None:
        if self.group is not None:
            raise GalgSyntaxError(line, "group declared twice")
        try:
            self.group = FiniteAbelianGroup.parse(rest)
        except BadParams as exc:
            raise GalgSyntaxError(line, str(exc)) from None

    def _on_basis(self, rest: str, line: int) -> None:
        if self.labels:
            raise GalgSyntaxError(line, "basis declared twice")
        labels = rest.split()
        if not labels:
            raise GalgSyntaxError(line, "empty basis")
        for label in labels:
            if not _LABEL.match(label):
                raise GalgSyntaxError(line, f"bad basis label {label!r}")
            if label in self.index:
                raise DuplicateBasisLabel(label, line)
            self.index[label] = len(self.labels)
            self.labels.append(label)
        self.basis_line = line

    def _require(self, line: int, what: str) -> FiniteAbelianGroup:
        if self.group is None:
            raise GalgSyntaxError(line, f"{what} before 'group'")
        if not self.labels:
            raise GalgSyntaxError(line, f"{what} before 'basis'")
        return self.group

    def _on_grade(self, rest: str, line: int) -> None:
        group = self._require(line, "grade")
        parts = rest.split()
        if len(parts) != 2:
            raise GalgSyntaxError(line, "expected 'grade <label> <g1,g2,...>'")
        label, degree = parts
        if label not in self.index:
            raise GalgSyntaxError(line, f"unknown basis label {label!r}")
        if label in self.grades:
            raise GalgSyntaxError(line, f"grade of {label!r} given twice")
        self.grades[label] = _parse_degree(degree, group, line)

    def _on_unit(self, rest: str, line: int) -> None:
        self._require(line, "unit")
        if self.unit is not None:
            raise GalgSyntaxError(line, "unit declared twice")
        self.unit = _parse_terms(rest, self.index, line)
        self.unit_line = line

    def _on_sc(self, rest: str, line: int) -> None:
        self._require(line, "sc")
        lhs, eq, rhs = rest.partition("=")
        pair = lhs.split()
        if not eq or len(pair) != 2 or not rhs.strip():
            raise GalgSyntaxError(line, "expected 'sc <label> <label> = <coeff> <label> [+ ...]'")
        for label in pair:
            if label not in self.index:
                raise GalgSyntaxError(line, f"unknown basis label {label!r}")
        key = (self.index[pair[0]], self.index[pair[1]])
        if key in self.structure:
            raise GalgSyntaxError(line, f"product {pair[0]} {pair[1]} given twice (first on line {self.sc_lines[key]})")
        self.structure[key] = _parse_terms(rhs, self.index, line)
        self.sc_lines[key] = line

    def build(self, last_line: int) -> GradedAlgebra:
        if self.group is None:
            raise GalgSyntaxError(last_line, "missing 'group'")
        if not self.labels:
            raise GalgSyntaxError(last_line, "missing 'basis'")
        missing = [label for label in self.labels if label not in self.grades]
        if missing:
            raise GalgSyntaxError(self.basis_line, f"no grade for {', '.join(missing)}")
        if self.unit is None:
            raise GalgSyntaxError(last_line, "missing 'unit'")
        return GradedAlgebra(
            group=self.group,
            basis_labels=tuple(self.labels),
            grades=tuple(self.grades[label] for label in self.labels),
            structure=self.structure,
            unit=self.unit,
            name=self.name,
        )

    def line_of(self, labels: Tuple[str, ...]) -> Optional[int]:
        if len(labels) >= 2 and labels[0] in self.index and labels[1] in self.index:
            return self.sc_lines.get((self.index[labels[0]], self.index[labels[1]]))
        return self.unit_line


def parse_algebra(text: str, check: bool = True) -> GradedAlgebra:
    """Parse and (by default) validate; validation failures point at the offending ``sc`` or ``unit`` line."""
    parser = _Parser()
    lines = text.splitlines()
    for number, raw in enumerate(lines, start=1):
        parser.feed(raw, number)
    algebra = parser.build(max(len(lines), 1))
    if check:
        report = validate(algebra)
        failure = report.first_failure()
        if failure is not None:
            law, witness = failure
            raise ValidationError(
                f"{algebra.name} violates the {law} at ({', '.join(witness)})", witness, parser.line_of(witness)
            )
    return algebra


def format_terms(algebra: GradedAlgebra, coeffs: Dict[int, Fraction]) -> str:
    return " + ".join(f"{format_scalar(x)} {algebra.basis_labels[i]}" for i, x in sorted(coeffs.items()))


def serialize_algebra(algebra: GradedAlgebra) -> str:
    lines = [
        f"algebra {algebra.name}",
        f"group {algebra.group}",
        "basis " + " ".join(algebra.basis_labels),
    ]
    lines += [f"grade {label} {format_element(g)}" for label, g in zip(algebra.basis_labels, algebra.grades)]
    lines.append(f"unit {format_terms(algebra, algebra.unit)}")
    labels = algebra.basis_labels
    for (i, j), prod in sorted(algebra.structure.items()):
        lines.append(f"sc {labels[i]} {labels[j]} = {format_terms(algebra, prod)}")
    return "\n".join(lines) + "\n"


def load_algebra(path: Union[str, Path], check: bool = True) -> GradedAlgebra:
    text = Path(path).read_text(encoding="utf-8")
    logger.debug("parsing %s", path)
    return parse_algebra(text, check=check)


def save_algebra(algebra: GradedAlgebra, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize_algebra(algebra), encoding="utf-8")


def parse_elements(text: str, algebra: GradedAlgebra) -> List[Element]:
    """One element expression per line over the basis labels of ``algebra``."""
    index = {label: i for i, label in enumerate(algebra.basis_labels)}
    out: List[Element] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append(algebra.element(_parse_terms(body, index, number)))
    return out


def load_elements(path: Union[str, Path], algebra: GradedAlgebra) -> List[Element]:
    return parse_elements(Path(path).read_text(encoding="utf-8"), algebra)


def parse_cocycle(text: str, group: FiniteAbelianGroup) -> CocycleValues:
    """
    A cocycle table, one ``<g> <h> <coeff>`` line per listed pair (``0,1 1,0 -1/1`` over Z2xZ2).

    Pairs that are not listed take the value 1; the cocycle law itself is checked when the twisted group
    algebra is built.
    """
    table: CocycleValues = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if len(parts) != 3:
            raise GalgSyntaxError(number, "expected '<g> <h> <coeff>'")
        g, h = (_parse_degree(part, group, number) for part in parts[:2])
        if (g, h) in table:
            raise GalgSyntaxError(number, f"cocycle value at ({parts[0]}, {parts[1]}) given twice")
        table[(g, h)] = parse_coefficient(parts[2], number)
    return table


def load_cocycle(path: Union[str, Path], group: FiniteAbelianGroup) -> CocycleValues:
    return parse_cocycle(Path(path).read_text(encoding="utf-8"), group)
