from __future__ import annotations

from fractions import Fraction

import allure
import pytest

from gradealg.constructions import k_plus_ck, twisted_group_algebra, twisted_z2z2
from gradealg.errors import DuplicateBasisLabel, GalgSyntaxError, ValidationError
from gradealg.galg import (
    load_algebra,
    load_elements,
    parse_algebra,
    parse_cocycle,
    parse_elements,
    save_algebra,
    serialize_algebra,
)
from gradealg.grassmann import materialize
from gradealg.groups import FiniteAbelianGroup

K_PLUS_CK = [
    "algebra K+cK",
    "group Z2",
    "basis 1 c  # unit first",
    "grade 1 0",
    "grade c 1",
    "unit 1/1 1",
    "sc 1 1 = 1/1 1",
    "sc 1 c = 1/1 c",
    "sc c 1 = 1/1 c",
    "sc c c = 1/1 1",
]


def galg(*replacements: tuple[int, str]) -> str:
    """K+cK with some (1-based) lines replaced; an empty replacement drops the line's content."""
    lines = list(K_PLUS_CK)
    for number, text in replacements:
        lines[number - 1] = text
    return "\n".join(lines) + "\n"


@allure.feature("galg")
@allure.story("parse")
def test_parse_k_plus_ck() -> None:
    algebra = parse_algebra(galg())
    assert algebra.name == "K+cK"
    assert algebra.basis_labels == ("1", "c")
    assert algebra.grades == ((0,), (1,))
    assert algebra == k_plus_ck(1)
    c = algebra.element_from_labels({"c": 1})
    assert c * c == algebra.one()


@allure.feature("galg")
@allure.story("parse")
def test_integer_coefficients_and_sums() -> None:
    algebra = parse_algebra(galg((10, "sc c c = 2 1"), (7, "sc 1 1 = 1 + 0/1 c")))
    c = algebra.element_from_labels({"c": 1})
    assert str(c * c) == "2/1 1"
    assert algebra.basis_product(0, 0) == {0: 1}


@allure.feature("galg")
@allure.story("validation")
def test_grading_failure_points_at_the_product() -> None:
    with pytest.raises(ValidationError) as excinfo:
        parse_algebra(galg((10, "sc c c = 1/1 c")))
    assert excinfo.value.witness == ("c", "c", "c")
    assert excinfo.value.line == 10
    assert "grading law" in str(excinfo.value)
    unchecked = parse_algebra(galg((10, "sc c c = 1/1 c")), check=False)
    assert unchecked.basis_product(1, 1) == {1: 1}


@allure.feature("galg")
@allure.story("validation")
def test_unit_failure_points_at_the_unit() -> None:
    with pytest.raises(ValidationError) as excinfo:
        parse_algebra(galg((6, "unit 1/1 c")))
    assert excinfo.value.line == 6
    assert excinfo.value.witness is not None and excinfo.value.witness[0] == "1"


@allure.feature("galg")
@allure.story("syntax")
@pytest.mark.parametrize(
    "replacement, line",
    [
        ((5, ""), 3),
        ((5, "grade c 2"), 5),
        ((5, "grade c 0,1"), 5),
        ((5, "grade d 1"), 5),
        ((4, "grade c 1"), 5),
        ((2, "group Z2xQ"), 2),
        ((2, "orbit Z2"), 2),
        ((10, "sc c c = 0.5 1"), 10),
        ((10, "sc c c = 1/0 1"), 10),
        ((10, "sc c d = 1/1 1"), 10),
        ((10, "sc c c 1/1 1"), 10),
        ((10, "sc 1 1 = 1/1 1"), 10),
        ((10, "sc c c = 1/1 x"), 10),
        ((6, "unit 1/1 1 1"), 6),
        ((6, ""), 10),
    ],
)
def test_syntax_errors_carry_the_line(replacement: tuple[int, str], line: int) -> None:
    with pytest.raises(GalgSyntaxError) as excinfo:
        parse_algebra(galg(replacement))
    assert excinfo.value.line == line
    assert f"line {line}" in str(excinfo.value)


@allure.feature("galg")
@allure.story("syntax")
def test_directives_out_of_order() -> None:
    with pytest.raises(GalgSyntaxError, match="before 'basis'"):
        parse_algebra("group Z2\ngrade 1 0\n")
    with pytest.raises(GalgSyntaxError, match="before 'group'"):
        parse_algebra("basis 1\nunit 1/1 1\n")
    with pytest.raises(GalgSyntaxError, match="missing 'group'"):
        parse_algebra("")


@allure.feature("galg")
@allure.story("syntax")
def test_duplicate_basis_label() -> None:
    with pytest.raises(DuplicateBasisLabel) as excinfo:
        parse_algebra(galg((3, "basis 1 c c")))
    assert (excinfo.value.label, excinfo.value.line) == ("c", 3)


@allure.feature("galg")
@allure.story("round trip")
def test_corpus_round_trips(corpus) -> None:
    for algebra in corpus:
        text = serialize_algebra(algebra)
        parsed = parse_algebra(text)
        assert parsed == algebra, algebra.name
        assert parsed.name == algebra.name
        assert serialize_algebra(parsed) == text


@allure.feature("galg")
@allure.story("round trip")
def test_serialized_form_is_canonical() -> None:
    text = serialize_algebra(parse_algebra(galg((10, "sc c c = 1 1"))))
    assert text.splitlines() == [line.split("  #")[0] for line in K_PLUS_CK]


@allure.feature("galg")
@allure.story("files")
def test_files_and_element_lists(tmp_path) -> None:
    e2 = materialize(2)
    path = tmp_path / "e2.galg"
    save_algebra(e2, path)
    assert load_algebra(path) == e2

    elements_path = tmp_path / "gens.txt"
    elements_path.write_text("1/1 e1 + 2 e2\n# a comment\n\ne1e2\n", encoding="utf-8")
    first, second = load_elements(elements_path, e2)
    assert str(first) == "1/1 e1 + 2/1 e2"
    assert str(second) == "1/1 e1e2"
    with pytest.raises(GalgSyntaxError) as excinfo:
        parse_elements("e1\ne3\n", e2)
    assert excinfo.value.line == 2


@allure.feature("galg")
@allure.story("cocycles")
def test_cocycle_table_builds_the_twisted_group_algebra() -> None:
    z2z2 = FiniteAbelianGroup((2, 2))
    text = "# X_b X_a = -X_a X_b\n0,1 1,0 -1\n0,1 1,1 -1/1\n1,1 1,0 -1\n\n1,1 1,1 -1  # last pair\n"
    table = parse_cocycle(text, z2z2)
    assert len(table) == 4
    assert table[((0, 1), (1, 0))] == Fraction(-1)
    assert twisted_group_algebra(z2z2, table) == twisted_z2z2()


@allure.feature("galg")
@allure.story("cocycles")
@pytest.mark.parametrize(
    "text, line",
    [
        ("0,1 1,0 -1\n0,1 1,0\n", 2),
        ("0,1 1,0 -1\n0,1 1,0 1\n", 2),
        ("0,2 1,0 -1\n", 1),
        ("\n\n1 1,0 -1\n", 3),
        ("0,1 1,0 x\n", 1),
    ],
)
def test_cocycle_syntax_errors_carry_the_line(text: str, line: int) -> None:
    with pytest.raises(GalgSyntaxError) as excinfo:
        parse_cocycle(text, FiniteAbelianGroup((2, 2)))
    assert excinfo.value.line == line
