from __future__ import annotations

import allure
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradealg.constructions import k_plus_ck, twisted_z2z2, wall_fixture
from gradealg.errors import (
    DegreeMismatch,
    GalgSyntaxError,
    GroupMismatch,
    MultilinearityError,
    SearchBudgetExceeded,
    TooLarge,
)
from gradealg.grassmann import EnvelopeSpec, envelope, materialize
from gradealg.identities import (
    GradedVariable,
    MultilinearGradedPolynomial,
    compare_identity_spaces,
    evaluate,
    format_polynomial,
    grassmann_t_ideal_generators,
    identity_space,
    is_graded_identity,
    parse_polynomial,
    satisfies_grassmann_identities,
)

EVEN, ODD = (0,), (1,)
x1_odd, x2_odd = GradedVariable(1, ODD), GradedVariable(2, ODD)
x1_even, x2_even = GradedVariable(1, EVEN), GradedVariable(2, EVEN)

E3 = materialize(3)
E3_ODD = E3.indices_of_degree(ODD)
small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@allure.feature("identities")
@allure.story("grassmann identities")
@pytest.mark.parametrize("n", range(0, 7))
def test_grassmann_algebras_satisfy_the_generating_identities(n: int) -> None:
    verdict = satisfies_grassmann_identities(materialize(n))
    assert verdict.holds and verdict.failing is None


@allure.feature("identities")
@allure.story("grassmann identities")
def test_generators_of_the_grassmann_t_ideal() -> None:
    assert [str(g) for g in grassmann_t_ideal_generators()] == [
        "1/1 x1:0 x2:0 + -1/1 x2:0 x1:0",
        "1/1 x1:0 x1:1 + -1/1 x1:1 x1:0",
        "1/1 x1:1 x2:1 + 1/1 x2:1 x1:1",
    ]


@allure.feature("identities")
@allure.story("grassmann identities")
def test_algebras_outside_the_variety_fail_with_a_counterexample() -> None:
    verdict = satisfies_grassmann_identities(k_plus_ck(1))
    assert not verdict.holds
    assert verdict.failing == MultilinearGradedPolynomial.anticommutator(x1_odd, x2_odd)
    assert [str(e) for e in verdict.counterexample] == ["1/1 c", "1/1 c"]

    matrices = satisfies_grassmann_identities(wall_fixture("A1", n=2))
    assert matrices.failing == MultilinearGradedPolynomial.commutator(x1_even, x2_even)
    with pytest.raises(GroupMismatch):
        satisfies_grassmann_identities(twisted_z2z2())


@allure.feature("identities")
@allure.story("graded identities")
def test_a_bare_monomial_is_not_an_identity_of_e2() -> None:
    verdict = is_graded_identity(materialize(2), MultilinearGradedPolynomial.monomial([x1_odd, x2_odd]))
    assert not verdict.holds
    assert verdict.counterexample_labels() == ("1/1 e1", "1/1 e2")
    assert str(verdict.value) == "1/1 e1e2"
    zero = MultilinearGradedPolynomial((x1_odd, x2_odd), {})
    assert is_graded_identity(materialize(2), zero).holds


@allure.feature("identities")
@allure.story("identity spaces")
def test_identity_spaces_of_small_grassmann_algebras() -> None:
    anticommutator = MultilinearGradedPolynomial.anticommutator(x1_odd, x2_odd)
    assert len(identity_space(materialize(1), [ODD, ODD])) == 2
    for n in range(2, 6):
        assert identity_space(materialize(n), [ODD, ODD]) == [anticommutator]
        commutator = MultilinearGradedPolynomial.commutator(x1_even, x2_even)
        assert identity_space(materialize(n), [EVEN, EVEN]) == [commutator]
    assert identity_space(materialize(2), [EVEN, ODD]) == [
        MultilinearGradedPolynomial.commutator(x1_even, GradedVariable(2, ODD))
    ]


@allure.feature("identities")
@allure.story("identity spaces")
def test_three_odd_variables() -> None:
    # every product of three odd elements of E2 vanishes; in E3 the six orders agree up to sign
    assert len(identity_space(materialize(2), [ODD, ODD, ODD])) == 6
    assert len(identity_space(E3, [ODD, ODD, ODD])) == 5
    assert identity_space(materialize(0), [EVEN]) == []


@allure.feature("identities")
@allure.story("identity spaces")
@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(small_fractions, min_size=len(E3_ODD), max_size=len(E3_ODD)), min_size=3, max_size=3))
def test_identity_space_vanishes_on_homogeneous_elements(coefficients) -> None:
    values = [E3.element(dict(zip(E3_ODD, row))) for row in coefficients]
    for f in identity_space(E3, [ODD, ODD, ODD]):
        assert evaluate(f, E3, values).is_zero()


@allure.feature("identities")
@allure.story("identity spaces")
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_envelope_of_k_plus_ck_has_the_identities_of_e_n(n: int) -> None:
    comparison = compare_identity_spaces(envelope(EnvelopeSpec(k_plus_ck(1), n)), materialize(n), 3)
    assert comparison.equal
    assert comparison.verdict == "equal up to degree 3"
    assert len(comparison.dims) == 2 + 3 + 4


@allure.feature("identities")
@allure.story("identity spaces")
def test_identity_comparison_reports_the_first_difference() -> None:
    comparison = compare_identity_spaces(k_plus_ck(1), materialize(2), 2)
    assert not comparison.equal
    assert comparison.first_difference == (ODD, ODD)
    assert comparison.verdict == "differ at pattern (1, 1)"
    assert comparison.dims[-1] == ((ODD, ODD), 1, 1)
    assert comparison.to_dict()["equal_up_to_degree"] is False
    with pytest.raises(GroupMismatch):
        compare_identity_spaces(twisted_z2z2(), materialize(2), 2)
    with pytest.raises(TooLarge):
        compare_identity_spaces(k_plus_ck(1), materialize(2), 6)


@allure.feature("identities")
@allure.story("polynomials")
def test_polynomial_literals() -> None:
    anticommutator = MultilinearGradedPolynomial.anticommutator(x1_odd, x2_odd)
    assert parse_polynomial("1/1 x1:1 x2:1 + 1/1 x2:1 x1:1") == anticommutator
    assert parse_polynomial("x2:1 x1:1 + x1:1 x2:1") == anticommutator
    commutator = MultilinearGradedPolynomial.commutator(x1_even, x2_even)
    assert format_polynomial(commutator) == "1/1 x1:0 x2:0 + -1/1 x2:0 x1:0"
    assert parse_polynomial(format_polynomial(commutator)) == commutator
    assert format_polynomial(commutator - commutator) == "0"
    assert (anticommutator + anticommutator).terms == {(0, 1): 2, (1, 0): 2}
    assert parse_polynomial("3/2 x1:0,1").pattern == ((0, 1),)


@allure.feature("identities")
@allure.story("polynomials")
@pytest.mark.parametrize(
    "literal, error",
    [
        ("", GalgSyntaxError),
        ("x1:1 + ", GalgSyntaxError),
        ("2 y1:1", GalgSyntaxError),
        ("1/1", GalgSyntaxError),
        ("x1:1 x1:1", MultilinearityError),
        ("x1:1 x2:1 + x1:1", MultilinearityError),
        ("x1:1 x2:1 + x1:1 x3:1", MultilinearityError),
    ],
)
def test_bad_polynomial_literals(literal: str, error: type) -> None:
    with pytest.raises(error):
        parse_polynomial(literal)


@allure.feature("identities")
@allure.story("polynomials")
def test_polynomial_invariants() -> None:
    with pytest.raises(MultilinearityError):
        MultilinearGradedPolynomial((x1_odd, x2_odd), {(0, 0): 1})
    with pytest.raises(MultilinearityError):
        GradedVariable(0, ODD)
    with pytest.raises(MultilinearityError):
        MultilinearGradedPolynomial.commutator(x1_odd, x2_odd) + MultilinearGradedPolynomial.commutator(
            x1_even, x2_even
        )
    with pytest.raises(TooLarge):
        MultilinearGradedPolynomial.monomial([GradedVariable(i, EVEN) for i in range(1, 10)])
    with pytest.raises(TooLarge):
        identity_space(E3, [ODD] * 6)
    with pytest.raises(MultilinearityError):
        identity_space(E3, [])


@allure.feature("identities")
@allure.story("evaluation")
def test_evaluation() -> None:
    a = materialize(2)
    e1 = a.element_from_labels({"e1": 1})
    e2 = a.element_from_labels({"e2": 1})
    anticommutator = MultilinearGradedPolynomial.anticommutator(x1_odd, x2_odd)
    assert evaluate(anticommutator, a, [e1, e2]).is_zero()
    monomial = MultilinearGradedPolynomial.monomial([x1_odd, x2_odd], order=[1, 0], coeff=3)
    assert str(evaluate(monomial, a, {x1_odd: e1, x2_odd: e2})) == "-3/1 e1e2"
    with pytest.raises(DegreeMismatch):
        evaluate(anticommutator, a, [e1])
    with pytest.raises(DegreeMismatch):
        evaluate(anticommutator, a, [e1, a.one()])
    with pytest.raises(DegreeMismatch):
        evaluate(anticommutator, a, {x1_odd: e1})
    with pytest.raises(DegreeMismatch):
        evaluate(anticommutator, a, [e1, E3.element_from_labels({"e2": 1})])


@allure.feature("identities")
@allure.story("graded identities")
def test_search_budget() -> None:
    with pytest.raises(SearchBudgetExceeded) as excinfo:
        is_graded_identity(materialize(4), MultilinearGradedPolynomial.anticommutator(x1_odd, x2_odd), budget=10)
    assert (excinfo.value.needed, excinfo.value.bound) == (128, 10)
    with pytest.raises(SearchBudgetExceeded):
        identity_space(materialize(4), [ODD, ODD, ODD], budget=100)


@allure.feature("identities")
@allure.story("graded identities")
def test_threaded_identity_search(monkeypatch) -> None:
    monkeypatch.setenv("GRADEALG_THREADS", "3")
    verdict = is_graded_identity(materialize(3), MultilinearGradedPolynomial.monomial([x1_odd, x2_odd]))
    assert verdict.counterexample_labels() == ("1/1 e1", "1/1 e2")
