from __future__ import annotations

import pytest

import allure

from gradealg.errors import AggregateError, InvariantViolation
from gradealg.steps import aggregate_step, step
from tests.utils_allure import run_under_allure


@allure.feature("verification steps")
@allure.story("aggregate")
def test_aggregate_step_runs_all_children_and_fails_after() -> None:
    executed: list[str] = []
    with pytest.raises(AggregateError) as excinfo:
        with aggregate_step("verify chain"):
            executed.append("before-1")
            with step("phi_2^1"):
                executed.append("child-1-start")
                raise InvariantViolation("phi_2^1 is not injective")
            executed.append("after-1")
            with step("phi_3^1"):
                executed.append("child-2-start")
                raise ValueError("second")
            executed.append("after-2")
            with step("phi_3^3"):
                executed.append("child-3-start")
    message = str(excinfo.value)
    assert "2 exception(s)" in message
    assert "InvariantViolation: phi_2^1 is not injective" in message and "ValueError: second" in message
    assert [type(e) for e in excinfo.value.exceptions] == [InvariantViolation, ValueError]
    # All parts ran despite the failures in the first two children
    assert executed == ["before-1", "child-1-start", "after-1", "child-2-start", "after-2", "child-3-start"]


@allure.feature("verification steps")
@allure.story("aggregate")
def test_aggregate_all_passes() -> None:
    with aggregate_step("verify F_2"):
        with step("nu_2 is a graded homomorphism"):
            pass
        with step("nu_2 is bijective"):
            pass


@allure.feature("verification steps")
@allure.story("aggregate")
def test_nested_aggregate_failure_is_collected_by_the_parent() -> None:
    executed: list[str] = []
    with pytest.raises(AggregateError) as excinfo:
        with aggregate_step("outer"):
            with aggregate_step("inner"):
                with step("leaf"):
                    raise InvariantViolation("x")
            with step("sibling"):
                executed.append("sibling")
    assert executed == ["sibling"]
    (inner,) = excinfo.value.exceptions
    assert isinstance(inner, AggregateError) and inner.title == "inner"


@allure.feature("verification steps")
@allure.story("plain step")
def test_step_outside_aggregate_propagates() -> None:
    with pytest.raises(InvariantViolation, match="boom"):
        with step("single check"):
            raise InvariantViolation("boom")


@allure.feature("verification steps")
@allure.story("plain step")
def test_keyboard_interrupt_is_never_aggregated() -> None:
    with pytest.raises(KeyboardInterrupt):
        with aggregate_step("outer"):
            raise KeyboardInterrupt()


@allure.feature("verification steps")
@allure.story("allure results")
def test_allure_marks_failed_children_and_parent() -> None:
    code = (
        "import pytest\n"
        "from gradealg.errors import AggregateError\n"
        "from gradealg.steps import aggregate_step, step\n"
        "def test_case():\n"
        "    with pytest.raises(AggregateError):\n"
        "        with aggregate_step('A'):\n"
        "            with step('C1'):\n"
        "                pass\n"
        "            with step('C2'):\n"
        "                raise AssertionError('e2')\n"
        "            with step('C3'):\n"
        "                pass\n"
    )
    run = run_under_allure(code)
    assert run.exit_code == 0, run.output
    parent = run.only_test().steps[0]
    assert parent.name == "A" and parent.status in {"failed", "broken"}
    assert [s.status for s in parent.steps] == ["passed", "failed", "passed"]


@allure.feature("verification steps")
@allure.story("allure results")
def test_allure_results_for_a_verified_chain() -> None:
    code = (
        "from gradealg.grassmann import materialize\n"
        "from gradealg.structure import build_chain\n"
        "def test_case():\n"
        "    build_chain(materialize(3), 2)\n"
    )
    run = run_under_allure(code)
    assert run.exit_code == 0, run.output
    test = run.only_test()
    titles = [s.name for s in test.steps]
    assert "verify F_1 of E3" in titles and "verify the direct system of E3 up to 2" in titles
    assert all(s.status == "passed" for s in test.steps)
    chain_step = test.child("verify the direct system of E3 up to 2")
    assert "phi_2^1 phi_1^1 = phi_2^1" in [s.name for s in chain_step.steps]
