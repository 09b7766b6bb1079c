from __future__ import annotations

import allure
import pytest

from gradealg.constructions import k_plus_ck, odd_nilpotent, poly_quotient, truncated_polynomial, wall_fixture
from gradealg.grassmann import materialize
from gradealg.radical import is_two_sided_ideal, jacobson_radical, left_traces, nilpotency_index


@allure.feature("radical")
@pytest.mark.parametrize("n", range(0, 7))
def test_grassmann_radical_is_everything_but_the_unit(n: int) -> None:
    e = materialize(n)
    radical = jacobson_radical(e)
    assert radical.dim == 2**n - 1
    assert radical.component_dim((0,)) == (2 ** (n - 1) - 1 if n else 0)
    assert not radical.space.contains(e.one())
    if n <= 4:
        # every basis element of J is nilpotent, and J is an ideal
        assert all(nilpotency_index(x) > 0 for x in radical.space.basis())
        assert is_two_sided_ideal(radical.space)


@allure.feature("radical")
@pytest.mark.parametrize(
    "algebra", [k_plus_ck(1), k_plus_ck(-1), wall_fixture("A1", n=2), wall_fixture("A3", n=1)], ids=lambda a: a.name
)
def test_semisimple_fixtures_have_zero_radical(algebra) -> None:
    assert jacobson_radical(algebra).dim == 0


@allure.feature("radical")
def test_nilpotent_parts() -> None:
    radical = jacobson_radical(truncated_polynomial(2))
    assert radical.dim == 1
    (x,) = radical.space.basis()
    assert str(x) == "1/1 x"
    assert nilpotency_index(x) == 2

    t_radical = jacobson_radical(odd_nilpotent())
    assert t_radical.dim == 1 and t_radical.component_dim((1,)) == 1

    p = jacobson_radical(poly_quotient(3))
    assert p.dim == 4
    assert p.component_dim((0,)) == 2 and p.component_dim((1,)) == 2


@allure.feature("radical")
def test_nilpotency_index_of_non_nilpotent_elements() -> None:
    a = k_plus_ck(1)
    assert nilpotency_index(a.one()) == 0
    assert nilpotency_index(a.basis_element(1)) == 0
    assert nilpotency_index(a.zero()) == 1


@allure.feature("radical")
def test_left_traces() -> None:
    assert left_traces(materialize(2)) == [4, 0, 0, 0]
    assert left_traces(k_plus_ck(1)) == [2, 0]
