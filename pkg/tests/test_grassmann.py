from __future__ import annotations

import time

import allure
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradealg.algebra import GradedMap, is_graded_homomorphism
from gradealg.constructions import cyclic_polynomial_quotient, k_plus_ck, odd_nilpotent
from gradealg.errors import GroupMismatch, SizeMismatch, TooLarge
from gradealg.grassmann import (
    EnvelopeSpec,
    GrassmannElement,
    blade_from_indices,
    blade_grade,
    blade_label,
    blade_parity,
    blade_product,
    blade_products_batch,
    envelope,
    grassmann_multiply,
    materialize,
    naive_blade_product,
    random_blades,
    reordering_sign,
    to_materialized,
    truncation_bound,
)

blades64 = st.integers(min_value=0, max_value=(1 << 64) - 1)


def elements(n: int) -> st.SearchStrategy[GrassmannElement]:
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(st.integers(0, (1 << n) - 1), coeffs, max_size=5).map(lambda t: GrassmannElement(n, t))


@allure.feature("grassmann")
@allure.story("blades")
def test_blade_examples() -> None:
    e1, e2, e3 = (blade_from_indices([i]) for i in (1, 2, 3))
    assert blade_product(e1, e2) == (1, e1 | e2)
    assert blade_product(e2, e1) == (-1, e1 | e2)
    assert blade_product(e1, e1) is None
    assert blade_product(e1 | e3, e2) == (-1, e1 | e2 | e3)
    assert blade_label(0) == "1" and blade_label(e1 | e3) == "e1e3"
    assert (blade_grade(0), blade_grade(e1 | e2 | e3)) == (0, 3)
    assert (blade_parity(e1 | e3), blade_parity(e1 | e2 | e3)) == (0, 1)
    with pytest.raises(SizeMismatch):
        blade_from_indices([65])


@allure.feature("grassmann")
@allure.story("blades")
@settings(max_examples=300, deadline=None)
@given(blades64, blades64)
def test_blade_sign_matches_the_transposition_count(a: int, b: int) -> None:
    assert blade_product(a, b) == naive_blade_product(a, b)


@allure.feature("grassmann")
@allure.story("blades")
@settings(max_examples=200, deadline=None)
@given(blades64, blades64)
def test_blade_sign_law(a: int, b: int) -> None:
    # disjoint blades commute up to (-1)^(|a| |b|)
    if a & b:
        return
    expected = -1 if (blade_grade(a) * blade_grade(b)) % 2 else 1
    assert reordering_sign(a, b) * reordering_sign(b, a) == expected


@allure.feature("grassmann")
@allure.story("blades")
@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(blades64, blades64), min_size=1, max_size=50))
def test_batch_kernel_matches_scalar_products(pairs: list[tuple[int, int]]) -> None:
    a = np.array([p[0] for p in pairs], dtype=np.uint64)
    b = np.array([p[1] for p in pairs], dtype=np.uint64)
    signs, masks = blade_products_batch(a, b)
    for (x, y), s, m in zip(pairs, signs.tolist(), masks.tolist()):
        expected = blade_product(x, y)
        assert (None if s == 0 else (s, m)) == expected


@allure.feature("grassmann")
@allure.story("blades")
def test_batch_kernel_shape_check() -> None:
    with pytest.raises(SizeMismatch):
        blade_products_batch(np.zeros(3, dtype=np.uint64), np.zeros(4, dtype=np.uint64))


@allure.feature("grassmann")
@allure.story("performance")
def test_million_products_in_e40_within_a_second() -> None:
    rng = np.random.default_rng(7)
    a = random_blades(rng, 40, 1_000_000)
    b = random_blades(rng, 40, 1_000_000)
    assert int(a.max()) < (1 << 40)
    start = time.perf_counter()
    signs, masks = blade_products_batch(a, b)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    sample = range(0, 1_000_000, 100)
    mismatches = 0
    for i in sample:
        expected = naive_blade_product(int(a[i]), int(b[i]))
        got = None if signs[i] == 0 else (int(signs[i]), int(masks[i]))
        mismatches += expected != got
    assert mismatches == 0


@allure.feature("grassmann")
@allure.story("multivectors")
@settings(max_examples=60, deadline=None)
@given(elements(4), elements(4), elements(4))
def test_multiplication_is_associative_and_distributive(x, y, z) -> None:
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@allure.feature("grassmann")
@allure.story("multivectors")
@settings(max_examples=40, deadline=None)
@given(elements(3), elements(3))
def test_multivectors_agree_with_the_materialized_algebra(x, y) -> None:
    assert to_materialized(grassmann_multiply(x, y)) == to_materialized(x) * to_materialized(y)


@allure.feature("grassmann")
@allure.story("multivectors")
def test_multivector_basics() -> None:
    e1 = GrassmannElement.generator(3, 1)
    e2 = GrassmannElement.generator(3, 2)
    assert e1 * e2 == -(e2 * e1)
    assert not e1 * e1
    assert e1 * GrassmannElement.one(3) == e1
    assert str(e1 * e2 + 2 * GrassmannElement.one(3)) == "2/1 1 + 1/1 e1e2"
    assert (e1 * e2).parities() == [0]
    assert GrassmannElement.blade(3, [1, 3], 5).terms == {0b101: 5}
    with pytest.raises(SizeMismatch):
        GrassmannElement(2, {0b100: 1})
    with pytest.raises(SizeMismatch):
        e1 + GrassmannElement.generator(4, 1)


@allure.feature("grassmann")
@allure.story("materialized")
def test_materialized_e2_product_table() -> None:
    e2 = materialize(2)
    assert e2.basis_labels == ("1", "e1", "e2", "e1e2")
    assert e2.grades == ((0,), (1,), (1,), (0,))
    for a in range(4):
        for b in range(4):
            expected = blade_product(a, b)
            got = e2.basis_product(a, b)
            assert got == ({} if expected is None else {expected[1]: expected[0]})


@allure.feature("grassmann")
@allure.story("materialized")
def test_materialize_limits() -> None:
    assert materialize(0).dim == 1
    with pytest.raises(TooLarge):
        materialize(13)
    with pytest.raises(SizeMismatch):
        materialize(-1)


@allure.feature("grassmann")
@allure.story("envelopes")
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_envelope_of_k_plus_ck_is_the_grassmann_algebra(n: int) -> None:
    env = envelope(EnvelopeSpec(k_plus_ck(1), n))
    e = materialize(n)
    assert env.dim == e.dim == 2**n
    assert env.component_dims() == e.component_dims()
    recover = GradedMap(env, e, tuple(e.basis()))
    assert is_graded_homomorphism(recover).holds


@allure.feature("grassmann")
@allure.story("envelopes")
def test_envelope_of_a_nilpotent_odd_part() -> None:
    env = envelope(EnvelopeSpec(odd_nilpotent(), 3))
    assert env.dim == 8
    e1t = env.element_from_labels({"e1.t": 1})
    e2t = env.element_from_labels({"e2.t": 1})
    assert (e1t * e2t).is_zero()


@allure.feature("grassmann")
@allure.story("envelopes")
def test_envelope_preconditions() -> None:
    with pytest.raises(SizeMismatch):
        EnvelopeSpec(k_plus_ck(1), 0)
    with pytest.raises(GroupMismatch):
        EnvelopeSpec(cyclic_polynomial_quotient(3, 2), 2)
    with pytest.raises(TooLarge):
        envelope(EnvelopeSpec(k_plus_ck(1), 13))
    assert truncation_bound(4) == 4
    with pytest.raises(SizeMismatch):
        truncation_bound(0)
