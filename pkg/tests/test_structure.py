from __future__ import annotations

from itertools import permutations

import allure
import pytest

from gradealg.algebra import identity_map, is_graded_homomorphism, is_injective
from gradealg.constructions import direct_sum, k_plus_ck, odd_nilpotent, twisted_z2z2
from gradealg.errors import BadParams, GroupMismatch, NoWitness, NotHomogeneous, PreconditionViolated, TooLarge
from gradealg.grassmann import EnvelopeSpec, envelope, materialize, truncation_bound
from gradealg.structure import (
    MAX_IDENTITY_DEGREE,
    build_chain,
    build_F_n,
    classify_subalgebra,
    embed_grassmann,
    reduce_generators,
    variety_equivalence_check,
)


def generators(algebra, *labels: str):
    return [algebra.element_from_labels({label: 1}) for label in labels]


@allure.feature("structure")
@allure.story("grassmann subalgebras")
def test_f_n_inside_a_bigger_grassmann_algebra() -> None:
    e5 = materialize(5)
    witness = build_F_n(e5, 3)
    assert [str(g) for g in witness.generators] == ["1/1 e1", "1/1 e2", "1/1 e3"]
    assert witness.f_n.basis_labels == ("1", "a1", "a2", "a1a2", "a3", "a1a3", "a2a3", "a1a2a3")
    assert witness.f_n.grades == materialize(3).grades
    assert str(witness.inclusion(witness.f_n.basis_element(7))) == "1/1 e1e2e3"
    assert witness.to_dict()["dim"] == 8


@allure.feature("structure")
@allure.story("grassmann subalgebras")
def test_f_n_in_an_envelope() -> None:
    env = envelope(EnvelopeSpec(k_plus_ck(1), 3))
    witness = build_F_n(env, 2)
    assert [str(g) for g in witness.generators] == ["1/1 e1.c", "1/1 e2.c"]
    assert is_graded_homomorphism(witness.nu).holds


@allure.feature("structure")
@allure.story("grassmann subalgebras")
def test_f_n_edge_cases() -> None:
    k = build_F_n(materialize(2), 0)
    assert k.f_n.dim == 1 and k.generators == ()
    t = build_F_n(odd_nilpotent(), 1)
    assert t.f_n.dim == 2
    with pytest.raises(NoWitness) as excinfo:
        build_F_n(odd_nilpotent(), 2)
    assert excinfo.value.degrees == [(1,), (1,)]
    with pytest.raises(NoWitness):
        build_F_n(materialize(2), 3)
    with pytest.raises(PreconditionViolated):
        build_F_n(k_plus_ck(1), 1)
    with pytest.raises(PreconditionViolated):
        build_F_n(twisted_z2z2(), 1)
    with pytest.raises(BadParams):
        build_F_n(materialize(2), -1)
    with pytest.raises(TooLarge):
        build_F_n(materialize(2), 13)


@allure.feature("structure")
@allure.story("grassmann subalgebras")
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_embedding_of_e_n(n: int) -> None:
    target = materialize(4)
    embedding = embed_grassmann(target, n)
    assert embedding.source.dim == 2**n
    assert is_graded_homomorphism(embedding).holds and is_injective(embedding)
    assert embedding(embedding.source.one()) == target.one()


@allure.feature("structure")
@allure.story("direct system")
def test_direct_system_of_e8() -> None:
    chain = build_chain(materialize(8), 6)
    assert chain.n_max == 6
    assert chain.checked_triples == 56
    assert len(chain.maps) == 21
    assert chain.phi(4, 4) == identity_map(chain.stage(4).f_n)
    phi = chain.phi(3, 1)
    assert phi.name == "phi_3^1"
    assert str(phi(chain.stage(1).f_n.basis_element(1))) == "1/1 a1"
    doc = chain.to_dict()
    assert doc["composition_triples_verified"] == 56 and len(doc["stages"]) == 6


@allure.feature("structure")
@allure.story("direct system")
def test_direct_system_needs_a_stage() -> None:
    with pytest.raises(BadParams):
        build_chain(materialize(2), 0)
    with pytest.raises(NoWitness):
        build_chain(materialize(2), 3)


@allure.feature("structure")
@allure.story("classification")
def test_type_ii_and_type_iii() -> None:
    e3 = materialize(3)
    report = classify_subalgebra(e3, generators(e3, "e1", "e1e2e3"))
    assert (report.type_tag, report.l, report.t_blocks) == ("III", 1, 1)
    assert report.witnesses == {"E_1": ["1/1 e1"], "T": ["1/1 e1e2e3"]}

    e4 = materialize(4)
    report = classify_subalgebra(e4, generators(e4, "e1", "e2", "e3"))
    assert (report.type_tag, report.n, report.q, report.l) == ("II", 3, 0, 3)
    assert report.odd_monomials[-1] == ((1, 2, 3), "1/1 e1e2e3")

    report = classify_subalgebra(e4, generators(e4, "e1", "e2e3e4"))
    assert (report.type_tag, report.l) == ("II", 2)

    report = classify_subalgebra(e3, generators(e3, "e1", "e2", "e1e2e3"))
    assert (report.type_tag, report.l, report.t_blocks) == ("III", 2, 1)
    assert report.witnesses["T"] == ["1/1 e1e2e3"]


@allure.feature("structure")
@allure.story("classification")
def test_type_iv_is_independent_of_generator_order() -> None:
    a = direct_sum(materialize(2), materialize(2))
    labels = ["e1_1", "e2_1", "e1_2", "e2_2"]
    for order in permutations(labels):
        report = classify_subalgebra(a, generators(a, *order))
        assert (report.type_tag, report.l, report.r, report.leftover_dim) == ("IV", 2, 1, 0), order
    report = classify_subalgebra(a, generators(a, *labels))
    assert report.witnesses["E_l"] == ["1/1 e1_1", "1/1 e2_1"]
    assert report.witnesses["E2+_1"] == ["1/1 e1_2", "1/1 e2_2"]
    assert report.witnesses["D"] == []


@allure.feature("structure")
@allure.story("classification")
def test_type_i_and_generator_reduction() -> None:
    e3 = materialize(3)
    report = classify_subalgebra(e3, generators(e3, "e1e2", "e2e3"))
    assert (report.type_tag, report.n, report.q, report.l) == ("I", 2, 2, 0)
    assert report.C_basis[0] == "1/1 1"

    kept, removed = reduce_generators(e3, generators(e3, "e1", "e2", "e1e2"))
    assert [str(g) for g in kept] == ["1/1 e1", "1/1 e2"]
    assert [str(g) for g in removed] == ["1/1 e1e2"]
    report = classify_subalgebra(e3, generators(e3, "e1", "e2", "e1e2"))
    assert (report.type_tag, report.n, report.removed) == ("II", 2, ["1/1 e1e2"])
    assert report.to_dict()["type"] == "II"


@allure.feature("structure")
@allure.story("classification")
def test_classification_preconditions() -> None:
    e2 = materialize(2)
    with pytest.raises(NotHomogeneous):
        classify_subalgebra(e2, [e2.element_from_labels({"1": 1, "e1": 1})])
    c = k_plus_ck(1)
    with pytest.raises(PreconditionViolated):
        classify_subalgebra(c, c.basis())


@allure.feature("structure")
@allure.story("variety equivalence")
def test_variety_equivalence_over_the_corpus(variety_corpus) -> None:
    expected = [False, True, True, True, True, True, False, True, False, False, False]
    verdicts = [variety_equivalence_check(c) for c in variety_corpus]
    assert [v.equivalent for v in verdicts] == expected
    for v in verdicts:
        assert v.surrogates_agree, v.to_dict()


@allure.feature("structure")
@allure.story("variety equivalence")
def test_variety_verdict_details() -> None:
    verdict = variety_equivalence_check(k_plus_ck(1))
    doc = verdict.to_dict()
    assert doc["envelope_truncation"] == truncation_bound(MAX_IDENTITY_DEGREE) == 5
    assert verdict.envelope_truncation == truncation_bound(5)
    assert doc["c_regularity"] == "regular (certified up to 3)"
    assert verdict.envelope_k_regular_up_to == 5

    nilpotent = variety_equivalence_check(odd_nilpotent())
    assert nilpotent.commutative and not nilpotent.odd_escapes_radical
    assert nilpotent.to_dict()["c_regularity"] == "not 2-regular"
    with pytest.raises(GroupMismatch):
        variety_equivalence_check(twisted_z2z2())
