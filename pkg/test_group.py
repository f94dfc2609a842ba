#!/usr/bin/env python3
"""Tests for the unipotent group G: relations, collection, Engel and witness"""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from engel_lab.exceptions import CollectionError, InvalidElement, NonDisjointSets, NotUnipotent
from engel_lab.group import (
    GroupWord,
    NormalForm,
    UnipotentOp,
    check_class_bound_suite,
    check_group_suite,
    check_witness,
    collect_normal_form,
    commutator,
    conjugate_expansion,
    unipotent_group,
    witness_commutator,
    witness_entries,
)
from engel_lab.lie_algebra import LParams
from engel_lab.schemas import NormalFormPayload
from engel_lab.star_algebra import StarElement, parse_star_term
from engel_lab.utils.gf2 import gf2_matmul, identity, nilpotency_index, product_filtration

P2, P3 = LParams(2), LParams(3)


def word(text, params=P3):
    return GroupWord.parse(text, params)


def letter(text, params=P3):
    return parse_star_term(text, params)


def one_plus_ad(group, text):
    return group.one_plus_ad(StarElement.parse(text, group.params))


def test_word_text():
    assert str(word("x v3{1,4} w{2}")) == "x v3{1,4} w{2}"
    assert str(word("")) == "1"
    assert len(word("1")) == 0
    assert str(word("x w{0} v1{1}").inverse()) == "v1{1} w{0} x"


def test_realize_relations():
    group = unipotent_group(3, 4)
    dim = group.algebra.dim
    assert group.realize(word("")).is_identity()
    assert group.realize(word("x x")).is_identity()
    assert group.realize(word("w{0} x w{0} x")) == one_plus_ad(group, "v0{0}")
    a, b = group.generator(letter("v1{0}")), group.generator(letter("w{1}"))
    assert commutator(a, b) == one_plus_ad(group, "v2{0,1}")
    assert commutator(a, group.generator(letter("x"))).is_identity()
    assert commutator(a, UnipotentOp.identity(dim)).is_identity()
    assert commutator(group.generator(letter("v5{0}")), group.generator(letter("w{1}"))) == one_plus_ad(group, "w{0,1}")
    assert commutator(a, group.generator(letter("w{0,2}"))).is_identity()


def test_inverse_and_unipotence():
    group = unipotent_group(2, 3)
    g = group.realize(group.random_word(10, seed=4))
    assert g.is_unipotent()
    assert (g @ g.inverse()).is_identity()
    assert g.inverse() == group.realize(group.random_word(10, seed=4).inverse())
    not_unipotent = UnipotentOp(np.array([[0, 1], [1, 1]], dtype=np.uint8))
    assert not not_unipotent.is_unipotent()
    with pytest.raises(NotUnipotent):
        not_unipotent.inverse()
    with pytest.raises(InvalidElement):
        g @ UnipotentOp.identity(3)


def test_random_word_is_seeded():
    group = unipotent_group(3, 4)
    assert group.random_word(8, seed=1) == group.random_word(8, seed=1)
    assert len(group.random_word(8, seed=1)) == 8


def test_involutions_and_relations():
    group = unipotent_group(2, 3)
    assert group.check_involutions().ok
    assert group.check_commutator_relations(samples=40, seed=3).ok
    assert unipotent_group(3, 4).check_commutator_relations(samples=40, seed=4).ok


def test_collection_examples():
    form = collect_normal_form(word("w{0} x", P2))
    assert form.epsilon == 1
    assert form.v_blocks == ((1,), ())
    assert form.w_block == (1,)
    assert str(form.to_word()) == "x v0{0} w{0}"
    assert collect_normal_form(word("x", P2)).epsilon == 1
    assert collect_normal_form(word("w{0} w{0}", P2)).is_identity()
    assert collect_normal_form(word("", P2)).is_identity()
    with pytest.raises(CollectionError):
        collect_normal_form(word("w{0} x w{1} x", P2), step_limit=2)


def test_collection_matches_matrices():
    assert unipotent_group(2, 3).check_normal_form(samples=60, seed=8).ok
    assert unipotent_group(3, 4).check_normal_form(samples=30, seed=9).ok


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=0, max_value=10))
def test_collection_is_idempotent(seed, length):
    group = unipotent_group(3, 4)
    form = collect_normal_form(group.random_word(length, seed))
    assert collect_normal_form(form.to_word()) == form
    assert group.realize(form.to_word()) == group.realize(group.random_word(length, seed))


def test_normal_form_payload():
    form = collect_normal_form(word("w{0,1} x v0{2}", P2))
    payload = form.to_payload()
    assert NormalForm.from_payload(NormalFormPayload.model_validate_json(payload.model_dump_json()), P2) == form
    with pytest.raises(InvalidElement):
        NormalForm.from_payload(NormalFormPayload(epsilon=0, v_blocks=[[]], w_block=[]), P2)
    with pytest.raises(InvalidElement):
        NormalForm.from_payload(NormalFormPayload(epsilon=0, v_blocks=[[], []], w_block=[[1], [0]]), P2)


def test_conjugate_expansion_examples():
    assert str(conjugate_expansion([], P2)) == "x"
    assert str(conjugate_expansion([0b1], P2)) == "v0{0}+x"
    assert str(conjugate_expansion([0b1, 0b10], P2)) == "v0{0}+v0{1}+v1{0,1}+x"
    assert "w{0,1,2}" in str(conjugate_expansion([0b1, 0b10, 0b100], P2))
    with pytest.raises(NonDisjointSets):
        conjugate_expansion([0b11, 0b10], P2)


def test_conjugate_expansion_matches_matrices():
    assert unipotent_group(2, 4).check_conjugate_expansion().ok
    assert unipotent_group(3, 4).check_conjugate_expansion().ok


def test_engel():
    group = unipotent_group(2, 3)
    assert group.engel3_check(word("", P2))
    assert group.engel3_check(word("w{0} w{1} w{2}", P2))
    assert unipotent_group(2, 2).engel_exhaustive().ok
    report = unipotent_group(3, 4).engel_sweep(samples=30, seed=12)
    assert report.ok and report.cases_total == 30


def test_witness_on_letters():
    result = witness_commutator(P2)
    assert len(witness_entries(P2)) == 1 + 3 * 3
    assert result.result == result.expected
    assert str(result.element()) == "w{0,1,2,3,4,5,6}"
    assert all(prefix is not None for prefix in result.prefixes)
    result3 = witness_commutator(P3)
    assert result3.result == result3.expected
    assert result3.expected.subset == (1 << 25) - 1


def test_witness_dense():
    report = check_witness(2)
    assert report.ok
    assert report.measured_values["witness"] == "w{0,1,2,3,4,5,6}"
    assert report.measured_values["dense_dim"] == 382


def test_class_bound():
    group = unipotent_group(2, 3)
    index, bound, report = group.conjugates_class_bound(1, [[1]], samples=10, seed=0)
    assert bound == 6 and index <= bound and report.ok
    index, _, _ = group.conjugates_class_bound(1, [[]], samples=0)
    assert index == 2
    index, bound, report = group.conjugates_class_bound(2, samples=10, seed=1)
    assert bound == 10 and index <= bound and report.ok
    with pytest.raises(InvalidElement):
        group.conjugates_class_bound(2, [[1]])


def test_suites():
    assert check_group_suite(2, 3, samples=20, seed=0).ok
    report = check_class_bound_suite(2, 3, max_r=2, samples=5, seed=0)
    assert report.ok
    assert set(report.measured_values["q_index"]) == {"1", "2"}


@pytest.mark.parametrize("seeds", [(1, 2), (5, 11)])
def test_finitely_generated_subgroups_are_nilpotent(seeds):
    group = unipotent_group(2, 3)
    dim = group.algebra.dim
    gens = [group.realize(group.random_word(5, seed=s)) for s in seeds]
    # g - 1 lies in the algebra of ad letters, where products of 2N+2 letters vanish
    dims = product_filtration(
        [g.matrix ^ identity(dim) for g in gens],
        gf2_matmul,
        to_vector=lambda mat: mat.ravel(),
        from_vector=lambda vec: vec.reshape(dim, dim),
        max_length=dim + 1,
    )
    index = nilpotency_index(dims)
    assert index is not None and index <= 2 * 3 + 2
    for picks in itertools.product(range(len(gens)), repeat=index):
        c = gens[picks[0]]
        for k in picks[1:]:
            c = commutator(c, gens[k])
        assert c.is_identity(), picks


if __name__ == "__main__":
    test_word_text()
    test_realize_relations()
    test_collection_examples()
    test_conjugate_expansion_examples()
    test_engel()
    test_witness_on_letters()
    test_witness_dense()
    test_class_bound()
    print("✅ group checks passed")
