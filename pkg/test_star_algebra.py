#!/usr/bin/env python3
"""Tests for the star algebra L* and its truncations"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from engel_lab.exceptions import GroundSetMismatch, InvalidElement, ResourceCapExceeded
from engel_lab.lie_algebra import LParams, lie_algebra
from engel_lab.star_algebra import (
    StarAlgebra,
    StarBasisIndex,
    StarElement,
    check_star_suite,
    parse_star_term,
    star_algebra,
    star_basis_product,
    star_multiply,
    x_index,
)
from engel_lab.utils.gf2 import gf2_matmul
from engel_lab.utils.subsets import GroundSet

P2, P3 = LParams(2), LParams(3)


def term(text, params=P3):
    return parse_star_term(text, params)


def star(text, params=P3):
    return StarElement.parse(text, params)


def test_text_round_trip():
    text = "v3{1,4}+w{2}+x"
    assert str(star(text)) == text
    assert str(star("x+w{2}+v3{1,4}")) == text
    assert str(star("0")) == "0"
    for bad in ("v3{}", "w{2,1}", "x{1}", "v9{1}", "w{1}+w{1}"):
        with pytest.raises(InvalidElement):
            star(bad)


def test_basis_products():
    lie = lie_algebra(3)
    assert star_basis_product(lie, term("w{1}"), term("x")) == term("v0{1}")
    assert star_basis_product(lie, term("x"), term("w{1}")) == term("v0{1}")
    assert star_basis_product(lie, term("v5{1}"), term("w{2}")) == term("w{1,2}")
    assert star_basis_product(lie, term("v0{1,2}"), term("w{2,3}")) is None
    assert star_basis_product(lie, term("v2{0}"), term("v2{1}")) is None
    assert star_basis_product(lie, term("x"), term("x")) is None
    assert star_basis_product(lie, term("v3{0}"), term("x")) is None


def test_multiply():
    assert str(star_multiply(star("w{0}+x"), star("w{1}"))) == "v0{1}"
    assert str(star_multiply(star("v0{0}"), star("v0{1}"))) == "0"
    assert str(star_multiply(star("w{0}"), star("w{1}+x"))) == "v0{0}"
    with pytest.raises(InvalidElement):
        star_multiply(star("x", P2), star("x", P3))


def test_dimension_and_order():
    assert star_algebra(2, 3).dim == 22
    assert star_algebra(3, 4).dim == 106
    algebra = star_algebra(2, 3)
    basis = algebra.basis()
    assert len(basis) == algebra.dim
    assert basis[0] == x_index(P2)
    assert basis[1] == StarBasisIndex(0, 1)
    assert basis[-1] == StarBasisIndex(P2.w_index, 0b111)
    with pytest.raises(GroundSetMismatch):
        algebra.index_of(StarBasisIndex(0, 0b1000))
    with pytest.raises(GroundSetMismatch):
        algebra.to_vector(star("w{5}", P2))


def test_ad_star_of_x():
    algebra = star_algebra(2, 2)
    adx = algebra.ad_star(star("x", P2))
    assert str(adx.apply(star("w{0}+w{0,1}", P2))) == "v0{0}+v0{0,1}"
    assert not adx.apply(star("v1{1}+x", P2))
    assert (adx @ adx).is_zero()
    assert algebra.ad_star(star("0", P2)).is_zero()
    assert np.array_equal(adx.to_dense(), algebra.ad_dense(star("x", P2)))


def test_ad_dense_matches_operator():
    algebra = star_algebra(3, 3)
    rng = np.random.default_rng(11)
    for _ in range(10):
        y = algebra.random_element(rng)
        assert np.array_equal(algebra.ad_star(y).to_dense(), algebra.ad_dense(y))


def test_dense_cap():
    algebra = StarAlgebra(P3, GroundSet(4), max_dim=50)
    with pytest.raises(ResourceCapExceeded):
        algebra.ad_dense(star("x"))


def test_sandwich():
    assert star_algebra(3, 4).check_sandwich(samples=30, seed=5).ok
    assert star_algebra(2, 4).check_sandwich(samples=30, seed=6).ok


def test_jacobi_exhaustive_small():
    report = star_algebra(2, 3).verify_star_jacobi(exhaustive_cap=30, samples=0, seed=0)
    assert report.ok
    assert report.measured_values["jacobi_mode"] == "exhaustive"
    assert report.cases_total == 22 + 22 ** 3


def test_jacobi_sampled():
    report = star_algebra(3, 3).verify_star_jacobi(exhaustive_cap=30, samples=40, seed=2)
    assert report.ok
    assert report.measured_values["jacobi_mode"] == "sampled"
    assert report.cases_total == 40 * 3 + 40  # a*a = 0 per sampled element, then Jacobi


def test_structure_checks():
    algebra = star_algebra(3, 3)
    assert algebra.check_truncation_closure().ok
    assert algebra.check_x_square_kills().ok
    assert algebra.check_embedding_compatibility().ok


def test_local_nilpotency():
    algebra = star_algebra(2, 3)
    x = x_index(P2)
    assert algebra.check_local_nilpotency([x]) == (1, 1)
    assert algebra.check_local_nilpotency([x, term("w{0}", P2)]) == (2, 2)
    nilpotency_class, bound = algebra.check_local_nilpotency([term("w{0}", P2), term("w{1}", P2), x])
    assert bound == 4 and nilpotency_class <= bound
    with pytest.raises(InvalidElement):
        algebra.check_local_nilpotency([x, x])
    assert algebra.check_nilpotency_samples().ok


@settings(max_examples=25)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_product_is_bilinear_and_alternating(seed):
    algebra = star_algebra(3, 3)
    rng = np.random.default_rng(seed)
    a, b, c = (algebra.random_element(rng) for _ in range(3))
    assert star_multiply(a + b, c) == star_multiply(a, c) + star_multiply(b, c)
    assert star_multiply(a, b) == star_multiply(b, a)
    assert not star_multiply(a, a)
    adx = algebra.ad_dense(star("x"))
    assert not gf2_matmul(gf2_matmul(adx, algebra.ad_dense(a)), adx).any()


def test_star_suite():
    report = check_star_suite(2, 3, samples=20, seed=0)
    assert report.ok
    assert report.measured_values["dim"] == 22


if __name__ == "__main__":
    test_text_round_trip()
    test_basis_products()
    test_multiply()
    test_dimension_and_order()
    test_ad_star_of_x()
    test_sandwich()
    test_local_nilpotency()
    test_star_suite()
    print("✅ star algebra checks passed")
