#!/usr/bin/env python3
"""Tests for the Lie algebras L(m)"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from engel_lab.exceptions import InvalidElement
from engel_lab.lie_algebra import LElement, LParams, check_lie_suite, lie_algebra, oplus
from engel_lab.utils.gf2 import bits_to_row, in_row_space


def el(text, m):
    return LElement.parse(text, LParams(m))


def test_params():
    p = LParams(3)
    assert (p.n, p.dim, p.w_index, p.x_index) == (6, 8, 6, 7)
    assert LParams(2).n == 2
    with pytest.raises(InvalidElement):
        LParams(1)
    with pytest.raises(InvalidElement):
        p.v_index(6)


def test_oplus():
    assert oplus(4, 3, LParams(3)) == 2
    assert oplus(0, 0, LParams(3)) == 0
    assert oplus(1, 1, LParams(2)) == 0
    assert oplus(5, 5, LParams(3)) == 0
    with pytest.raises(InvalidElement):
        oplus(6, 0, LParams(3))


def test_basis_products():
    alg3 = lie_algebra(3)
    p3 = alg3.params
    assert str(alg3.basis_product(5, p3.w_index)) == "w"
    assert str(alg3.basis_product(p3.w_index, p3.x_index)) == "v0"
    assert str(alg3.basis_product(2, 2)) == "0"
    assert str(alg3.basis_product(0, p3.w_index)) == "v1"
    assert str(alg3.basis_product(3, p3.x_index)) == "0"
    alg2 = lie_algebra(2)
    assert str(alg2.basis_product(0, 1)) == "v0"
    assert str(alg2.basis_product(1, 0)) == "v0"


def test_multiply():
    alg = lie_algebra(3)
    assert str(alg.multiply(el("w+x", 3), el("x", 3))) == "v0"
    assert str(alg.multiply(el("v0+v1", 3), el("w", 3))) == "v1+v2"
    assert str(alg.multiply(el("0", 3), el("w", 3))) == "0"
    with pytest.raises(InvalidElement):
        alg.multiply(el("w", 2), el("w", 3))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_laws(m):
    alg = lie_algebra(m)
    dim = alg.params.dim
    alternating = alg.verify_alternating()
    assert alternating.ok and alternating.cases_total == dim + dim * (dim - 1) // 2
    jacobi = alg.verify_jacobi()
    assert jacobi.ok and jacobi.cases_total == dim ** 3
    assert alg.center() == []
    assert alg.check_structure_symmetry().ok
    assert alg.check_vanishing_products().ok
    assert alg.check_ad_agreement(50, seed=m).ok


def test_ideal_closure():
    alg2 = lie_algebra(2)
    assert np.array_equal(alg2.ideal_closure(el("w", 2)), alg2.w_subspace())
    alg3 = lie_algebra(3)
    assert np.array_equal(alg3.ideal_closure(el("v3+w", 3)), alg3.w_subspace())
    closure_x = alg2.ideal_closure(el("x", 2))
    assert closure_x.shape[0] == 4
    assert in_row_space(bits_to_row(1, 4), closure_x)
    with pytest.raises(InvalidElement):
        alg2.ideal_closure(el("0", 2))


def test_ideal_simplicity():
    # every nonzero y in W, whatever the sample count
    for samples in (0, 3, 200):
        report = lie_algebra(2).check_ideal_simplicity(samples=samples, seed=0)
        assert report.ok and report.cases_total == 7
    report = lie_algebra(3).check_ideal_simplicity(samples=0, seed=1)
    assert report.ok and report.cases_total == 127
    report = lie_algebra(4).check_ideal_simplicity(samples=5, seed=1)
    assert report.ok and report.cases_total == 5


def test_ad_agreement_exhaustive_at_m2():
    report = lie_algebra(2).check_ad_agreement(0, seed=0)
    assert report.ok and report.cases_total == 16 * 16
    assert lie_algebra(3).check_ad_agreement(0, seed=0).cases_total == 0


def test_ad_matrix():
    alg = lie_algebra(2)
    p = alg.params
    adx = alg.ad_basis(p.x_index)
    assert np.array_equal(adx[p.w_index], bits_to_row(1, 4))
    assert adx.sum() == 1
    alg3 = lie_algebra(3)
    adw = alg3.ad_basis(alg3.params.w_index)
    for i in range(5):
        assert np.array_equal(adw[i], bits_to_row(1 << (i + 1), 8))
    assert np.array_equal(adw[5], bits_to_row(1 << 6, 8))
    assert np.array_equal(adw[7], bits_to_row(1, 8))
    assert not adw[6].any()
    assert not adw.flags.writeable
    assert len(alg3.coordinate_operators()) == 7


def test_enveloping_dim():
    for m in (2, 3):
        report = lie_algebra(m).check_enveloping_dim()
        dim = 2 ** m
        assert report.ok
        assert 1 <= report.measured_values["enveloping_dim"] <= dim * dim


def test_text_format():
    p = LParams(3)
    assert str(LElement.parse("v3+w", p)) == "v3+w"
    assert str(LElement.parse("w+v3", p)) == "v3+w"
    assert str(LElement.parse("0", p)) == "0"
    for bad in ("v9", "w+w", "y", "v"):
        with pytest.raises(InvalidElement):
            LElement.parse(bad, p)


def test_structure_table():
    table = lie_algebra(2).structure_table()
    assert table["w*x"] == "v0"
    assert table["v1*w"] == "w"
    assert "x*x" not in table


elements_of_l3 = st.integers(min_value=0, max_value=255)


@given(elements_of_l3, elements_of_l3, elements_of_l3)
def test_bilinear(a, b, c):
    alg = lie_algebra(3)
    assert alg.multiply_bits(a ^ b, c) == alg.multiply_bits(a, c) ^ alg.multiply_bits(b, c)
    assert alg.multiply_bits(a, b) == alg.multiply_bits(b, a)
    assert alg.jacobi_bits(a, b, c) == 0


def test_lie_suite_report():
    report = check_lie_suite(2, samples=20, seed=1, lucas_max=64)
    assert report.ok
    assert report.measured_values["jacobi_cases"] == 64
    assert report.measured_values["ideal_x_dim"] == 4
    assert report.cases_passed + report.cases_vacuous == report.cases_total


if __name__ == "__main__":
    test_params()
    test_oplus()
    test_basis_products()
    test_multiply()
    for m in (2, 3, 4):
        test_laws(m)
    test_ideal_closure()
    test_ad_matrix()
    test_lie_suite_report()
    print("✅ L(m) checks passed")
