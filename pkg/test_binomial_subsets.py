#!/usr/bin/env python3
"""Tests for binomial parity and the modified union of subsets"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from engel_lab.exceptions import GroundSetMismatch, InvalidElement, RangeCapError
from engel_lab.utils.binomial import (
    binom_mod_p,
    binom_parity,
    binom_parity_oracle,
    check_lucas_oracle,
    leq_base_p,
)
from engel_lab.utils.subsets import (
    ANNIHILATED,
    GroundSet,
    format_subset,
    modified_union,
    parse_subset,
)

subsets_of_six = st.integers(min_value=0, max_value=63)


def test_binom_parity_examples():
    assert binom_parity(5, 3) == 0
    assert binom_parity(7, 6) == 1
    assert binom_parity(0, 0) == 1
    assert binom_parity(3, 5) == 0
    # m = 3: C(k+1, 6) is odd only for k = 5
    assert [binom_parity(k + 1, 6) for k in range(6)] == [0, 0, 0, 0, 0, 1]


def test_leq_base_p():
    assert not leq_base_p(3, 5)
    assert leq_base_p(6, 7)
    assert leq_base_p(0, 9)
    assert not leq_base_p(2, 4, p=3)  # 2 = (2), 4 = (11) in base 3


def test_binom_mod_p_examples():
    assert binom_mod_p(5, 2, 3) == 1
    assert binom_mod_p(10, 3, 5) == 0
    with pytest.raises(InvalidElement):
        binom_mod_p(5, 2, 4)


@given(st.integers(min_value=0, max_value=200), st.integers(min_value=0, max_value=200),
       st.sampled_from([2, 3, 5, 7]))
def test_binom_mod_p_matches_comb(m, n, p):
    assert binom_mod_p(m, n, p) == math.comb(m, n) % p


@given(st.integers(min_value=0, max_value=300), st.integers(min_value=0, max_value=300))
def test_binom_parity_matches_comb(m, n):
    assert binom_parity(m, n) == math.comb(m, n) % 2


def test_pascal_oracle():
    assert binom_parity_oracle(5, 3) == 0
    assert binom_parity_oracle(7, 6) == 1
    assert binom_parity_oracle(0, 0) == 1
    with pytest.raises(RangeCapError) as err:
        binom_parity_oracle(5000, 1)
    assert err.value.exit_status == 3
    with pytest.raises(InvalidElement):
        binom_parity_oracle(-1, 0)


def test_lucas_sweep():
    report = check_lucas_oracle(256)
    assert report.ok
    assert report.cases_total == 257 * 258 // 2


def test_modified_union_examples():
    assert modified_union(0b011, 0b100) == 0b111
    assert modified_union(0b011, 0b1010) is ANNIHILATED
    assert modified_union(0b100000, 0b100000) is ANNIHILATED
    assert modified_union(ANNIHILATED, 0) is ANNIHILATED
    assert modified_union(0, 0b101) == 0b101
    assert not ANNIHILATED


@given(subsets_of_six, subsets_of_six)
def test_modified_union_commutative(a, b):
    assert modified_union(a, b) == modified_union(b, a)


def test_modified_union_associative():
    # every triple of subsets of a 6-element ground set
    subsets = range(64)
    for a in subsets:
        for b in subsets:
            ab = modified_union(a, b)
            for c in subsets:
                left = modified_union(ab, c)
                right = modified_union(a, modified_union(b, c))
                assert left is right or left == right, (a, b, c)


def test_subset_text():
    assert parse_subset("{1,4}") == 0b10010
    assert format_subset(0b10010) == "{1,4}"
    assert parse_subset("{}") == 0
    assert format_subset(0) == "{}"
    for bad in ("{4,1}", "{1,1}", "1,4", "{a}"):
        with pytest.raises(InvalidElement):
            parse_subset(bad)


@given(st.integers(min_value=0, max_value=(1 << 20) - 1))
def test_subset_text_round_trip(bits):
    assert parse_subset(format_subset(bits)) == bits


def test_ground_set():
    ground = GroundSet(4)
    assert ground.full_mask == 0b1111
    assert ground.subset_count == 15
    assert ground.singletons() == [1, 2, 4, 8]
    assert list(ground.subsets())[0] == 1
    assert ground.union(0b0011, 0b0100) == 0b0111
    with pytest.raises(GroundSetMismatch):
        ground.validate(0b10000)
    with pytest.raises(InvalidElement):
        ground.validate(0)
    with pytest.raises(InvalidElement):
        GroundSet(0)

    rng = np.random.default_rng(7)
    for _ in range(50):
        picked = ground.random_subset(rng)
        assert picked and ground.contains(picked)


if __name__ == "__main__":
    test_binom_parity_examples()
    test_lucas_sweep()
    test_modified_union_examples()
    test_subset_text()
    test_ground_set()
    print("✅ binomial and subset checks passed")
