import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from powersum.bounds import (
    BoundBreakdown,
    NotApplicable,
    all_pair_bounds,
    c1_cap,
    compute_A,
    compute_c1,
    compute_n1,
    compute_n2,
    compute_n3_n4,
    floor_n4,
    solve_upper_bound,
    table2,
    table_bound_n,
    upper_bound_rhs,
)
from powersum.decomposition import DecompositionPair, table1_pairs

TABLE2 = {
    10: 173419, 26: 1438387, 30: 2084701, 34: 2875394, 50: 7627398, 58: 11043693,
    70: 16550269, 74: 18440172, 78: 20987069, 82: 23725616, 90: 29791351,
}
ALL_PAIRS = [p for k in range(6, 99, 4) for p in table1_pairs(k)]


def test_table2_exact():
    assert dict(table2()) == TABLE2


def test_table2_stable_under_precision():
    assert dict(table2(TABLE2, prec=160)) == TABLE2


@pytest.mark.parametrize("d1,d2,expected", [(5, 1, Fraction("201.02")), (1, 5, Fraction("8.0408"))])
def test_c1_examples(d1, d2, expected):
    assert compute_c1(10, DecompositionPair(10, d1, d2)) == expected


def test_c1_cap_attained_only_at_largest_ratio():
    for pair in ALL_PAIRS:
        c1, cap = compute_c1(pair.k, pair), c1_cap(pair.k)
        assert c1 <= cap
        assert (c1 == cap) == (Fraction(pair.d1, pair.d2) == Fraction(pair.k, 2))


def test_A_is_never_one():
    assert all(compute_A(p.k, p) != 1 for p in ALL_PAIRS)
    assert compute_A(10, DecompositionPair(10, 1, 5)) == Fraction(16, 3125)


def test_n1_values():
    assert compute_n1(6) == pytest.approx(math.log(3601.5) / math.log(3), abs=1e-12)
    assert compute_n1(10) == pytest.approx(math.log(20002.5) / math.log(3), abs=1e-12)
    assert compute_n1(6) == pytest.approx(7.454, abs=1e-3)
    assert compute_n1(10) == pytest.approx(9.0147, abs=1e-3)


@given(st.integers(1, 10**9), st.integers(1, 10**9))
def test_n1_monotone_in_X0(a, b):
    lo, hi = sorted((a, b))
    assert compute_n1(10, lo) <= compute_n1(10, hi)


def test_n2_cap_and_positivity():
    values = [compute_n2(p.k, p) for p in ALL_PAIRS]
    assert max(values) <= 554 and min(values) >= 1


def test_n2_k10_small_ratio():
    pair = DecompositionPair(10, 1, 5)
    log_a = math.log(3125 / 16)
    c1 = 8.0408
    terms = [math.log(c1 / log_a) / math.log(3), math.log(c1) / math.log(3), (log_a + 1) / math.log(1.5)]
    assert compute_n2(10, pair) == math.floor(max(terms)) + 1 == 16


def test_n3_n4_k10():
    n3, n4 = compute_n3_n4(10, 10)
    assert n3 == pytest.approx(1000 * math.log(10) / math.log(1.5 * 81), rel=1e-12)
    assert 479 < n3 < 481
    assert math.floor(n4) == floor_n4(10, 10) == 173419


def test_n4_k70():
    assert floor_n4(70, 12) == 16550269


@pytest.mark.parametrize("m", [9, 11, 32, 0])
def test_invalid_m(m):
    with pytest.raises(ValueError):
        compute_n3_n4(10, m)


def test_C2_must_match_m():
    with pytest.raises(ValueError):
        solve_upper_bound(26, None, 10, "23.4")


@pytest.mark.parametrize("k", [26, 58, 90])
def test_solver_is_the_largest_solution(k):
    m, C2 = (10, "25.2") if k <= 66 else (12, "23.4")
    n = solve_upper_bound(k, None, m, C2)
    assert n < upper_bound_rhs(k, Fraction(C2), n)
    assert n + 1 >= upper_bound_rhs(k, Fraction(C2), n + 1)
    assert max(n, floor_n4(k, m)) == TABLE2[k]


def test_breakdown_invariants():
    for k in TABLE2:
        for row in all_pair_bounds(k):
            assert row.n0 > max(row.n1, row.n2, row.n3)
            assert row.n0 == max(row.n_ineq, math.floor(row.n4))
            assert row.m == (10 if k <= 66 else 12)


@pytest.mark.parametrize("k", [6, 14, 18])
def test_not_applicable_without_pairs(k):
    assert isinstance(table_bound_n(k), NotApplicable)


@pytest.mark.parametrize("k", [8, 102, 4])
def test_table_bound_rejects_k(k):
    with pytest.raises(ValueError):
        table_bound_n(k)


def test_breakdown_to_dict():
    row = table_bound_n(10)
    assert isinstance(row, BoundBreakdown)
    d = row.to_dict()
    assert d["n0"] == 173419 and d["C2"] == "126/5" and Fraction(d["c1"]) == row.c1


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(sorted(TABLE2)), st.integers(600, 10**8))
def test_rhs_grows_with_n(k, n):
    C2 = Fraction(252, 10)
    assert upper_bound_rhs(k, C2, n) <= upper_bound_rhs(k, C2, n + 1000)
