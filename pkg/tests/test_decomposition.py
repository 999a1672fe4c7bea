import pytest
from hypothesis import given, strategies as st

from powersum.decomposition import (
    DecompositionPair,
    divisor_set_D,
    exponent_gate,
    infinite_family_hypothesis,
    lebesgue_nagell_cases,
    pair_list,
    prime_set_P,
    table1_pairs,
    y1_equals_1_triples,
    y1_exclusion_witnesses,
)
from powersum.arith import valuation

TABLE1 = {
    10: [(1, 5), (5, 1)],
    26: [(1, 13), (13, 1)],
    30: [(1, 5), (5, 1)],
    34: [(1, 17), (17, 1)],
    50: [(1, 5), (1, 25), (5, 1), (25, 1)],
    58: [(1, 29), (29, 1)],
    70: [(1, 5), (5, 1)],
    74: [(1, 37), (37, 1)],
    78: [(1, 13), (13, 1)],
    82: [(1, 41), (41, 1)],
    90: [(1, 5), (5, 1)],
}

Y1_TRIPLES = [(5, 10, 3), (13, 26, 5), (5, 30, 3), (5, 50, 3), (25, 50, 7), (5, 70, 3), (13, 78, 5), (41, 82, 9), (5, 90, 3)]


def test_table1_exact():
    found = {k: [(p.d1, p.d2) for p in table1_pairs(k)] for k in range(6, 99, 4)}
    assert {k: v for k, v in found.items() if v} == TABLE1


def test_pair_list_includes_trivial_pair():
    assert pair_list(10)[0] == DecompositionPair(10, 1, 1)
    assert pair_list(6) == [DecompositionPair(6, 1, 1)]


@pytest.mark.parametrize("k", range(6, 99, 4))
def test_pairs_are_valid(k):
    for p in pair_list(k):
        p.check()
        assert (k // 2) % p.d == 0


@pytest.mark.parametrize("k,d1,d2", [(50, 5, 5), (30, 3, 1), (10, 1, 7), (10, 25, 1)])
def test_pair_check_rejects_bad_pairs(k, d1, d2):
    with pytest.raises(ValueError):
        DecompositionPair(k, d1, d2).check()


def test_prime_and_divisor_sets():
    assert prime_set_P(50) == [5]
    assert divisor_set_D(50) == [1, 5, 25]
    assert prime_set_P(42) == []


def test_y1_triples_and_witnesses():
    assert y1_equals_1_triples(6, 100) == sorted(Y1_TRIPLES, key=lambda t: (t[1], t[0]))
    for d2, k, x, w in y1_exclusion_witnesses():
        assert w is not None
        assert x * x + 1 == 2 * d2
        m = ((x - 1) ** k + (x + 1) ** k) // 2
        assert 1 <= valuation(m, w.q) < 3


def test_exponent_gate():
    assert not exponent_gate(50, 3)
    assert exponent_gate(50, 5)
    assert exponent_gate(10, 3)


def test_lebesgue_nagell_cases():
    assert [c.a for c in lebesgue_nagell_cases(26, 3)] == [13, 169]
    assert lebesgue_nagell_cases(6, 5) == []
    with pytest.raises(ValueError):
        lebesgue_nagell_cases(10, 2)


@given(st.sampled_from(range(6, 99, 4)), st.sampled_from([3, 4, 5, 7, 11]))
def test_multipliers_are_admissible(k, n):
    P = set(prime_set_P(k))
    for case in lebesgue_nagell_cases(k, n):
        assert case.a > 1 and case.a % 2 == 1
        rest = case.a
        for p in P:
            assert valuation(rest, p) < n
            rest //= p ** valuation(rest, p)
        assert rest == 1


@pytest.mark.parametrize("k,expected", [(6, True), (14, True), (42, True), (10, False), (30, False), (66, True)])
def test_infinite_family(k, expected):
    assert infinite_family_hypothesis(k) is expected
