import pytest
import sympy
from hypothesis import given, settings, strategies as st

from powersum.arith import (
    iroot,
    is_perfect_power,
    is_prime,
    nth_power_exclusion_witness,
    prime_factors,
    primality,
    primes_in_range,
    primes_up_to,
    radical,
    valuation,
)


@given(st.integers(min_value=-10, max_value=10**7))
def test_is_prime_matches_sympy(m):
    assert is_prime(m) == sympy.isprime(m)


@settings(max_examples=50)
@given(st.integers(min_value=2**80, max_value=2**200))
def test_large_primality_matches_sympy(m):
    assert is_prime(m) == sympy.isprime(m)


def test_probabilistic_range_reports_error_bound():
    p = sympy.nextprime(10**30)
    res = primality(p)
    assert res and not res.certain and 0 < res.error_bound <= 2.0**-128
    small = primality(10007)
    assert small.certain and small.error_bound == 0


@pytest.mark.parametrize("m", [561, 1105, 3215031751, 3825123056546413051])
def test_strong_pseudoprimes_rejected(m):
    assert not is_prime(m)


def test_sieve_matches_sympy():
    assert primes_up_to(10**5) == list(sympy.primerange(2, 10**5 + 1))
    assert primes_in_range(11, 100) == list(sympy.primerange(11, 101))
    assert primes_in_range(24, 28) == []


@given(st.integers(min_value=1, max_value=10**9), st.sampled_from([2, 3, 5, 7, 13]))
def test_valuation(m, p):
    e = valuation(m, p)
    assert m % p**e == 0 and m % p ** (e + 1) != 0


def test_valuation_of_zero_rejected():
    with pytest.raises(ValueError):
        valuation(0, 3)


def test_factors_and_radical():
    assert prime_factors(2**7 * 5**2 * 13) == [2, 5, 13]
    assert radical(2**7 * 5**2 * 13) == 130


@given(st.integers(min_value=0, max_value=10**40), st.integers(min_value=2, max_value=9))
def test_iroot(m, n):
    r, exact = iroot(m, n)
    assert r**n <= m < (r + 1) ** n
    assert exact == (r**n == m)


def test_perfect_powers():
    assert is_perfect_power(13**4, 4)
    assert not is_perfect_power(13**4 + 1, 4)


def test_exclusion_witness_known_value():
    w = nth_power_exclusion_witness(524800)
    assert (w.q, w.exponent) == (5, 2)


def test_exclusion_witness_absent_for_cubes():
    assert nth_power_exclusion_witness(7**3 * 11**6) is None


@given(st.integers(min_value=2, max_value=10**12))
def test_witness_is_sound(m):
    w = nth_power_exclusion_witness(m)
    if w is not None:
        assert 1 <= valuation(m, w.q) <= 2 and w.exponent == valuation(m, w.q)
