import random
from math import comb

import pytest
import sympy
from hypothesis import given, strategies as st

from powersum.poly import IntPoly, build_f, build_g, check_k, m_value, shifted_tail

KS = list(range(6, 199, 4))


@pytest.mark.parametrize("k", KS)
def test_factorisation_identity(k):
    f, g = build_f(k), build_g(k)
    assert (IntPoly([1, 0, 1]) * f.substitute_square()) == g
    rng = random.Random(k)
    for _ in range(20):
        t = rng.randint(-10**6, 10**6)
        assert (t * t + 1) * f(t * t) == ((t - 1) ** k + (t + 1) ** k) // 2


@pytest.mark.parametrize("k", [6, 10, 14, 26, 50, 98])
def test_f_against_symbolic_division(k):
    t = sympy.symbols("t")
    g = sympy.expand(((t - 1) ** k + (t + 1) ** k) / 2)
    q, r = sympy.div(g, t**2 + 1, t)
    assert r == 0
    expected = [int(q.coeff(t, 2 * i)) for i in range(k // 2)]
    assert list(build_f(k).coeffs) == expected


@pytest.mark.parametrize("k", KS)
def test_subleading_shifted_coefficient(k):
    tail = shifted_tail(k)
    assert tail.top == k * (k // 2 - 1)
    assert build_f(k).compose(IntPoly([-1, 1])).coeffs[-1] == 1


@pytest.mark.parametrize("k,X0", [(6, 2401), (10, 8001)])
def test_threshold_X0(k, X0):
    assert shifted_tail(k).X0 == X0


def test_X0_dominates_tail_ratio():
    for k in (6, 10, 30, 90):
        tail = shifted_tail(k)
        assert tail.X0 > sum(abs(c) for c in tail.h[:-1]) / tail.top
        assert tail.X0 > 200 * tail.top


def test_g_coefficients():
    assert build_g(6).coeffs == (1, 0, 15, 0, 15, 0, 1)
    assert all(build_g(10).coeffs[j] == comb(10, j) for j in range(0, 11, 2))


def test_m_value():
    assert m_value(10, 3) == 524800


@given(st.lists(st.integers(-50, 50), max_size=6), st.lists(st.integers(-50, 50), max_size=6), st.integers(-30, 30))
def test_ring_operations(a, b, x):
    p, q = IntPoly(a), IntPoly(b)
    assert (p * q)(x) == p(x) * q(x)
    assert (p + q)(x) == p(x) + q(x)
    assert p.compose(q)(x) == p(q(x))
    assert p.eval_mod(x, 97) == p(x) % 97


@given(st.lists(st.integers(-20, 20), max_size=5), st.lists(st.integers(-20, 20), min_size=1, max_size=4))
def test_exact_division(a, b):
    q = IntPoly(b + [1])
    p = IntPoly(a)
    assert (p * q).exact_div(q) == p


@pytest.mark.parametrize("k", [0, 4, 8, 5, -2])
def test_invalid_k(k):
    with pytest.raises(ValueError):
        check_k(k)
