import pytest
from hypothesis import given, settings, strategies as st

from powersum.thue import (
    GaussianInt,
    _search_brute,
    _search_roots,
    beta_for,
    bounded_search,
    conjugation_symmetry_check,
    gaussian_prime_above,
    solve_four_equations,
    thue_forms,
    verify_candidate,
)

# k -> (p, pi, beta) as tabulated alongside the small-exponent argument
BETA_TABLE = {
    10: (5, (2, 1), (1, 3)),
    26: (13, (3, 2), (1, 5)),
    30: (5, (2, 1), (1, 3)),
    34: (17, (4, 1), (3, 5)),
    50: (5, (2, 1), (1, 3)),
    58: (29, (5, 2), (3, 7)),
    70: (5, (2, 1), (1, 3)),
    74: (37, (6, 1), (5, 7)),
    78: (13, (3, 2), (1, 5)),
    82: (41, (5, 4), (1, 9)),
    90: (5, (2, 1), (1, 3)),
}


@pytest.mark.parametrize("k", sorted(BETA_TABLE))
def test_beta_table(k):
    p, pi, beta = BETA_TABLE[k]
    g = gaussian_prime_above(p)
    assert (g.re, g.im) == pi
    (b,) = beta_for(p)
    assert (b.re, b.im) == beta
    assert b.norm() == 2 * p


def test_beta_for_rejects_bad_multipliers():
    for a in (3, 15, 2):
        with pytest.raises(ValueError):
            beta_for(a)
    with pytest.raises(ValueError):
        beta_for(5**3, 3)


def test_beta_for_two_primes_gives_both_classes():
    betas = beta_for(65)
    assert len(betas) == 2 and all(b.norm() == 130 for b in betas)


@given(st.integers(-30, 30), st.integers(-30, 30), st.sampled_from([3, 4, 5, 7]))
def test_forms_are_real_and_imaginary_parts(t, s, n):
    beta = GaussianInt(1, 5)
    re_form, im_form = thue_forms(beta, n)
    w = beta * GaussianInt(t, s) ** n
    assert (re_form(t, s), im_form(t, s)) == (w.re, w.im)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
@pytest.mark.parametrize("beta", [GaussianInt(1, 3), GaussianInt(1, 5), GaussianInt(5, 7)])
def test_conjugation_symmetry(beta, n):
    assert conjugation_symmetry_check(beta, n, samples=100)


@pytest.mark.parametrize("beta", [GaussianInt(1, 3), GaussianInt(1, 5), GaussianInt(3, 7)])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_root_search_matches_brute_force(beta, n):
    for form in thue_forms(beta, n):
        for rhs in (1, -1, 7):
            assert _search_roots(form, rhs, 40) == sorted(_search_brute(form, rhs, 40))


def test_known_exceptional_solutions():
    outcomes = solve_four_equations(GaussianInt(1, 5), 3, 50)
    re_plus, re_minus = outcomes[0], outcomes[1]
    nontrivial = {ts for o in (re_plus, re_minus) for ts in o.solutions if ts[0] * ts[1]}
    assert nontrivial == {(-1, -2), (1, 2), (-2, 3), (2, -3)}
    assert {t * t + s * s for t, s in nontrivial} == {5, 13}


def test_larger_radius_finds_nothing_new():
    outcomes = solve_four_equations(GaussianInt(1, 5), 3, 300)
    small = solve_four_equations(GaussianInt(1, 5), 3, 50)
    assert [o.solutions for o in outcomes] == [o.solutions for o in small]


@pytest.mark.parametrize("k", [26, 78])
@pytest.mark.parametrize("y1,x", [(5, 57), (13, 239)])
def test_exceptional_candidates_rejected(k, y1, x):
    v = verify_candidate(k, 3, 13, y1)
    assert not v.is_solution
    assert f"g_k({x})" in v.step


@pytest.mark.parametrize("k", [26, 78])
def test_candidate_three_rejected(k):
    v = verify_candidate(k, 3, 13, 3)
    assert not v.is_solution and "not a square" in v.step


def test_bounded_search_validates_bound():
    with pytest.raises(ValueError):
        bounded_search(thue_forms(GaussianInt(1, 3), 3)[0], 1, -1)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=4, max_size=4), st.integers(-5, 5))
def test_brute_and_roots_agree_on_random_cubics(coeffs, rhs):
    from powersum.thue import BinaryForm

    form = BinaryForm(3, tuple(coeffs))
    if coeffs[0] == 0 or coeffs[-1] == 0:
        return
    assert _search_roots(form, rhs, 25) == sorted(_search_brute(form, rhs, 25))
