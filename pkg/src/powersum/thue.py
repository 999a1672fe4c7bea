"""Small exponents: Gaussian integers, the binary forms Re/Im of beta (t + s i)^n,
bounded search for their +-1 values, and candidate verification."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb, isqrt

import numpy as np

from .arith import iroot, prime_factors, valuation
from .poly import build_g


@dataclass(frozen=True)
class GaussianInt:
    re: int
    im: int

    def __add__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __neg__(self) -> GaussianInt:
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other: GaussianInt | int) -> GaussianInt:
        if isinstance(other, int):
            return GaussianInt(self.re * other, self.im * other)
        return GaussianInt(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> GaussianInt:
        result, base = GaussianInt(1, 0), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __str__(self) -> str:
        return f"{self.re}{self.im:+d}i"


I = GaussianInt(0, 1)
ONE_PLUS_I = GaussianInt(1, 1)


@dataclass(frozen=True)
class BinaryForm:
    """sum_j coeffs[j] * t^(n-j) * s^j."""

    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise ValueError("a degree-n form needs n + 1 coefficients")

    def __call__(self, t: int, s: int) -> int:
        return sum(c * t ** (self.n - j) * s**j for j, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        parts = []
        for j, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c:+d}*t^{self.n - j}*s^{j}")
        return " ".join(parts) or "0"


@dataclass
class ThueOutcome:
    form: BinaryForm
    rhs: int
    bound: int
    solutions: list[tuple[int, int]] = field(default_factory=list)


@dataclass(frozen=True)
class Verdict:
    k: int
    n: int
    a: int
    y1_tilde: int
    solution: tuple[int, int] | None
    step: str

    @property
    def is_solution(self) -> bool:
        return self.solution is not None


def gaussian_prime_above(p: int) -> GaussianInt:
    """pi = u + v i with u > v > 0 and u^2 + v^2 = p, for a prime p = 1 (mod 4)."""
    if p % 4 != 1:
        raise ValueError(f"{p} is not 1 mod 4")
    for v in range(1, isqrt(p) + 1):
        u2 = p - v * v
        u = isqrt(u2)
        if u * u == u2 and u > v:
            return GaussianInt(u, v)
    raise ValueError(f"{p} is not a sum of two squares")


def beta_for(a: int, n: int | None = None) -> list[GaussianInt]:
    """beta = (1 + i) alpha with alpha alpha-bar = a, one per conjugacy class.

    alpha uses a single Gaussian prime above each p | a; the first prime is
    fixed to break the global conjugation symmetry.
    """
    if a < 1 or a % 2 == 0:
        raise ValueError("a must be odd and positive")
    primes = prime_factors(a)
    if any(p % 4 != 1 for p in primes):
        raise ValueError(f"a = {a} has a prime factor = 3 (mod 4)")
    if n is not None and any(valuation(a, p) >= n for p in primes):
        raise ValueError("every exponent v_p(a) must be below n")
    betas = []
    for mask in range(1 << max(len(primes) - 1, 0)):
        alpha = GaussianInt(1, 0)
        for idx, p in enumerate(primes):
            pi = gaussian_prime_above(p)
            if idx > 0 and mask >> (idx - 1) & 1:
                pi = pi.conj()
            alpha = alpha * pi ** valuation(a, p)
        betas.append(ONE_PLUS_I * alpha)
    return betas


def thue_forms(beta: GaussianInt, n: int) -> tuple[BinaryForm, BinaryForm]:
    """Real and imaginary parts of beta (t + s i)^n as forms in (t, s)."""
    re, im = [], []
    for j in range(n + 1):
        c = beta * (I**j) * comb(n, j)
        re.append(c.re)
        im.append(c.im)
    return BinaryForm(n, tuple(re)), BinaryForm(n, tuple(im))


def _search_brute(form: BinaryForm, rhs: int, bound: int) -> list[tuple[int, int]]:
    rng = np.arange(-bound, bound + 1, dtype=object)
    out = []
    for t in range(-bound, bound + 1):
        vals = sum(c * t ** (form.n - j) * rng**j for j, c in enumerate(form.coeffs))
        for idx in np.nonzero(vals == rhs)[0]:
            out.append((t, int(rng[idx])))
    return out


def _search_roots(form: BinaryForm, rhs: int, bound: int) -> list[tuple[int, int]]:
    # s = 0 is handled exactly; for s != 0 every solution has t/s near a root of
    # F(x, 1) - rhs / s^n, so only integers next to those roots are tested.
    found = set()
    c0 = form.coeffs[0]
    if c0:
        for t in range(-bound, bound + 1):
            if c0 * t**form.n == rhs:
                found.add((t, 0))
    base = np.array(form.coeffs, dtype=float)
    for s in range(-bound, bound + 1):
        if s == 0:
            continue
        poly = base.copy()
        poly[-1] -= rhs / float(s) ** form.n
        lead = np.flatnonzero(poly)
        if len(lead) == 0:
            continue
        roots = np.roots(poly[lead[0] :])
        candidates = set()
        for r in roots:
            if abs(r.imag) * abs(s) > 2.0:
                continue
            centre = int(round(r.real * s))
            candidates.update(range(centre - 2, centre + 3))
        if form.coeffs[-1] * s**form.n == rhs:
            candidates.add(0)
        for t in candidates:
            if abs(t) <= bound and form(t, s) == rhs:
                found.add((t, s))
    return sorted(found)


def bounded_search(form: BinaryForm, rhs: int, bound: int = 10_000) -> ThueOutcome:
    """All (t, s) with |t|, |s| <= bound and form(t, s) = rhs (lexicographic)."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    if bound <= 60:
        sols = _search_brute(form, rhs, bound)
    else:
        sols = _search_roots(form, rhs, bound)
    return ThueOutcome(form, rhs, bound, sorted(sols))


def solve_four_equations(beta: GaussianInt, n: int, bound: int) -> list[ThueOutcome]:
    re_form, im_form = thue_forms(beta, n)
    return [bounded_search(f, rhs, bound) for f in (re_form, im_form) for rhs in (1, -1)]


def conjugation_symmetry_check(beta: GaussianInt, n: int, samples: int = 100, seed: int = 0) -> bool:
    """Check Re(+-i beta (t+si)^n) against +-Re/Im(beta (s-ti)^n) by n mod 4."""
    rng = random.Random(seed)
    for _ in range(samples):
        t, s = rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6)
        w = beta * GaussianInt(s, -t) ** n
        lhs_part = beta * GaussianInt(t, s) ** n
        for sign in (1, -1):
            lhs = (GaussianInt(0, sign) * lhs_part).re
            r = n % 4
            if r == 0:
                rhs = -sign * w.im
            elif r == 1:
                rhs = -sign * w.re
            elif r == 2:
                rhs = sign * w.im
            else:
                rhs = sign * w.re
            if lhs != rhs:
                return False
    return True


def verify_candidate(k: int, n: int, a: int, y1_tilde: int) -> Verdict:
    """Decide whether x^2 + 1 = 2 a y1_tilde^n lifts to a solution of
    ((x-1)^k + (x+1)^k)/2 = 2^(k-1) y^n."""
    if y1_tilde < 1 or y1_tilde % 2 == 0:
        raise ValueError("y1_tilde must be odd and positive")
    M = 2 * a * y1_tilde**n - 1
    x, exact = iroot(M, 2)
    if not exact:
        return Verdict(k, n, a, y1_tilde, None, f"2a*y^n - 1 = {M} is not a square")
    if x % 2 == 0 or x <= 1:
        return Verdict(k, n, a, y1_tilde, None, f"x = {x} is not odd > 1")
    value = build_g(k)(x)
    q, r = divmod(value, 2 ** (k - 1))
    if r:
        return Verdict(k, n, a, y1_tilde, None, f"g_k({x}) not divisible by 2^(k-1)")
    y, exact = iroot(q, n)
    if not exact:
        return Verdict(k, n, a, y1_tilde, None, f"g_k({x})/2^(k-1) is not an n-th power")
    return Verdict(k, n, a, y1_tilde, (x, y), "solution")
