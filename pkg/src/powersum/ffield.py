"""Prime-field arithmetic and traces of Frobenius for Frey curves
Y^2 = X^3 + 2 x0 X^2 + (x0^2 + 1) X and for reductions of rational curves."""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Sequence

import numpy as np
from sympy import factorint

from .arith import is_prime, prime_factors
from .poly import IntPoly

NAIVE_LIMIT = 2**20


class SingularReduction(ArithmeticError):
    pass


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _tonelli_shanks(a: int, p: int) -> int:
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod(a: int, ell: int) -> int | None:
    """Square root r <= ell - r of a modulo an odd prime, or None."""
    a %= ell
    if a == 0:
        return 0
    if legendre(a, ell) != 1:
        return None
    r = _tonelli_shanks(a, ell)
    return min(r, ell - r)


def sqrt_mod_cipolla(a: int, ell: int) -> int | None:
    """Second square-root route (Cipolla), used by the certificate checker."""
    a %= ell
    if a == 0:
        return 0
    if legendre(a, ell) != 1:
        return None
    u = 0
    while legendre(u * u - a, ell) != -1:
        u += 1
    w = (u * u - a) % ell
    # (u + sqrt(w))^((ell+1)/2) in F_ell[sqrt(w)]
    x, y = 1, 0
    bx, by = u, 1
    e = (ell + 1) // 2
    while e:
        if e & 1:
            x, y = (x * bx + y * by * w) % ell, (x * by + y * bx) % ell
        bx, by = (bx * bx + by * by * w) % ell, (2 * bx * by) % ell
        e >>= 1
    return min(x, ell - x)


def primitive_root(ell: int, factors: Sequence[int] | None = None) -> int:
    if ell == 2:
        return 1
    qs = list(factors) if factors is not None else prime_factors(ell - 1)
    g = 2
    while True:
        if all(pow(g, (ell - 1) // q, ell) != 1 for q in qs):
            return g
        g += 1


def roots_of_unity(ell: int, t: int, factors: Sequence[int] | None = None) -> list[int]:
    """The t elements zeta of F_ell^* with zeta^t = 1, sorted."""
    if t < 1 or (ell - 1) % t:
        raise ValueError(f"t = {t} does not divide ell - 1 = {ell - 1}")
    g = primitive_root(ell, factors)
    h = pow(g, (ell - 1) // t, ell)
    out, z = [], 1
    for _ in range(t):
        out.append(z)
        z = z * h % ell
    return sorted(out)


@dataclass(frozen=True)
class CubicModL:
    """y^2 = x^3 + a2 x^2 + a4 x + a6 over F_ell, ell odd."""

    ell: int
    a2: int
    a4: int
    a6: int

    def rhs(self, x: int) -> int:
        return (((x + self.a2) * x + self.a4) * x + self.a6) % self.ell

    def discriminant(self) -> int:
        a, b, c, p = self.a2, self.a4, self.a6, self.ell
        return (-4 * a**3 * c + a * a * b * b + 18 * a * b * c - 4 * b**3 - 27 * c * c) * 16 % p

    def twist(self, d: int) -> CubicModL:
        p = self.ell
        return CubicModL(p, d * self.a2 % p, d * d * self.a4 % p, d**3 * self.a6 % p)


@dataclass(frozen=True)
class FreyCurveModL:
    ell: int
    x0: int
    zeta: int

    @property
    def a2(self) -> int:
        return 2 * self.x0 % self.ell

    @property
    def a4(self) -> int:
        return (self.x0 * self.x0 + 1) % self.ell

    def cubic(self) -> CubicModL:
        if self.a4 == 0:
            raise SingularReduction(f"x0^2 + 1 = 0 mod {self.ell}")
        return CubicModL(self.ell, self.a2, self.a4, 0)


def reduce_weierstrass(coeffs: Sequence[int], ell: int) -> CubicModL:
    """Complete the square in [a1, a2, a3, a4, a6] modulo an odd prime."""
    a1, a2, a3, a4, a6 = (int(c) for c in coeffs)
    inv2 = pow(2, -1, ell)
    inv4 = inv2 * inv2 % ell
    return CubicModL(
        ell,
        (a2 + a1 * a1 * inv4) % ell,
        (a4 + a1 * a3 * inv2) % ell,
        (a6 + a3 * a3 * inv4) % ell,
    )


def _as_cubic(curve) -> CubicModL:
    if isinstance(curve, CubicModL):
        return curve
    if isinstance(curve, FreyCurveModL):
        return curve.cubic()
    raise TypeError(f"unsupported curve {curve!r}")


def trace_naive(curve) -> int:
    """a_ell = -sum_x chi(f(x)), vectorised over F_ell."""
    c = _as_cubic(curve)
    p = c.ell
    if c.discriminant() == 0:
        raise SingularReduction(f"singular reduction mod {p}")
    x = np.arange(p, dtype=np.int64)
    x2 = x * x % p
    f = (x2 * x % p + c.a2 * x2 % p + c.a4 * x % p + c.a6) % p
    squares = np.zeros(p, dtype=bool)
    squares[x2] = True
    chi = np.where(f == 0, 0, np.where(squares[f], 1, -1))
    return int(-chi.sum())


# Affine points as (x, y); None is the point at infinity.
def _add(c: CubicModL, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    p = c.ell
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + 2 * c.a2 * x1 + c.a4) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - c.a2 - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def _neg(c: CubicModL, P):
    return None if P is None else (P[0], -P[1] % c.ell)


def _mul(c: CubicModL, k: int, P):
    if k < 0:
        return _mul(c, -k, _neg(c, P))
    R = None
    while k:
        if k & 1:
            R = _add(c, R, P)
        P = _add(c, P, P)
        k >>= 1
    return R


def _random_point(c: CubicModL, rng: random.Random):
    while True:
        x = rng.randrange(c.ell)
        r = sqrt_mod(c.rhs(x), c.ell)
        if r is not None:
            return x, r


def _multiple_in_interval(c: CubicModL, P, lo: int, hi: int) -> int:
    """Some M in [lo, hi] with [M]P = O, by baby-step giant-step."""
    m = isqrt(hi - lo + 1) + 1
    baby = {}
    R = None
    for j in range(m):
        baby.setdefault(R, j)
        R = _add(c, R, P)
    step = _mul(c, m, P)
    G = _mul(c, lo, P)
    for i in range(m + 1):
        j = baby.get(_neg(c, G))
        if j is not None and lo + i * m + j <= hi:
            return lo + i * m + j
        G = _add(c, G, step)
    raise ArithmeticError("no multiple of the point order in the Hasse interval")


def _point_order(c: CubicModL, P, multiple: int) -> int:
    r = multiple
    for q in factorint(multiple):
        while r % q == 0 and _mul(c, r // q, P) is None:
            r //= q
    return r


def _crt_solutions(L: int, Lt: int, total: int, lo: int, hi: int) -> list[int]:
    """M in [lo, hi] with M = 0 mod L and M = total mod Lt."""
    g = gcd(L, Lt)
    if total % g:
        return []
    mod = L // g * Lt
    # M = L * u, L u = total (mod Lt)
    u = (total // g) * pow(L // g, -1, Lt // g) % (Lt // g) if Lt // g > 1 else 0
    base = L * u % mod
    first = lo + (base - lo) % mod
    return list(range(first, hi + 1, mod))


def trace_bsgs(curve, seed: int = 0, max_rounds: int = 64) -> int | None:
    """Mestre-style order resolution using the curve and its quadratic twist.

    Returns None when the order stays ambiguous (only possible for tiny ell).
    """
    c = _as_cubic(curve)
    p = c.ell
    if c.discriminant() == 0:
        raise SingularReduction(f"singular reduction mod {p}")
    d = 2
    while legendre(d, p) != -1:
        d += 1
    tw = c.twist(d)
    width = isqrt(4 * p)
    lo, hi = p + 1 - width, p + 1 + width
    total = 2 * p + 2
    rng = random.Random(seed * 1_000_003 + p)
    L = Lt = 1
    for _ in range(max_rounds):
        P = _random_point(c, rng)
        rp = _point_order(c, P, _multiple_in_interval(c, P, lo, hi))
        L = L * rp // gcd(L, rp)
        Q = _random_point(tw, rng)
        rq = _point_order(tw, Q, _multiple_in_interval(tw, Q, total - hi, total - lo))
        Lt = Lt * rq // gcd(Lt, rq)
        if L // gcd(L, Lt) * Lt > hi - lo:
            cands = _crt_solutions(L, Lt, total, lo, hi)
            if len(cands) == 1:
                return p + 1 - cands[0]
    cands = _crt_solutions(L, Lt, total, lo, hi)
    return p + 1 - cands[0] if len(cands) == 1 else None


def trace_of_frobenius(curve, threshold: int = NAIVE_LIMIT) -> int:
    """a_ell = ell + 1 - #E(F_ell); character sum up to threshold, BSGS above."""
    c = _as_cubic(curve)
    if c.ell <= threshold:
        return trace_naive(c)
    a = trace_bsgs(c)
    if a is None:
        return trace_naive(c)
    return a


def frey_trace(ell: int, x0: int) -> int:
    return trace_of_frobenius(FreyCurveModL(ell, x0 % ell, 0))


def _check_A_preconditions(ell: int, t: int, k: int, d1: int, d2: int) -> None:
    if ell < 3 or not is_prime(ell):
        raise ValueError(f"ell = {ell} is not an odd prime")
    if (ell - 1) % t:
        raise ValueError("t must divide ell - 1")
    if k % ell == 0 or (d1 * d2) % ell == 0:
        raise ValueError(f"ell = {ell} divides k or d1*d2")


def _A_filter(ell: int, t: int, k: int, d1: int, d2: int, fk: IntPoly, x0: int) -> bool:
    w = d2 * fk.eval_mod(x0 * x0 % ell, ell) * pow(2 ** (k - 2) * d1, -1, ell) % ell
    return w == 0 or pow(w, t, ell) == 1


def build_A(ell: int, t: int, k: int, pair, fk: IntPoly, factors: Sequence[int] | None = None) -> list[tuple[int, int]]:
    """A(t, ell): pairs (x0, zeta) with d1 (x0^2 + 1) / (2 d2) = zeta in mu_t
    and d2 f_k(x0^2) / (2^(k-2) d1) in mu_t or 0."""
    d1, d2 = pair.d1, pair.d2
    _check_A_preconditions(ell, t, k, d1, d2)
    scale = 2 * d2 * pow(d1, -1, ell) % ell
    out = []
    for zeta in roots_of_unity(ell, t, factors):
        r = sqrt_mod(scale * zeta - 1, ell)
        if r is None:
            continue
        for x0 in {r, (ell - r) % ell}:
            if _A_filter(ell, t, k, d1, d2, fk, x0):
                out.append((x0, zeta))
    return sorted(out)


def _pow_mod_array(base: np.ndarray, e: int, ell: int) -> np.ndarray:
    result = np.ones_like(base)
    while e:
        if e & 1:
            result = result * base % ell
        base = base * base % ell
        e >>= 1
    return result


def build_A_bruteforce(ell: int, t: int, k: int, pair, fk: IntPoly) -> list[tuple[int, int]]:
    """Full scan of F_ell; the oracle for build_A."""
    d1, d2 = pair.d1, pair.d2
    _check_A_preconditions(ell, t, k, d1, d2)
    if ell >= 2**31:
        raise ValueError("the full scan is limited to ell < 2^31")
    x0 = np.arange(ell, dtype=np.int64)
    zeta = (x0 * x0 % ell + 1) * (d1 * pow(2 * d2, -1, ell) % ell) % ell
    hits = np.flatnonzero((zeta != 0) & (_pow_mod_array(zeta, t, ell) == 1))
    return sorted((int(x), int(zeta[x])) for x in hits if _A_filter(ell, t, k, d1, d2, fk, int(x)))


def build_A_alternate(ell: int, t: int, k: int, pair, fk: IntPoly, seed: int = 1) -> list[tuple[int, int]]:
    """A(t, ell) via randomly drawn roots of unity and Cipolla square roots."""
    d1, d2 = pair.d1, pair.d2
    _check_A_preconditions(ell, t, k, d1, d2)
    rng = random.Random(seed)
    mu = {1}
    e = (ell - 1) // t
    while len(mu) < t:
        mu.add(pow(rng.randrange(2, ell), e, ell))
    scale = 2 * d2 * pow(d1, -1, ell) % ell
    out = set()
    for zeta in mu:
        r = sqrt_mod_cipolla(scale * zeta - 1, ell)
        if r is None:
            continue
        for x0 in (r, (ell - r) % ell):
            if _A_filter(ell, t, k, d1, d2, fk, x0):
                out.add((x0, zeta))
    return sorted(out)
