"""Exact integer polynomials g_k, f_k and the shifted tail of f_k(X - 1)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor
from typing import Sequence


def check_k(k: int, minimum: int = 2) -> int:
    if not isinstance(k, int) or k < minimum or k % 4 != 2:
        raise ValueError(f"k must be an integer >= {minimum} with k = 2 (mod 4), got {k!r}")
    return k


@dataclass(frozen=True)
class IntPoly:
    """Dense polynomial; coeffs[i] is the coefficient of t**i."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int]):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def eval_mod(self, t: int, modulus: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * t + c) % modulus
        return acc

    def __add__(self, other: IntPoly) -> IntPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly([x + y for x, y in zip(a, b)])

    def __mul__(self, other: IntPoly | int) -> IntPoly:
        if isinstance(other, int):
            return IntPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return IntPoly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> IntPoly:
        result, base = IntPoly([1]), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def compose(self, inner: IntPoly) -> IntPoly:
        acc = IntPoly([])
        for c in reversed(self.coeffs):
            acc = acc * inner + IntPoly([c])
        return acc

    def substitute_square(self) -> IntPoly:
        """p(t) -> p(t**2)."""
        out = [0] * (2 * len(self.coeffs) - 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[2 * i] = c
        return IntPoly(out)

    def exact_div(self, divisor: IntPoly) -> IntPoly:
        rem = list(self.coeffs)
        lead = divisor.coeffs[-1]
        q = [0] * max(len(rem) - len(divisor.coeffs) + 1, 0)
        for i in range(len(q) - 1, -1, -1):
            c, r = divmod(rem[i + divisor.degree], lead)
            if r:
                raise ValueError("division is not exact over the integers")
            q[i] = c
            for j, d in enumerate(divisor.coeffs):
                rem[i + j] -= c * d
        if any(rem):
            raise ValueError("nonzero remainder")
        return IntPoly(q)

    def __repr__(self) -> str:
        terms = [f"{c}*t^{i}" for i, c in enumerate(self.coeffs) if c]
        return "IntPoly(" + (" + ".join(reversed(terms)) or "0") + ")"


@dataclass(frozen=True)
class ShiftedTail:
    k: int
    h: tuple[int, ...]
    X0: int

    @property
    def top(self) -> int:
        return self.h[-1]


def build_g(k: int) -> IntPoly:
    check_k(k)
    # ((t-1)^k + (t+1)^k)/2 keeps only even powers, each binom(k, j)
    return IntPoly([comb(k, j) if j % 2 == 0 else 0 for j in range(k + 1)])


def build_f(k: int) -> IntPoly:
    """f_k with (t^2 + 1) f_k(t^2) = g_k(t), built from the closed-form sum."""
    check_k(k, 6)
    half = k // 2
    t_plus_1 = IntPoly([1, 1])
    acc = IntPoly([])
    for i in range((half - 1) // 2 + 1):
        j = 2 * i + 1
        monomial = IntPoly([0] * ((half - j) // 2) + [1])
        acc = acc + (t_plus_1 ** (2 * i)) * monomial * (2 ** (half - j) * comb(half, j))
    return acc


def m_value(k: int, x: int) -> int:
    """((x - 1)^k + (x + 1)^k) / 2."""
    return ((x - 1) ** k + (x + 1) ** k) // 2


def shifted_tail(k: int) -> ShiftedTail:
    check_k(k, 6)
    shifted = build_f(k).compose(IntPoly([-1, 1]))
    h = shifted.coeffs[:-1]
    top = h[-1]
    ratio = Fraction(sum(abs(c) for c in h[:-1]), top)
    X0 = floor(max(ratio, Fraction(200 * top))) + 1
    return ShiftedTail(k, tuple(h), X0)
