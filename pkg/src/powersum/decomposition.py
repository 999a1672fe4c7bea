"""Case data for x^k + (x+1)^k = y^n: the divisor pairs (d1, d2), the
Lebesgue-Nagell multipliers a, and the y1 = 1 exclusions."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd, isqrt, prod

from .arith import FactorWitness, nth_power_exclusion_witness, prime_factors, valuation
from .poly import check_k, m_value


@dataclass(frozen=True, order=True)
class DecompositionPair:
    k: int
    d1: int
    d2: int

    @property
    def d(self) -> int:
        return self.d1 * self.d2

    def check(self) -> None:
        allowed = set(prime_set_P(self.k))
        if gcd(self.d1, self.d2) != 1:
            raise ValueError(f"{self}: d1, d2 not coprime")
        if (self.k // 2) % self.d:
            raise ValueError(f"{self}: d1*d2 does not divide k/2")
        if any(p not in allowed for p in prime_factors(self.d)):
            raise ValueError(f"{self}: prime factor outside P(k)")


@dataclass(frozen=True, order=True)
class LebesgueNagellCase:
    k: int
    n: int
    a: int


def prime_set_P(k: int) -> list[int]:
    """Primes p = 1 (mod 4) dividing k/2."""
    check_k(k, 6)
    return [p for p in prime_factors(k // 2) if p % 4 == 1]


def divisor_set_D(k: int) -> list[int]:
    """1 and the divisors of k/2 built from primes in P(k)."""
    half = k // 2
    ranges = [[p**e for e in range(valuation(half, p) + 1)] for p in prime_set_P(k)]
    return sorted(prod(c) for c in product(*ranges))


def pair_list(k: int) -> list[DecompositionPair]:
    half = k // 2
    D = divisor_set_D(k)
    return [
        DecompositionPair(k, d1, d2)
        for d1 in D
        for d2 in D
        if gcd(d1, d2) == 1 and half % (d1 * d2) == 0
    ]


def table1_pairs(k: int) -> list[DecompositionPair]:
    return [p for p in pair_list(k) if p.d > 1]


def exponent_gate(k: int, n: int) -> bool:
    """n > 2 v_p(k) for every prime p = 1 (mod 4) dividing k."""
    return all(n > 2 * valuation(k, p) for p in prime_factors(k) if p % 4 == 1)


def lebesgue_nagell_cases(k: int, n: int) -> list[LebesgueNagellCase]:
    if n < 3:
        raise ValueError("n must be at least 3")
    P = prime_set_P(k)
    values = {prod(p**r for p, r in zip(P, rs)) for rs in product(range(n), repeat=len(P))}
    values.discard(1)
    return [LebesgueNagellCase(k, n, a) for a in sorted(values)]


def y1_equals_1_triples(k_min: int, k_max: int) -> list[tuple[int, int, int]]:
    """Triples (d2, k, x) with x^2 + 1 = 2 d2, d2 > 1 from the pairs of k."""
    if not 6 <= k_min <= k_max <= 100:
        raise ValueError("need 6 <= k_min <= k_max <= 100")
    out = []
    for k in range(k_min, k_max + 1):
        if k % 4 != 2:
            continue
        for d2 in sorted({p.d2 for p in pair_list(k) if p.d1 == 1 and p.d2 > 1}):
            x = isqrt(2 * d2 - 1)
            if x * x == 2 * d2 - 1 and x > 1:
                out.append((d2, k, x))
    return out


def y1_exclusion_witnesses(k_min: int = 6, k_max: int = 100) -> list[tuple[int, int, int, FactorWitness | None]]:
    return [(d2, k, x, nth_power_exclusion_witness(m_value(k, x))) for d2, k, x in y1_equals_1_triples(k_min, k_max)]


def infinite_family_hypothesis(k: int) -> bool:
    """True iff every odd prime factor of k is 3 (mod 4)."""
    check_k(k)
    return all(p % 4 == 3 for p in prime_factors(k) if p != 2)
