"""Exact integer utilities: valuations, primality, n-th power exclusion."""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import isqrt

from sympy import factorint, integer_nthroot

# Strong-probable-prime bases that are deterministic below 3.3 * 10**24.
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_DETERMINISTIC_LIMIT = 3317044064679887385961981
_RANDOM_ROUNDS = 64  # 4**-64 = 2**-128

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True)
class Primality:
    value: int
    is_prime: bool
    certain: bool
    error_bound: float = 0.0

    def __bool__(self) -> bool:
        return self.is_prime


@dataclass(frozen=True)
class FactorWitness:
    """A prime q with 1 <= v_q(m) <= 2, so m is no n-th power for n >= 3."""

    m: int
    q: int
    exponent: int


def valuation(m: int, p: int) -> int:
    if m == 0:
        raise ValueError("valuation of 0 is undefined")
    if p < 2:
        raise ValueError(f"p must be prime, got {p}")
    m = abs(m)
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return e


def _strong_probable_prime(m: int, base: int, d: int, s: int) -> bool:
    x = pow(base, d, m)
    if x == 1 or x == m - 1:
        return True
    for _ in range(s - 1):
        x = x * x % m
        if x == m - 1:
            return True
    return False


def primality(m: int) -> Primality:
    """Miller-Rabin with a fixed base set below 3.3e24, 64 random rounds above."""
    if m < 2:
        return Primality(m, False, True)
    for p in _SMALL_PRIMES:
        if m % p == 0:
            return Primality(m, m == p, True)
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if m < _DETERMINISTIC_LIMIT:
        ok = all(_strong_probable_prime(m, b, d, s) for b in _DETERMINISTIC_BASES)
        return Primality(m, ok, True)
    rng = random.Random(m)
    for _ in range(_RANDOM_ROUNDS):
        if not _strong_probable_prime(m, rng.randrange(2, m - 1), d, s):
            return Primality(m, False, True)
    return Primality(m, True, False, 2.0**-128)


def is_prime(m: int) -> bool:
    return primality(m).is_prime


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, bound + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def primes_in_range(lo: int, hi: int) -> list[int]:
    return [p for p in primes_up_to(hi) if p >= lo]


def prime_factors(m: int) -> list[int]:
    return sorted(factorint(abs(m)))


def radical(m: int) -> int:
    r = 1
    for p in prime_factors(m):
        r *= p
    return r


def iroot(m: int, n: int) -> tuple[int, bool]:
    """Floor of the real n-th root of m >= 0 and whether it is exact."""
    if m < 0:
        raise ValueError("negative radicand")
    root, exact = integer_nthroot(m, n)
    return int(root), bool(exact)


def is_perfect_power(m: int, n: int) -> bool:
    return iroot(m, n)[1]


def nth_power_exclusion_witness(m: int, trial_bound: int = 10_000) -> FactorWitness | None:
    """Smallest prime q <= trial_bound with 1 <= v_q(m) <= 2, or None."""
    if m < 2:
        raise ValueError("m must be at least 2")
    for q in primes_up_to(trial_bound):
        if m % q:
            continue
        e = valuation(m, q)
        if e < 3:
            return FactorWitness(m, q, e)
    return None
