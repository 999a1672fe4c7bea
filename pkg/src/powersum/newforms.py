"""Weight-2 newform data at the Frey levels 2^7 * rad(d1 d2): loading, Hecke
traces, and bounding the exponent n through trace congruences."""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd, isqrt
from pathlib import Path
from typing import Iterable, Sequence

from .arith import prime_factors, primes_up_to, radical
from .ffield import frey_trace, reduce_weierstrass, trace_of_frobenius

DATA_ENV = "POWERSUM_DATA"


class NewformDataError(ValueError):
    pass


class MissingHeckeData(LookupError):
    pass


class _Unbounded:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()


@dataclass(frozen=True)
class EllipticCurveQ:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    conductor: int

    @property
    def coeffs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def discriminant(self) -> int:
        a1, a2, a3, a4, a6 = self.coeffs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def ap(self, ell: int) -> int:
        if self.conductor % ell == 0 or ell == 2:
            raise ValueError(f"bad reduction at {ell}")
        return trace_of_frobenius(reduce_weierstrass(self.coeffs, ell))


@dataclass(frozen=True)
class HeckeEntry:
    """Characteristic polynomial of a_ell(f) over Q, constant term first."""

    ell: int
    charpoly: tuple[int, ...]

    def __call__(self, a: int) -> int:
        acc = 0
        for c in reversed(self.charpoly):
            acc = acc * a + c
        return acc

    def mod(self, a: int, n: int) -> int:
        acc = 0
        for c in reversed(self.charpoly):
            acc = (acc * a + c) % n
        return acc


@dataclass(frozen=True)
class NewformRecord:
    label: str
    level: int
    degree: int
    rational: bool
    curve: EllipticCurveQ | None = None
    hecke: dict[int, HeckeEntry] = field(default_factory=dict, hash=False, compare=False)

    def hecke_at(self, ell: int) -> HeckeEntry:
        entry = self.hecke.get(ell)
        if entry is not None:
            return entry
        if self.rational and self.curve is not None and ell != 2 and self.level % ell:
            return HeckeEntry(ell, (-_rational_ap(self.curve, ell), 1))
        raise MissingHeckeData(f"{self.label}: no Hecke data at ell = {ell}")

    def has_data(self, ell: int) -> bool:
        return ell in self.hecke or (self.rational and self.curve is not None and ell != 2 and self.level % ell != 0)


# Point-count backfill for rational forms.  Values are deterministic, so a
# race only recomputes the same number.
_AP_CACHE: dict[tuple[tuple[int, ...], int], int] = {}
_AP_LOCK = threading.Lock()


def _rational_ap(curve: EllipticCurveQ, ell: int) -> int:
    key = (curve.coeffs, ell)
    with _AP_LOCK:
        hit = _AP_CACHE.get(key)
    if hit is not None:
        return hit
    value = curve.ap(ell)
    with _AP_LOCK:
        _AP_CACHE[key] = value
    return value


def expected_level(k: int, pair) -> int:
    return 2**7 * radical(pair.d1 * pair.d2)


def _as_int(value, where: str) -> int:
    if isinstance(value, bool):
        raise NewformDataError(f"{where}: expected integer, got bool")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            pass
    raise NewformDataError(f"{where}: expected integer, got {value!r}")


def hasse_sign_check(entry: HeckeEntry) -> bool:
    """Necessary condition for all roots in [-2 sqrt(ell), 2 sqrt(ell)]:
    charpoly(B) > 0 and (-1)^d charpoly(-B) > 0 at B = ceil(2 sqrt(ell))."""
    B = isqrt(4 * entry.ell)
    if B * B < 4 * entry.ell:
        B += 1
    d = len(entry.charpoly) - 1
    return entry(B) > 0 and (-1) ** d * entry(-B) > 0


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _divmod_poly(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = a[:]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        _trim(a)
    return _trim(q), a


def _sturm_sequence(p0: list[Fraction]) -> list[list[Fraction]]:
    p1 = _trim([i * c for i, c in enumerate(p0)][1:])
    seq = [p0, p1]
    while len(seq[-1]) > 1:
        r = _divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x: Fraction) -> int:
    signs = []
    for p in seq:
        acc = Fraction(0)
        for c in reversed(p):
            acc = acc * x + c
        if acc:
            signs.append(acc > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def hasse_sturm_check(entry: HeckeEntry) -> bool:
    """Every root real with |root| <= 2 sqrt(ell), by Sturm counts on the
    squarefree part.  The endpoint is 2 sqrt(ell) rounded up at 1e-6."""
    p = [Fraction(c) for c in entry.charpoly]
    if len(p) == 1:
        return True
    seq = _sturm_sequence(p)
    if len(seq[-1]) > 1:
        p = _divmod_poly(p, seq[-1])[0]
        seq = _sturm_sequence(p)
    B = Fraction(isqrt(4 * entry.ell * 10**12) + 1, 10**6)
    distinct = len(p) - 1
    return _sign_changes(seq, -B) - _sign_changes(seq, B) == distinct


def _parse_record(obj, idx: int) -> NewformRecord:
    if not isinstance(obj, dict):
        raise NewformDataError(f"record #{idx}: expected an object")
    label = obj.get("label")
    if not isinstance(label, str) or not label:
        raise NewformDataError(f"record #{idx}: field 'label' missing or not a string")
    for key in ("level", "degree", "rational", "curve", "hecke"):
        if key not in obj:
            raise NewformDataError(f"{label}: missing field '{key}'")
    level = _as_int(obj["level"], f"{label}.level")
    degree = _as_int(obj["degree"], f"{label}.degree")
    rational = obj["rational"]
    if not isinstance(rational, bool):
        raise NewformDataError(f"{label}.rational: expected bool")
    if rational != (degree == 1):
        raise NewformDataError(f"{label}.rational: inconsistent with degree {degree}")
    if level % 2**7 or (level // 2**7) % 2 == 0 or radical(level // 2**7) != level // 2**7:
        raise NewformDataError(f"{label}.level: {level} is not 2^7 times an odd squarefree number")
    curve = None
    if obj["curve"] is not None:
        c = obj["curve"]
        if not isinstance(c, list) or len(c) != 5:
            raise NewformDataError(f"{label}.curve: expected five coefficients")
        curve = EllipticCurveQ(*(_as_int(v, f"{label}.curve") for v in c), conductor=level)
        if curve.discriminant() == 0:
            raise NewformDataError(f"{label}.curve: singular curve")
    if rational and curve is None:
        raise NewformDataError(f"{label}.curve: required for rational forms")
    if not isinstance(obj["hecke"], list):
        raise NewformDataError(f"{label}.hecke: expected a list")
    hecke: dict[int, HeckeEntry] = {}
    for h in obj["hecke"]:
        if not isinstance(h, dict) or "ell" not in h or "charpoly" not in h:
            raise NewformDataError(f"{label}.hecke: malformed entry {h!r}")
        ell = _as_int(h["ell"], f"{label}.hecke.ell")
        cp = tuple(_as_int(v, f"{label}.hecke[{ell}].charpoly") for v in h["charpoly"])
        if len(cp) != degree + 1:
            raise NewformDataError(f"{label}.hecke[{ell}].charpoly: degree {len(cp) - 1} != {degree}")
        if cp[-1] != 1:
            raise NewformDataError(f"{label}.hecke[{ell}].charpoly: not monic")
        entry = HeckeEntry(ell, cp)
        if not hasse_sign_check(entry):
            raise NewformDataError(f"{label}.hecke[{ell}].charpoly: violates the Hasse bound")
        if ell in hecke:
            raise NewformDataError(f"{label}.hecke: duplicate ell = {ell}")
        hecke[ell] = entry
    if not rational and not hecke:
        raise NewformDataError(f"{label}.hecke: irrational forms need Hecke data")
    return NewformRecord(label, level, degree, rational, curve, hecke)


def load(path: str | os.PathLike) -> list[NewformRecord]:
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        return []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NewformDataError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, list):
        raise NewformDataError(f"{path}: top level must be a list")
    records, seen = [], set()
    for idx, obj in enumerate(data):
        rec = _parse_record(obj, idx)
        if rec.label in seen:
            raise NewformDataError(f"{rec.label}: duplicate label")
        seen.add(rec.label)
        records.append(rec)
    return records


def dump(records: Iterable[NewformRecord], path: str | os.PathLike) -> None:
    out = []
    for r in records:
        out.append({
            "label": r.label,
            "level": r.level,
            "degree": r.degree,
            "rational": r.rational,
            "curve": list(r.curve.coeffs) if r.curve else None,
            "hecke": [
                {"ell": e.ell, "charpoly": [str(c) if abs(c) >= 2**53 else c for c in e.charpoly]}
                for e in sorted(r.hecke.values(), key=lambda e: e.ell)
            ],
        })
    Path(path).write_text(json.dumps(out) + "\n", encoding="utf-8")


def data_dir() -> Path:
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("powersum") / "data"))


def level_path(level: int, directory: str | os.PathLike | None = None) -> Path:
    return Path(directory or data_dir()) / f"newforms_{level}.json"


@lru_cache(maxsize=None)
def _load_cached(path: str, mtime: float) -> tuple[NewformRecord, ...]:
    return tuple(load(path))


def load_level(level: int, directory: str | os.PathLike | None = None) -> list[NewformRecord]:
    path = level_path(level, directory)
    if not path.exists():
        raise FileNotFoundError(f"no newform data for level {level} at {path}")
    return list(_load_cached(str(path), path.stat().st_mtime))


def norm_trace_diff(record: NewformRecord, ell: int, a: int) -> int:
    """|Norm(a_ell(f) - a)| = |charpoly(a)|."""
    return abs(record.hecke_at(ell)(a))


@lru_cache(maxsize=None)
def _attained_frey_traces(ell: int) -> tuple[int, ...]:
    return tuple(sorted({frey_trace(ell, x0) for x0 in range(ell) if (x0 * x0 + 1) % ell}))


def frey_trace_set(ell: int, parity_refinement: bool = True, attained: bool = True) -> list[int]:
    """Possible a_ell of the Frey curve at good reduction.

    Unrefined: every integer in the Hasse interval. Refined: the even ones (the
    curve has a rational 2-torsion point), or with ``attained`` only the traces
    a_ell(E_x0) that occur for some x0 in F_ell.
    """
    if parity_refinement and attained:
        return list(_attained_frey_traces(ell))
    bound = isqrt(4 * ell)
    values = range(-bound, bound + 1)
    return [a for a in values if a % 2 == 0] if parity_refinement else list(values)


def _residue_factors(record: NewformRecord, ell: int, parity_refinement: bool, attained: bool) -> list[int]:
    entry = record.hecke_at(ell)
    factors = [ell, abs(entry(ell + 1)), abs(entry(-(ell + 1)))]
    factors += [abs(entry(a)) for a in frey_trace_set(ell, parity_refinement, attained)]
    return factors


def exponent_residue(record: NewformRecord, ell: int, parity_refinement: bool = True, attained: bool = True) -> int:
    """R_ell = ell * |Norm((ell+1)^2 - a_ell(f)^2)| * prod_a |Norm(a_ell(f) - a)|."""
    r = 1
    for f in _residue_factors(record, ell, parity_refinement, attained):
        r *= f
    return r


def bound_exponent(record: NewformRecord, primes: Sequence[int], parity_refinement: bool = True,
                   attained: bool = True):
    """Primes n >= 11 dividing gcd_ell R_ell, or UNBOUNDED if every R_ell is 0."""
    if not primes:
        raise ValueError("need at least one prime ell")
    B = 0
    first_factors = None
    for ell in primes:
        if (2 * record.level) % ell == 0:
            raise ValueError(f"ell = {ell} divides 2 * level")
        factors = _residue_factors(record, ell, parity_refinement, attained)
        r = 1
        for f in factors:
            r *= f
        if r and first_factors is None:
            first_factors = factors
        B = gcd(B, r)
    if B == 0:
        return UNBOUNDED
    # every prime of B divides one of the (moderately sized) factors of a nonzero R_ell
    candidates = set()
    for f in first_factors:
        candidates.update(_prime_divisors_at_least(f, 11))
    return {p for p in candidates if B % p == 0}


def _prime_divisors_at_least(m: int, floor: int) -> list[int]:
    for p in primes_up_to(floor - 1):
        while m % p == 0:
            m //= p
    return prime_factors(m) if m > 1 else []


def auxiliary_primes(level: int, below: int = 50) -> list[int]:
    return [p for p in primes_up_to(below - 1) if (2 * level) % p]
