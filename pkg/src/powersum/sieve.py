"""Exponent elimination by primes ell = t n + 1, the range driver, and an
independent certificate checker."""

from __future__ import annotations

import json
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

from .arith import is_prime, prime_factors, primes_in_range
from .decomposition import DecompositionPair
from .ffield import (
    CubicModL,
    build_A,
    build_A_alternate,
    build_A_bruteforce,
    frey_trace,
    legendre,
    trace_bsgs,
    trace_naive,
)
from .newforms import NewformRecord, UNBOUNDED, auxiliary_primes, bound_exponent, expected_level
from .poly import IntPoly, build_f

T_MAX_DEFAULT = 1050


@dataclass(frozen=True, order=True)
class EliminationCertificate:
    k: int
    d1: int
    d2: int
    form: str
    n: int
    t: int
    ell: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> EliminationCertificate:
        obj = json.loads(line)
        return cls(**{key: obj[key] for key in ("k", "d1", "d2", "form", "n", "t", "ell")})


@dataclass(frozen=True, order=True)
class Failure:
    k: int
    d1: int
    d2: int
    form: str
    n: int
    reason: str


@dataclass
class SieveConfig:
    t_max: int = T_MAX_DEFAULT
    n_lo: int = 11
    n_hi: int = 1000
    workers: int = 1
    trace_parity_refinement: bool = True

    def __post_init__(self):
        if self.t_max < 2:
            raise ValueError("t_max must be at least 2")
        if self.n_lo < 11:
            raise ValueError("n_lo must be at least 11")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if self.n_hi < self.n_lo - 1:
            raise ValueError("n_hi must not precede n_lo")


@dataclass
class SieveReport:
    eliminated: list[EliminationCertificate] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)
    wall_time: float = 0.0
    per_n_seconds: dict[int, float] = field(default_factory=dict)
    n_range: tuple[int, int] = (0, -1)

    def timing_stats(self) -> dict[str, float]:
        vals = list(self.per_n_seconds.values())
        if not vals:
            return {"count": 0}
        return {
            "count": len(vals),
            "mean": statistics.fmean(vals),
            "max": max(vals),
            "total": sum(vals),
        }

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "n_range": list(self.n_range),
            "eliminated": [asdict(c) for c in self.eliminated],
            "failures": [asdict(f) for f in self.failures],
        }
        if timing:
            out["wall_time"] = self.wall_time
            out["timing"] = self.timing_stats()
        return out

    def summary(self) -> str:
        lines = [f"{'form':<14} {'pair':<10} {'n range':<16} {'eliminated':>10} {'failed':>7} {'max t':>6}"]
        groups: dict[tuple, list] = {}
        for c in self.eliminated:
            groups.setdefault((c.form, c.d1, c.d2), [[], []])[0].append(c)
        for f in self.failures:
            groups.setdefault((f.form, f.d1, f.d2), [[], []])[1].append(f)
        for (form, d1, d2), (ok, bad) in sorted(groups.items()):
            ns = [c.n for c in ok] + [f.n for f in bad]
            max_t = max((c.t for c in ok), default=0)
            lines.append(
                f"{form:<14} {f'({d1},{d2})':<10} {f'[{min(ns)},{max(ns)}]':<16} {len(ok):>10} {len(bad):>7} {max_t:>6}"
            )
        lines.append(f"wall time {self.wall_time:.2f}s, {len(self.eliminated)} certificates, {len(self.failures)} failures")
        return "\n".join(lines)


def _frey_norm_ok(form: NewformRecord, ell: int, n: int, traces: Iterable[int]) -> bool:
    """The elimination condition at ell for the given Frey traces."""
    entry = form.hecke_at(ell)
    extra = 1
    if ell % 4 == 1:
        extra = entry.mod(2, n) * entry.mod(-2, n) % n
    for a in traces:
        if entry.mod(a, n) * extra % n == 0:
            return False
    return True


def _frey_traces(ell: int, A: Sequence[tuple[int, int]], use_symmetry: bool = True) -> list[int]:
    """Traces of E_{x0} over the x0 in A; E_{-x0} is the twist by -1."""
    chi = legendre(-1, ell)
    known: dict[int, int] = {}
    out = []
    for x0, _ in A:
        if x0 in known:
            out.append(known[x0])
            continue
        a = frey_trace(ell, x0)
        known[x0] = a
        if use_symmetry:
            known[(-x0) % ell] = chi * a
        out.append(a)
    return out


def eliminate_exponent(
    k: int,
    pair: DecompositionPair,
    form: NewformRecord,
    n: int,
    t_max: int = T_MAX_DEFAULT,
    fk: IntPoly | None = None,
) -> EliminationCertificate | Failure:
    """Smallest even t <= t_max whose prime ell = t n + 1 eliminates n for form."""
    if n < 11 or not is_prime(n):
        raise ValueError(f"n = {n} must be a prime >= 11")
    fk = fk or build_f(k)
    tried = starved = 0
    for t in range(2, t_max + 1, 2):
        ell = t * n + 1
        if k % ell == 0 or not is_prime(ell):
            continue
        tried += 1
        A = build_A(ell, t, k, pair, fk, factors=sorted(set(prime_factors(t)) | {n}))
        if not A:
            return EliminationCertificate(k, pair.d1, pair.d2, form.label, n, t, ell)
        if not form.has_data(ell):
            starved += 1
            continue
        if _frey_norm_ok(form, ell, n, _frey_traces(ell, A)):
            return EliminationCertificate(k, pair.d1, pair.d2, form.label, n, t, ell)
    if tried and starved == tried:
        return Failure(k, pair.d1, pair.d2, form.label, n, "missing data")
    return Failure(k, pair.d1, pair.d2, form.label, n, "t exhausted")


@dataclass(frozen=True)
class SieveTask:
    pair: DecompositionPair
    form: NewformRecord
    exponents: frozenset | None  # None means every n in range


def _forms_at(forms, level: int) -> list[NewformRecord]:
    if isinstance(forms, dict):
        if level not in forms:
            raise KeyError(f"no newforms loaded for level {level}")
        return list(forms[level])
    return [f for f in forms if f.level == level]


def sieve_tasks(k: int, pairs: Sequence[DecompositionPair], forms, parity_refinement: bool = True,
                ell_below: int = 50) -> list[SieveTask]:
    """Forms whose exponent bound leaves primes n >= 11 (or no bound at all).

    ``forms`` is either a mapping level -> records or a flat list of records.
    """
    tasks = []
    for pair in pairs:
        for form in _forms_at(forms, expected_level(k, pair)):
            bound = bound_exponent(form, auxiliary_primes(form.level, ell_below), parity_refinement)
            if bound is UNBOUNDED:
                tasks.append(SieveTask(pair, form, None))
            elif bound:
                tasks.append(SieveTask(pair, form, frozenset(bound)))
    return tasks


def _run_one_n(args) -> tuple[int, list, float]:
    k, n, tasks, t_max = args
    start = time.perf_counter()
    fk = build_f(k)
    results = []
    for task in tasks:
        if task.exponents is not None and n not in task.exponents:
            continue
        results.append(eliminate_exponent(k, task.pair, task.form, n, t_max, fk))
    return n, results, time.perf_counter() - start


def sieve_range(k: int, pairs: Sequence[DecompositionPair], forms, config: SieveConfig) -> SieveReport:
    """Run eliminate_exponent for every prime n in [n_lo, n_hi] and every form
    that survives bound_exponent (only at the exponents it leaves open)."""
    tasks = sieve_tasks(k, pairs, forms, config.trace_parity_refinement)
    return run_tasks(k, tasks, config)


def run_tasks(k: int, tasks: Sequence[SieveTask], config: SieveConfig) -> SieveReport:
    """Work is sharded by n; the report is sorted and independent of scheduling."""
    start = time.perf_counter()
    ns = primes_in_range(config.n_lo, config.n_hi)
    jobs = [(k, n, list(tasks), config.t_max) for n in ns]
    report = SieveReport(n_range=(config.n_lo, config.n_hi))
    if config.workers == 1 or len(jobs) <= 1:
        collected = [_run_one_n(job) for job in jobs]
    else:
        chunk = max(1, len(jobs) // (config.workers * 8))
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            collected = list(pool.map(_run_one_n, jobs, chunksize=chunk))
    for n, results, seconds in collected:
        report.per_n_seconds[n] = seconds
        for r in results:
            (report.eliminated if isinstance(r, EliminationCertificate) else report.failures).append(r)
    report.eliminated.sort(key=lambda c: (c.n, c.form, c.d1, c.d2))
    report.failures.sort(key=lambda f: (f.n, f.form, f.d1, f.d2))
    report.wall_time = time.perf_counter() - start
    return report


@dataclass(frozen=True)
class Verification:
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


def _condition_holds(cert: EliminationCertificate, form: NewformRecord, fk: IntPoly, independent: bool) -> bool | None:
    """Re-evaluate the condition at (t, ell); None when Hecke data is missing."""
    pair = DecompositionPair(cert.k, cert.d1, cert.d2)
    ell, t, n = cert.ell, cert.t, cert.n
    if independent:
        A = build_A_bruteforce(ell, t, cert.k, pair, fk) if ell < 10**5 else build_A_alternate(ell, t, cert.k, pair, fk)
    else:
        A = build_A(ell, t, cert.k, pair, fk)
    if not A:
        return True
    if not form.has_data(ell):
        return None
    traces = []
    for x0, _ in A:
        cubic = CubicModL(ell, 2 * x0 % ell, (x0 * x0 + 1) % ell, 0)
        if independent and ell > 2**22:
            a = trace_bsgs(cubic, seed=7)
            traces.append(trace_naive(cubic) if a is None else a)
        elif independent:
            traces.append(trace_naive(cubic))
        else:
            traces.append(frey_trace(ell, x0))
    return _frey_norm_ok(form, ell, n, traces)


def verify_certificate(cert: EliminationCertificate, forms: dict[str, NewformRecord] | Sequence[NewformRecord],
                       check_canonical: bool = True) -> Verification:
    """Re-check a certificate with an independent A(t, ell) construction."""
    if not isinstance(forms, dict):
        forms = {f.label: f for f in forms}
    if cert.form not in forms:
        raise KeyError(f"unknown form label {cert.form!r}")
    form = forms[cert.form]
    if cert.ell != cert.t * cert.n + 1 or cert.t < 2 or cert.t % 2:
        return Verification(False, "shape")
    if not is_prime(cert.ell) or not is_prime(cert.n) or cert.n < 11 or cert.k % cert.ell == 0:
        return Verification(False, "shape")
    pair = DecompositionPair(cert.k, cert.d1, cert.d2)
    try:
        pair.check()
    except ValueError:
        return Verification(False, "pair")
    fk = build_f(cert.k)
    held = _condition_holds(cert, form, fk, independent=True)
    if held is None:
        return Verification(False, "missing data")
    if not held:
        return Verification(False, "condition fails")
    if check_canonical:
        for t in range(2, cert.t, 2):
            ell = t * cert.n + 1
            if cert.k % ell == 0 or not is_prime(ell):
                continue
            earlier = EliminationCertificate(cert.k, cert.d1, cert.d2, cert.form, cert.n, t, ell)
            if _condition_holds(earlier, form, fk, independent=False):
                return Verification(True, "witness mismatch")
    return Verification(True, "ok")


def write_certificates(certs: Iterable[EliminationCertificate], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in certs:
            fh.write(c.to_json() + "\n")


def read_certificates(path: str | os.PathLike) -> list[EliminationCertificate]:
    with open(path, encoding="utf-8") as fh:
        return [EliminationCertificate.from_json(line) for line in fh if line.strip()]
