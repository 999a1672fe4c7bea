"""Upper bound n0 on the exponent from linear forms in two logarithms.

Every real quantity is an mpmath interval at a caller-chosen precision; integer
results are read off the upper endpoint so a bound is never underestimated.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from .decomposition import DecompositionPair, table1_pairs
from .poly import check_k, shifted_tail

DEFAULT_PREC = 80
VALID_M = tuple(range(10, 31, 2))
# Laurent's C2(m) for the two heights actually used
LAURENT_C2 = {10: Fraction(252, 10), 12: Fraction(234, 10)}
C1_FACTOR = Fraction(10051, 10000)
C1_CAP_FACTOR = Fraction(50255, 100000)
SEED_FLOOR = 600
MAX_ITERATIONS = 10_000


def _ctx(prec: int) -> MPIntervalContext:
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def _iv(ctx: MPIntervalContext, q: Fraction | int):
    q = Fraction(q)
    return ctx.mpf(q.numerator) / q.denominator


def _upper(x) -> tuple:
    return x._mpi_[1]


def _floor_upper(x) -> int:
    return int(libmp.to_int(libmp.mpf_floor(_upper(x))))


def _ceil_upper(x) -> int:
    return int(libmp.to_int(libmp.mpf_ceil(_upper(x))))


def _float_upper(x) -> float:
    return libmp.to_float(_upper(x))


def _below_upper(n: int, x) -> bool:
    """n < x, deciding ties in favour of the larger bound."""
    return libmp.mpf_lt(libmp.from_int(n), _upper(x))


@dataclass(frozen=True)
class BoundBreakdown:
    k: int
    d1: int
    d2: int
    A: Fraction
    c1: Fraction
    X0: int
    n1: float
    n2: int
    n3: float
    n4: float
    m: int
    C2: Fraction
    n_ineq: int
    n0: int

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("A", "c1", "C2"):
            out[key] = str(out[key])
        return out


@dataclass(frozen=True)
class NotApplicable:
    k: int
    reason: str

    def to_dict(self) -> dict:
        return asdict(self)


def _check_pair(k: int, pair: DecompositionPair) -> None:
    if pair.k != k:
        raise ValueError(f"pair {pair} does not belong to k = {k}")
    pair.check()


def compute_A(k: int, pair: DecompositionPair) -> Fraction:
    """A = 2^(k/2 - 1) (d1/d2)^(k/2)."""
    return Fraction(2) ** (k // 2 - 1) * Fraction(pair.d1, pair.d2) ** (k // 2)


def compute_c1(k: int, pair: DecompositionPair) -> Fraction:
    """1.0051 d1 h / d2 with h = k (k/2 - 1) the sub-leading shifted coefficient."""
    _check_pair(k, pair)
    return C1_FACTOR * pair.d1 * k * (k // 2 - 1) / pair.d2


def c1_cap(k: int) -> Fraction:
    return C1_CAP_FACTOR * k * k * (k // 2 - 1)


def _n1(ctx, k: int, X0: int):
    return ctx.log(_iv(ctx, Fraction(k * X0, 4))) / ctx.log(3)


def compute_n1(k: int, X0: int | None = None, prec: int = DEFAULT_PREC) -> float:
    """log(k X0 / 4) / log 3."""
    check_k(k, 6)
    if X0 is None:
        X0 = shifted_tail(k).X0
    return _float_upper(_n1(_ctx(prec), k, X0))


def _n2(ctx, k: int, pair: DecompositionPair) -> int:
    A = compute_A(k, pair)
    if A == 1:
        raise ValueError("A = 1 has no logarithm bound")
    c1 = _iv(ctx, compute_c1(k, pair))
    log_a = abs(ctx.log(_iv(ctx, A)))
    log3 = ctx.log(3)
    terms = [ctx.log(c1 / log_a) / log3, ctx.log(c1) / log3, (log_a + 1) / ctx.log(_iv(ctx, Fraction(3, 2)))]
    return max(_floor_upper(t) for t in terms) + 1


def compute_n2(k: int, pair: DecompositionPair, prec: int = DEFAULT_PREC) -> int:
    return _n2(_ctx(prec), k, pair)


def _check_m(m: int) -> None:
    if m not in VALID_M:
        raise ValueError(f"m must be one of {VALID_M}, got {m}")


def _n3_n4(ctx, k: int, m: int):
    klogk = k * ctx.log(k)
    n3 = 100 * klogk / ctx.log(_iv(ctx, Fraction(3, 2)) * ctx.mpf(3) ** (k // 2 - 1))
    n4 = ctx.exp(m - _iv(ctx, Fraction(38, 100))) * klogk / 2
    return n3, n4


def compute_n3_n4(k: int, m: int, prec: int = DEFAULT_PREC) -> tuple[float, float]:
    check_k(k, 6)
    _check_m(m)
    n3, n4 = _n3_n4(_ctx(prec), k, m)
    return _float_upper(n3), _float_upper(n4)


def floor_n4(k: int, m: int, prec: int = DEFAULT_PREC) -> int:
    _check_m(m)
    return _floor_upper(_n3_n4(_ctx(prec), k, m)[1])


def _rhs(ctx, k: int, C2: Fraction, n: int):
    klogk = k * ctx.log(k)
    log3 = ctx.log(3)
    b_term = ctx.log(_iv(ctx, Fraction(201, 100)) * n / klogk) ** 2
    height = _iv(ctx, Fraction(k, 2) - 1) + ctx.log(_iv(ctx, Fraction(3, 2))) / log3
    return _iv(ctx, C2) * b_term * height * klogk / 2 + ctx.log(_iv(ctx, c1_cap(k))) / log3


def upper_bound_rhs(k: int, C2: Fraction, n: int, prec: int = DEFAULT_PREC) -> float:
    return _float_upper(_rhs(_ctx(prec), k, Fraction(C2), n))


def solve_upper_bound(k: int, pair: DecompositionPair | None, m: int, C2: Fraction | float | str,
                      prec: int = DEFAULT_PREC) -> int:
    """Largest integer n with n < RHS(n).

    The additive constant uses the cap 0.50255 k^2 (k/2 - 1) on c1, which holds
    for every pair, so the result does not depend on ``pair``.
    """
    check_k(k, 6)
    _check_m(m)
    if pair is not None:
        _check_pair(k, pair)
    C2 = Fraction(str(C2)) if not isinstance(C2, Fraction) else C2
    if m in LAURENT_C2 and C2 != LAURENT_C2[m]:
        raise ValueError(f"C2 = {C2} does not match m = {m}")
    ctx = _ctx(prec)
    n = max(_floor_upper(_n3_n4(ctx, k, m)[1]), SEED_FLOOR)
    for _ in range(MAX_ITERATIONS):
        nxt = _ceil_upper(_rhs(ctx, k, C2, n))
        if nxt == n:
            break
        n = nxt
    else:
        raise RuntimeError(f"upper bound iteration did not settle for k = {k}")
    while not _below_upper(n, _rhs(ctx, k, C2, n)):
        n -= 1
    while _below_upper(n + 1, _rhs(ctx, k, C2, n + 1)):
        n += 1
    return n


def bound_for_pair(k: int, pair: DecompositionPair, prec: int = DEFAULT_PREC) -> BoundBreakdown:
    _check_pair(k, pair)
    m = 10 if k <= 66 else 12
    C2 = LAURENT_C2[m]
    ctx = _ctx(prec)
    X0 = shifted_tail(k).X0
    n3, n4 = _n3_n4(ctx, k, m)
    n_ineq = solve_upper_bound(k, pair, m, C2, prec)
    return BoundBreakdown(
        k=k,
        d1=pair.d1,
        d2=pair.d2,
        A=compute_A(k, pair),
        c1=compute_c1(k, pair),
        X0=X0,
        n1=_float_upper(_n1(ctx, k, X0)),
        n2=_n2(ctx, k, pair),
        n3=_float_upper(n3),
        n4=_float_upper(n4),
        m=m,
        C2=C2,
        n_ineq=n_ineq,
        n0=max(n_ineq, _floor_upper(n4)),
    )


def all_pair_bounds(k: int, prec: int = DEFAULT_PREC) -> list[BoundBreakdown]:
    return [bound_for_pair(k, p, prec) for p in table1_pairs(k)]


def table_bound_n(k: int, prec: int = DEFAULT_PREC) -> BoundBreakdown | NotApplicable:
    """Worst case over the pairs of k; ties go to the pair with the largest c1."""
    check_k(k, 6)
    if k % 4 != 2 or k > 98:
        raise ValueError("k must be 2 mod 4 with 6 <= k <= 98")
    rows = all_pair_bounds(k, prec)
    if not rows:
        return NotApplicable(k, "no decomposition pairs with d1*d2 > 1")
    return max(rows, key=lambda r: (r.n0, r.c1))


def table2(ks=range(6, 99, 4), prec: int = DEFAULT_PREC) -> list[tuple[int, int]]:
    out = []
    for k in ks:
        row = table_bound_n(k, prec)
        if isinstance(row, BoundBreakdown):
            out.append((k, row.n0))
    return out
