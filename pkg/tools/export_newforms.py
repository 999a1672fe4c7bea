"""Export weight-2 newform data for the Frey levels into the JSON schema read by
``powersum.newforms.load``.

Developer tool only: needs ``cypari2`` (PARI/GP >= 2.15), which the package
itself never imports.  Rational forms get an elliptic curve rebuilt from the
period lattice of the form (or, when that exhausts memory, found by the curve
search in ``curves_by_search``) and checked against the q-expansion; irrational
forms get characteristic polynomials of a_ell over Q for every good prime
ell up to a per-level bound.

    python tools/export_newforms.py --level 640 --out src/powersum/data
"""
import argparse
import itertools
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import cypari2
import numpy as np

pari = cypari2.Pari()
pari.allocatemem(3 * 10**9)

RATIONAL_CACHE = 100
DEFAULT_ELL_MAX = 1000
ELL_MAX = {3712: 20000}
SAFE = 2**53


def _int(v):
    v = int(v)
    return str(v) if abs(v) >= SAFE else v


def _lattice_basis(vals):
    """Reduced Z-basis of the lattice spanned by the complex numbers ``vals``."""
    vals = [v for v in vals if abs(complex(v)) > 1e-20]
    w1 = vals[0]
    w2 = next(v for v in vals[1:] if abs(complex(v / w1).imag) > 1e-12)
    coords = []
    for v in vals:
        rel = pari.lindep([w1, w2, v])
        a, b, c = (int(rel[i]) for i in range(3))
        if c == 0:
            raise RuntimeError("degenerate lattice relation")
        coords.append((Fraction(-a, c), Fraction(-b, c)))
    den = math.lcm(*(c.denominator for xy in coords for c in xy))
    mat = pari.matrix(2, len(coords), [int(x * den) for x, _ in coords] + [int(y * den) for _, y in coords])
    hnf = pari.mathnf(mat)
    basis = []
    for j in range(2):
        cx, cy = Fraction(int(hnf[0, j]), den), Fraction(int(hnf[1, j]), den)
        basis.append(w1 * pari(cx.numerator) / cx.denominator + w2 * pari(cy.numerator) / cy.denominator)
    return basis


def _near(z, r):
    return float(pari.abs(z - r)) <= 1e-6 * (1 + abs(float(r)))


def curve_for(mf_name, form_name, level, aps):
    fs = pari(f"mfsymbol({mf_name},{form_name})")
    vals = []
    for j in (1, 2, 3):
        c = level * j
        for a in range(1, min(c, 25)):
            if math.gcd(a, c) == 1:
                v = pari.mfsymboleval(fs, pari([pari("oo"), pari(f"{a}/{c}")]))
                if v.type() == "t_POL":
                    v = pari.polcoef(v, 0)
                vals.append(v)
    w = _lattice_basis(vals)
    two_pi_i = 2 * pari.Pi() * pari("I")
    omega = [two_pi_i * w[0], two_pi_i * w[1]]
    if (omega[0] / omega[1]).imag() < 0:
        omega = [omega[1], omega[0]]
    for scale in (1, 2, pari("1/2"), 3, pari("1/3"), 4, pari("1/4")):
        om = [omega[0] / scale, omega[1] / scale]
        c4 = 12 * pari.elleisnum(om, 4, 1)
        c6 = 216 * pari.elleisnum(om, 6, 1)
        r4, r6 = pari.round(pari.real(c4)), pari.round(pari.real(c6))
        if not (_near(c4, r4) and _near(c6, r6)):
            continue
        if r4**3 == r6**2:
            continue
        E = pari.ellminimalmodel(pari.ellinit([0, 0, 0, -27 * r4, -54 * r6]))
        if int(pari.ellglobalred(E)[0]) != level:
            continue
        if all(int(pari.ellap(E, p)) == ap for p, ap in aps):
            return [int(E[i]) for i in range(5)]
    raise RuntimeError(f"no curve recovered for {form_name} at level {level}")


def _smooth_mask(disc, primes):
    rest = np.abs(disc)
    for p in primes:
        while True:
            hit = (rest % p == 0) & (rest > 0)
            if not hit.any():
                break
            rest = np.where(hit, rest // p, rest)
    return rest == 1


_SEARCH_CACHE = {}


def _discriminant(a1, a2, a3, a4, a6):
    b2, b4, b6 = a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def _two_torsion_curves(level, max_two=30, max_odd=4):
    """y^2 = x (x^2 + a x + b) with b and a^2 - 4b both S-units for S = primes of level."""
    odd = odd_part(level)
    units = [s * 2**i * odd**j for s in (1, -1) for i in range(max_two) for j in range(max_odd)]
    for b in units:
        for d in units:
            a = math.isqrt(max(4 * b + d, 0))
            if a * a == 4 * b + d:
                for sign in (1, -1):
                    yield pari.ellinit([0, sign * a, 0, b, 0])


def _mordell_curves(level, max_two=30, max_odd=16, height=10**6):
    """Curves from integral points (c4, c6) on c6^2 = c4^3 - 1728 D for D = +-2^a p^b."""
    odd = odd_part(level)
    for sign in (1, -1):
        for a in range(max_two + 1):
            for b in range(1, max_odd + 1):
                mordell = pari.ellinit([0, 0, 0, 0, -1728 * sign * 2**a * odd**b])
                for point in pari.ellratpoints(mordell, height):
                    if len(point) < 2 or pari.denominator(point[0]) != 1:
                        continue
                    c4, c6 = int(point[0]), int(point[1])
                    if c4**3 != c6**2:
                        yield pari.ellinit([0, 0, 0, -27 * c4, -54 * c6])


SEARCH_BOX = {"a4_max": 400, "a6_max": 10000}


def curves_by_search(level, a4_max=None, a6_max=None):
    """Curves of conductor ``level`` used when mfsymbol runs out of memory.

    Seeds come from three sources: curves with a rational 2-torsion point (an
    S-unit search), integral points on the Mordell curves c6^2 = c4^3 - 1728 D,
    and models [a1, a2, a3, a4, a6] in a small box.  Seeds whose conductor has
    the right odd part are closed under isogeny and twists by -1, 2, -2.
    """
    if level in _SEARCH_CACHE:
        return _SEARCH_CACHE[level]
    a4_max = a4_max or SEARCH_BOX["a4_max"]
    a6_max = a6_max or SEARCH_BOX["a6_max"]
    t0 = time.time()
    bad = [int(p) for p in pari.factor(level)[0]]
    found = {}
    for E in itertools.chain(_two_torsion_curves(level), _mordell_curves(level)):
        if odd_part(int(pari.ellglobalred(E)[0])) == odd_part(level):
            E = pari.ellminimalmodel(E)
            found[tuple(int(E[i]) for i in range(5))] = E
    a6 = np.arange(-a6_max, a6_max + 1, dtype=np.int64)
    for a4 in sorted(range(-a4_max, a4_max + 1), key=abs):
        for a1, a2, a3 in itertools.product((0, 1), (-1, 0, 1), (0, 1)):
            for b in a6[_smooth_mask(_discriminant(a1, a2, a3, a4, a6), bad)]:
                E = pari.ellinit([a1, a2, a3, a4, int(b)])
                if odd_part(int(pari.ellglobalred(E)[0])) == odd_part(level):
                    E = pari.ellminimalmodel(E)
                    found[tuple(int(E[i]) for i in range(5))] = E
    _close_under_twists(found, level)
    found = {key: E for key, E in found.items() if int(pari.ellglobalred(E)[0]) == level}
    print(f"  level {level}: search found {len(found)} models in {time.time() - t0:.1f}s", file=sys.stderr)
    _SEARCH_CACHE[level] = found
    return found


def odd_part(n):
    while n % 2 == 0:
        n //= 2
    return n


def _close_under_twists(found, level):
    """Add isogenous curves and twists by -1, 2, -2 with the same odd conductor."""
    todo = list(found.values())
    while todo:
        E = todo.pop()
        neighbours = [pari.ellinit(c) for c in pari.ellisomat(E, 0, 1)[0]]
        neighbours += [pari.elltwist(E, d) for d in (-4, 8, -8)]
        for F in neighbours:
            F = pari.ellminimalmodel(pari.ellinit(F))
            key = tuple(int(F[i]) for i in range(5))
            if key not in found and odd_part(int(pari.ellglobalred(F)[0])) == odd_part(level):
                found[key] = F
                todo.append(F)


def curve_by_search(level, aps):
    for coeffs, E in sorted(curves_by_search(level).items()):
        if all(int(pari.ellap(E, p)) == ap for p, ap in aps):
            return list(coeffs)
    raise RuntimeError(f"curve search exhausted at level {level}")


def export_level(level, ell_max, use_symbols=True):
    t0 = time.time()
    pari(f"mf=mfinit([{level},2],0); L=mfeigenbasis(mf); FL=mffields(mf)")
    nforms = int(pari("#L"))
    primes = [int(p) for p in pari(f"primes([2,{ell_max}])") if level % int(p)]
    need_space = any(int(pari(f"poldegree(FL[{j}])")) > 1 for j in range(1, nforms + 1))
    if need_space:
        pari(f"M=mfcoefs(mf,{ell_max})")
        print(f"  level {level}: space coefficients to {ell_max} in {time.time() - t0:.1f}s", file=sys.stderr)
    records = []
    symbols_ok = use_symbols
    for j in range(1, nforms + 1):
        deg = int(pari(f"poldegree(FL[{j}])"))
        label = f"{level}.2.{j - 1}"
        rational = deg == 1
        if rational:
            coefs = pari(f"mfcoefs(L[{j}],{RATIONAL_CACHE})")
            cached = [p for p in primes if p <= RATIONAL_CACHE]
            aps = [(p, int(pari.lift(coefs[p]))) for p in cached]
            curve = None
            if symbols_ok:
                try:
                    curve = curve_for("mf", f"L[{j}]", level, aps)
                except cypari2.PariError:
                    print(f"  {label}: mfsymbol failed, switching to curve search", file=sys.stderr)
                    symbols_ok = False
            if curve is None:
                curve = curve_by_search(level, aps)
            hecke = [{"ell": p, "charpoly": [-ap, 1]} for p, ap in aps]
        else:
            curve = None
            pari(f"v=mftobasis(mf,L[{j}]); P=FL[{j}]")
            hecke = []
            for p in primes:
                a = pari(f"Mod(lift(M[{p + 1},]*v),P)")
                cp = pari.charpoly(a)
                hecke.append({"ell": p, "charpoly": [_int(cp[i]) for i in range(deg + 1)]})
        records.append({"label": label, "level": level, "degree": deg, "rational": rational,
                        "curve": curve, "hecke": hecke})
        print(f"  {label}: degree {deg}{' curve ' + str(curve) if curve else ''}", file=sys.stderr)
    print(f"level {level}: {nforms} newforms in {time.time() - t0:.1f}s", file=sys.stderr)
    return records


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--level", type=int, action="append", required=True)
    ap.add_argument("--ell-max", type=int, default=None)
    ap.add_argument("--a4-max", type=int, default=SEARCH_BOX["a4_max"])
    ap.add_argument("--a6-max", type=int, default=SEARCH_BOX["a6_max"])
    ap.add_argument("--search-only", action="store_true", help="skip modular symbols for rational forms")
    ap.add_argument("--out", type=Path, default=Path("src/powersum/data"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    SEARCH_BOX.update(a4_max=args.a4_max, a6_max=args.a6_max)
    for level in args.level:
        ell_max = args.ell_max or ELL_MAX.get(level, DEFAULT_ELL_MAX)
        recs = export_level(level, ell_max, not args.search_only)
        path = args.out / f"newforms_{level}.json"
        path.write_text(json.dumps(recs, separators=(",", ":")) + "\n")
        print(f"wrote {path}", file=sys.stderr)


if __name__ == "__main__":
    main()
