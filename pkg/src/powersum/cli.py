"""Command line entry point: ``powersum <subcommand> ...``."""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

from .bounds import BoundBreakdown, all_pair_bounds, table_bound_n
from .decomposition import DecompositionPair, lebesgue_nagell_cases, pair_list, table1_pairs
from .newforms import expected_level, load, load_level
from .prove import ProveConfig, known_solution_checks, prove_k, write_report
from .sieve import SieveConfig, read_certificates, sieve_range, verify_certificate, write_certificates
from .thue import beta_for, solve_four_equations, verify_candidate

CONFIG_KEYS = {
    "n_to": int, "t_max": int, "workers": int, "thue_bound": int,
    "parity_refinement": lambda v: v.strip().lower() in ("1", "true", "yes", "on"),
    "newforms": str, "ell_below": int,
}


def read_config(path: str | Path) -> dict:
    """key = value lines (TOML-like, no sections); '#' starts a comment."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.read_string("[powersum]\n" + Path(path).read_text(encoding="utf-8"))
    out = {}
    for key, raw in parser["powersum"].items():
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise SystemExit(f"unknown config key {key!r}")
        out[key] = CONFIG_KEYS[key](raw.strip().strip('"'))
    return out


def _apply_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    for key, value in read_config(args.config).items():
        if key == "parity_refinement":
            if not args.no_parity_refinement:
                args.no_parity_refinement = not value
        elif getattr(args, key, None) is None:
            setattr(args, key, value)


def _load_forms(path: str | None, levels) -> dict:
    """Newforms from a directory of newforms_<level>.json files or a single file."""
    if path and Path(path).is_file():
        records = load(path)
        return {level: [r for r in records if r.level == level] for level in levels}
    return {level: load_level(level, path) for level in levels}


def _emit(data, json_path: str | None) -> None:
    if json_path == "-":
        print(json.dumps(data, indent=2, sort_keys=True))
    elif json_path:
        Path(json_path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def cmd_decompose(args) -> int:
    ks = [args.k] if args.k else range(6, 99, 4)
    rows = []
    for k in ks:
        pairs = pair_list(k) if args.all else table1_pairs(k)
        rows.append({"k": k, "pairs": [[p.d1, p.d2] for p in pairs]})
        if pairs or args.k:
            print(f"{k:>3}  " + " ".join(f"({p.d1},{p.d2})" for p in pairs))
    _emit(rows, args.json)
    return 0


def cmd_bounds(args) -> int:
    ks = [args.k] if args.k else range(6, 99, 4)
    rows = []
    for k in ks:
        if args.all_pairs:
            found = all_pair_bounds(k)
            rows += [r.to_dict() for r in found]
            for r in found:
                print(f"{k:>3} ({r.d1},{r.d2})  n1={r.n1:.3f} n2={r.n2} n3={r.n3:.1f} n4={r.n4:.1f} "
                      f"n_ineq={r.n_ineq} n0={r.n0}")
            continue
        r = table_bound_n(k)
        rows.append(r.to_dict())
        if isinstance(r, BoundBreakdown):
            print(f"{k:>3}  {r.n0}")
        elif args.k:
            print(f"{k:>3}  not applicable: {r.reason}")
    _emit(rows, args.json)
    return 0


def cmd_sieve(args) -> int:
    pairs = table1_pairs(args.k)
    if not pairs:
        print(f"k = {args.k} has no pairs with d1*d2 > 1; nothing to sieve")
        return 0
    levels = sorted({expected_level(args.k, p) for p in pairs})
    forms = _load_forms(args.newforms, levels)
    config = SieveConfig(
        t_max=args.t_max or 1050,
        n_lo=args.n_from,
        n_hi=args.n_to or 1000,
        workers=args.workers or 1,
        trace_parity_refinement=not args.no_parity_refinement,
    )
    report = sieve_range(args.k, pairs, forms, config)
    print(report.summary())
    if args.certs:
        write_certificates(report.eliminated, args.certs)
    _emit(report.to_dict(), args.json)
    return 0 if not report.failures else 1


def cmd_thue(args) -> int:
    rows = []
    for case in lebesgue_nagell_cases(args.k, args.n):
        for beta in beta_for(case.a, args.n):
            for outcome in solve_four_equations(beta, args.n, args.bound):
                nontrivial = [ts for ts in outcome.solutions if ts[0] * ts[1] != 0]
                rows.append({"a": case.a, "beta": str(beta), "form": str(outcome.form), "rhs": outcome.rhs,
                             "solutions": [list(ts) for ts in outcome.solutions]})
                print(f"a={case.a} beta={beta} rhs={outcome.rhs:+d}: {outcome.solutions}")
                for y1 in sorted({t * t + s * s for t, s in nontrivial}):
                    v = verify_candidate(args.k, args.n, case.a, y1)
                    print(f"    y1={y1}: {v.step}")
    _emit(rows, args.json)
    return 0


def cmd_verify_cert(args) -> int:
    certs = read_certificates(args.certs)
    levels = sorted({expected_level(c.k, DecompositionPair(c.k, c.d1, c.d2)) for c in certs})
    forms = _load_forms(args.newforms, levels)
    labels = {f.label: f for recs in forms.values() for f in recs}
    bad = 0
    for c in certs:
        result = verify_certificate(c, labels, check_canonical=not args.skip_canonical)
        if not result.ok or result.reason != "ok":
            bad += 1
            print(f"{c.to_json()}  {result.reason}")
    print(f"{len(certs) - bad}/{len(certs)} certificates verified")
    return 0 if bad == 0 else 1


def cmd_prove(args) -> int:
    config = ProveConfig(
        n_hi=args.n_to or 5000,
        t_max=args.t_max or 1050,
        workers=args.workers or 1,
        thue_bound=args.thue_bound or 50,
        parity_refinement=not args.no_parity_refinement,
        data_dir=args.newforms,
        ell_below=args.ell_below or 50,
    )
    report = prove_k(args.k, config)
    print(report.summary())
    if args.json:
        write_report(report, args.json)
    return 0 if report.verdict == "FullyVerifiedAtConfiguredScale" else 1


def cmd_check_known(args) -> int:
    ok = True
    for name, passed in known_solution_checks():
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
        ok &= passed
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="powersum", description="Solve x^k + (x+1)^k = y^n for k = 2 (mod 4).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="list the (d1, d2) pairs")
    p.add_argument("--k", type=int)
    p.add_argument("--all", action="store_true", help="include (1, 1)")
    p.add_argument("--json")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("bounds", help="upper bound n0 on the exponent")
    p.add_argument("--k", type=int)
    p.add_argument("--all-pairs", action="store_true")
    p.add_argument("--json")
    p.set_defaults(func=cmd_bounds)

    def run_options(p):
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--n-to", dest="n_to", type=int)
        p.add_argument("--t-max", dest="t_max", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--newforms", help="directory of newforms_<level>.json files, or one file")
        p.add_argument("--no-parity-refinement", action="store_true")
        p.add_argument("--config", help="key = value file; flags take precedence")
        p.add_argument("--json")

    p = sub.add_parser("sieve", help="eliminate exponents n by primes t n + 1")
    run_options(p)
    p.add_argument("--n-from", dest="n_from", type=int, default=11)
    p.add_argument("--certs", help="write certificates as newline-delimited JSON")
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("thue", help="bounded search for the small-exponent equations")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bound", type=int, default=50)
    p.add_argument("--json")
    p.set_defaults(func=cmd_thue)

    p = sub.add_parser("verify-cert", help="independently re-check certificates")
    p.add_argument("--certs", required=True)
    p.add_argument("--newforms")
    p.add_argument("--skip-canonical", action="store_true", help="do not check that t is the smallest that works")
    p.set_defaults(func=cmd_verify_cert)

    p = sub.add_parser("prove", help="run every stage for one k")
    run_options(p)
    p.add_argument("--thue-bound", dest="thue_bound", type=int)
    p.add_argument("--ell-below", dest="ell_below", type=int)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("check-known", help="check the known nontrivial identities")
    p.set_defaults(func=cmd_check_known)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _apply_config(args)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
