"""Integer solutions of x^k + (x+1)^k = y^n with k = 2 (mod 4).

Submodules:

- ``arith``: primality, factoring helpers, valuations, perfect powers
- ``poly``: the polynomials g_k, f_k and the shifted tail of f_k
- ``decomposition``: (d1, d2) pairs, multipliers a, the y1 = 1 cases
- ``thue``: Gaussian integers and the small-exponent binary forms
- ``newforms``: weight-2 newform data and the exponent bound per form
- ``ffield``: curves over F_ell, traces of Frobenius, the sets A(t, ell)
- ``sieve``: exponent elimination and certificates
- ``bounds``: the analytic upper bound n0
- ``prove``: the per-k pipeline and report
"""

from .bounds import BoundBreakdown, NotApplicable, table_bound_n
from .decomposition import DecompositionPair, pair_list, table1_pairs
from .prove import ProofReport, ProveConfig, check_known_solutions, prove_k
from .sieve import EliminationCertificate, SieveConfig, eliminate_exponent, sieve_range, verify_certificate

__version__ = "0.1.0"

__all__ = [
    "BoundBreakdown",
    "DecompositionPair",
    "EliminationCertificate",
    "NotApplicable",
    "ProofReport",
    "ProveConfig",
    "SieveConfig",
    "check_known_solutions",
    "eliminate_exponent",
    "pair_list",
    "prove_k",
    "sieve_range",
    "table1_pairs",
    "table_bound_n",
    "verify_certificate",
]
