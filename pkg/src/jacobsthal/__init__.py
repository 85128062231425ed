"""Maximum Jacobsthal function H(k) via the Extended Greedy Permutation Algorithm."""

from .covering import Covering, WindowRef, verify
from .egpa import SearchConfig, SearchOutcome, egpa_search
from .numtheory import jacobsthal_brute, nth_prime, primorial
from .scheme import FunctionTable, compute_H, compute_h, compute_qk, fixture_table

__all__ = [
    "Covering",
    "FunctionTable",
    "SearchConfig",
    "SearchOutcome",
    "WindowRef",
    "compute_H",
    "compute_h",
    "compute_qk",
    "egpa_search",
    "fixture_table",
    "jacobsthal_brute",
    "nth_prime",
    "primorial",
    "verify",
]
