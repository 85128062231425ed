"""Exhaustive oracle for Omega(k): every prime subset, every residue vector.

Independent of the search engine on purpose; no bit masks, no pruning.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .covering import Covering, is_balanced
from .errors import SizeGuardError
from .numtheory import nth_prime

MAX_ORACLE_K = 7


@dataclass(frozen=True)
class OracleOutcome:
    k: int
    omega: int
    coverings: tuple[Covering, ...]  # every covering of length omega, balanced or not
    reference_prime: int

    def balanced(self) -> tuple[Covering, ...]:
        return tuple(c for c in self.coverings if is_balanced(c, self.k, self.reference_prime))


def _prefix_run(pairs: Sequence[tuple[int, int]]) -> int:
    x = 1
    while True:
        for p, a in pairs:
            if x % p == a:
                break
        else:
            return x - 1
        x += 1


def brute_force_omega(k: int, prime_pool: Sequence[int]) -> OracleOutcome:
    if k > MAX_ORACLE_K:
        raise SizeGuardError(f"brute force is limited to k <= {MAX_ORACLE_K}")
    best = 0
    maximal: list[tuple[tuple[int, int], ...]] = []
    for primes in combinations(sorted(prime_pool), k - 1):
        for residues in product(*(range(1, p) for p in primes)):
            pairs = tuple(zip(primes, residues))
            run = _prefix_run(pairs)
            if run > best:
                best, maximal = run, [pairs]
            elif run == best:
                maximal.append(pairs)
    coverings = sorted((Covering(pairs, best) for pairs in maximal), key=Covering.sort_key)
    return OracleOutcome(k, best, tuple(coverings), nth_prime(k))
