"""Elementary number theory: primes, primorials, CRT and a brute-force j(n)."""

from __future__ import annotations

import bisect
import math
import threading
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, SizeGuardError

# one period scan of length n is the oracle's whole cost
BRUTE_FORCE_LIMIT = 2**31
_SCAN_CHUNK = 1 << 22


def _sieve(limit: int) -> list[int]:
    if limit < 2:
        return []
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return [i for i, f in enumerate(flags) if f]


class PrimeTable:
    """Growable table of the primes p_1 = 2, p_2 = 3, ...

    Growth happens behind a lock; readers only ever see a fully built list.
    """

    def __init__(self, limit: int = 1024):
        self._lock = threading.Lock()
        self._limit = limit
        self._primes = _sieve(limit)

    def _grow(self, limit: int) -> list[int]:
        with self._lock:
            if limit > self._limit:
                new_limit = max(limit, 2 * self._limit)
                self._primes = _sieve(new_limit)
                self._limit = new_limit
            return self._primes

    def up_to(self, n: int) -> list[int]:
        primes = self._primes if n <= self._limit else self._grow(n)
        return primes[: bisect.bisect_right(primes, n)]

    def nth(self, i: int) -> int:
        if i < 1:
            raise InputError(f"prime index must be >= 1, got {i}")
        primes = self._primes
        while len(primes) < i:
            primes = self._grow(2 * self._limit)
        return primes[i - 1]

    def first(self, count: int) -> list[int]:
        if count <= 0:
            return []
        self.nth(count)
        return self._primes[:count]


_TABLE = PrimeTable()


def nth_prime(i: int) -> int:
    return _TABLE.nth(i)


def first_primes(count: int) -> list[int]:
    return _TABLE.first(count)


def primes_up_to(n: int) -> list[int]:
    return _TABLE.up_to(n)


def odd_primes_up_to(n: int) -> list[int]:
    return [p for p in primes_up_to(n) if p != 2]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n <= 1 << 20:
        primes = primes_up_to(n)
        return bool(primes) and primes[-1] == n
    return all(n % p for p in primes_up_to(math.isqrt(n)))


def largest_prime_at_most(n: int) -> int:
    primes = primes_up_to(n)
    if not primes:
        raise InputError(f"no prime <= {n}")
    return primes[-1]


def prime_index(p: int) -> int:
    """Inverse of nth_prime."""
    primes = primes_up_to(p)
    if not primes or primes[-1] != p:
        raise InputError(f"{p} is not prime")
    return len(primes)


def primorial(k: int) -> int:
    """Product of the first k primes (exact; Python ints do not overflow)."""
    if k < 1:
        raise InputError(f"primorial needs k >= 1, got {k}")
    return math.prod(first_primes(k))


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of n by trial division over the prime table."""
    if n < 1:
        raise InputError(f"expected a positive integer, got {n}")
    factors = []
    i = 1
    while (p := _TABLE.nth(i)) * p <= n:
        if n % p == 0:
            factors.append(p)
            while n % p == 0:
                n //= p
        i += 1
    if n > 1:
        factors.append(n)
    return factors


def count_prime_divisors(n: int) -> int:
    return len(prime_factors(n))


def radical(n: int) -> int:
    return math.prod(prime_factors(n))


@dataclass(frozen=True)
class Congruence:
    residue: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise InputError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            object.__setattr__(self, "residue", self.residue % self.modulus)

    def holds(self, x: int) -> bool:
        return x % self.modulus == self.residue


def _merge(left: Congruence, right: Congruence) -> Congruence:
    m1, m2 = left.modulus, right.modulus
    if math.gcd(m1, m2) != 1:
        raise InputError(f"moduli {m1} and {m2} are not coprime")
    # x = r1 + m1 * t with m1 * t = r2 - r1 (mod m2)
    t = (right.residue - left.residue) * pow(m1, -1, m2) % m2
    return Congruence(left.residue + m1 * t, m1 * m2)


def crt_solve(congruences: Iterable[Congruence]) -> Congruence:
    congruences = list(congruences)
    if not congruences:
        raise InputError("crt_solve needs at least one congruence")
    return reduce(_merge, congruences)


def crt(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """Least nonnegative x with x = r_i (mod m_i) for all i."""
    return crt_solve(Congruence(r % m, m) for r, m in zip(residues, moduli, strict=True)).residue


def jacobsthal_brute(n: int) -> int:
    """j(n) by scanning one full period for the longest run sharing a factor with n."""
    if n < 1:
        raise InputError(f"j(n) needs n >= 1, got {n}")
    if n > BRUTE_FORCE_LIMIT:
        raise SizeGuardError(f"n = {n} exceeds the scan limit {BRUTE_FORCE_LIMIT}")
    primes = prime_factors(n)
    if not primes:
        return 1

    longest = 0
    run = 0
    head = None  # run length at the start of the period, for wraparound
    for start in range(0, n, _SCAN_CHUNK):
        size = min(_SCAN_CHUNK, n - start)
        shared = np.zeros(size, dtype=bool)
        for p in primes:
            shared[(-start) % p :: p] = True
        coprime = np.flatnonzero(~shared)
        if coprime.size == 0:
            run += size
            continue
        if head is None:
            head = run + int(coprime[0])
        else:
            longest = max(longest, run + int(coprime[0]))
        if coprime.size > 1:
            longest = max(longest, int(np.max(np.diff(coprime))) - 1)
        run = size - 1 - int(coprime[-1])
    # 1 is always coprime to n, so head is set
    longest = max(longest, run + head)
    return longest + 1
