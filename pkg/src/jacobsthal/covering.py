"""Coverings of integer windows by residue classes of distinct primes.

A covering of length m is a tuple of (prime, remainder) pairs such that every
position x in 1..m satisfies x = remainder (mod prime) for some entry.  The
window it describes is <a>_m = (a+1, ..., a+m), where a = -remainder (mod prime)
for every entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InputError
from .numtheory import crt, is_prime, nth_prime


@dataclass(frozen=True, order=True)
class Covering:
    entries: tuple[tuple[int, int], ...]
    length: int

    def __post_init__(self) -> None:
        entries = tuple((int(p), int(a)) for p, a in self.entries)
        object.__setattr__(self, "entries", entries)
        if self.length < 1:
            raise InputError(f"covering length must be >= 1, got {self.length}")
        last = 0
        for p, a in entries:
            if p <= last:
                raise InputError("covering primes must be distinct and increasing")
            if not is_prime(p):
                raise InputError(f"{p} is not prime")
            if not 1 <= a < p:
                raise InputError(f"remainder {a} mod {p} is not a non-zero residue")
            last = p

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], length: int) -> Covering:
        return cls(tuple(sorted(pairs)), length)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def remainders(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.entries)

    @property
    def max_prime(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def sort_key(self) -> tuple:
        """Canonical order: remainder vector first, then the primes."""
        return (self.remainders, self.primes)

    def covers(self, x: int) -> bool:
        return any(x % p == a for p, a in self.entries)

    def __str__(self) -> str:
        return " ".join(f"{a}/{p}" for p, a in self.entries)


@dataclass(frozen=True)
class WindowRef:
    """The window <offset>_length = (offset+1, ..., offset+length)."""

    offset: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 1:
            raise InputError(f"window length must be >= 1, got {self.length}")

    def members(self) -> range:
        return range(self.offset + 1, self.offset + self.length + 1)


@dataclass(frozen=True)
class BalanceReport:
    exclusive: dict[int, tuple[int, ...]]
    reference_prime: int
    offending: tuple[int, ...] = field(default=())

    @property
    def balanced(self) -> bool:
        return not self.offending


def covered_run(entries: Sequence[tuple[int, int]], start: int = 1) -> int:
    """Number of consecutive covered positions from `start` onwards."""
    if not entries:
        return 0
    x = start
    while any(x % p == a % p for p, a in entries):
        x += 1
    return x - start


def verify(c: Covering) -> bool:
    return all(c.covers(x) for x in range(1, c.length + 1))


def offset_from_remainders(c: Covering) -> WindowRef:
    offset = crt([-a for a in c.remainders], c.primes) if c.entries else 0
    return WindowRef(offset, c.length)


def remainders_from_offset(w: WindowRef, primes: Sequence[int]) -> Covering:
    pairs = []
    for p in primes:
        a = -w.offset % p
        if a == 0:
            raise InputError(f"{p} divides the offset {w.offset}; zero residue class")
        pairs.append((p, a))
    return Covering.from_pairs(pairs, w.length)


def exclusive_positions(c: Covering) -> dict[int, tuple[int, ...]]:
    """For each prime, the positions it covers and no other prime does."""
    exclusive: dict[int, list[int]] = {p: [] for p in c.primes}
    for x in range(1, c.length + 1):
        hits = [p for p, a in c.entries if x % p == a]
        if len(hits) == 1:
            exclusive[hits[0]].append(x)
    return {p: tuple(xs) for p, xs in exclusive.items()}


def balance_report(c: Covering, reference_prime: int) -> BalanceReport:
    exclusive = exclusive_positions(c)
    offending = tuple(p for p, xs in exclusive.items() if p > reference_prime and len(xs) < 2)
    return BalanceReport(exclusive, reference_prime, offending)


def is_balanced(c: Covering, k: int, reference_prime: int | None = None) -> bool:
    """Every prime above p_k must cover at least two positions exclusively.

    The maximality part of the definition (length = Omega(k)) is the caller's
    business; the search only asks this question at its final length.
    """
    if len(c.entries) != k - 1:
        raise InputError(f"a covering for k={k} has {k - 1} primes, got {len(c.entries)}")
    if reference_prime is None:
        reference_prime = nth_prime(k)
    return balance_report(c, reference_prime).balanced


def double_with_two(c: Covering) -> Covering:
    """Adjoin the prime 2: a covering of <a>_m yields one of <b>_{2m+1}.

    b = 2a (mod each odd prime) and b = 1 (mod 2); then b+2x = 2(a+x) for the
    odd primes and 2 takes every b+2x-1.
    """
    if 2 in c.primes:
        raise InputError("covering already contains the prime 2")
    window = offset_from_remainders(c)
    b = crt([2 * window.offset for _ in c.primes] + [1], list(c.primes) + [2])
    return remainders_from_offset(WindowRef(b, 2 * c.length + 1), (2,) + c.primes)


def strip_two(c: Covering) -> Covering:
    """Reverse of double_with_two: drop 2 from a covering of length 2m+1."""
    if not c.entries or c.primes[0] != 2:
        raise InputError("covering does not contain the prime 2")
    if c.length < 3:
        raise InputError("need length 2m+1 with m >= 1")
    odd = c.primes[1:]
    m = (c.length - 1) // 2
    b = offset_from_remainders(c).offset
    if b % 2 == 1:
        # 2a = b
        a = crt([b * pow(2, -1, p) for p in odd], odd)
    else:
        # 2a + 1 = b
        a = crt([(b - 1) * pow(2, -1, p) for p in odd], odd)
    return remainders_from_offset(WindowRef(a, m), odd)


def moduli_representation(c: Covering) -> list[int]:
    """Position x -> smallest prime of c covering x."""
    out = []
    for x in range(1, c.length + 1):
        for p, a in c.entries:
            if x % p == a:
                out.append(p)
                break
        else:
            raise InputError(f"position {x} is not covered")
    return out


def permutation_representation(c: Covering) -> list[int]:
    """Greedy order: the prime covering the next uncovered position, smaller prime on ties."""
    uncovered = set(range(1, c.length + 1))
    remaining = list(c.entries)
    order = []
    while uncovered:
        x = min(uncovered)
        for i, (p, a) in enumerate(remaining):
            if x % p == a:
                break
        else:
            raise InputError(f"position {x} is not covered")
        del remaining[i]
        order.append(p)
        uncovered.difference_update(range(a, c.length + 1, p))
    return order
