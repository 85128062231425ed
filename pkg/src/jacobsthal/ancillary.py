"""Plain-text covering files: remainders, moduli and permutations.

All three share one layout (UTF-8, LF line endings).  A section starts with a
header line ``k = <k>``; each following line is one covering:

  remainders_c.txt    ``a/p`` tokens in ascending p, e.g. ``1/3 2/5``
  moduli_c.txt        m primes, the smallest prime covering each position
  permutations_c.txt  the primes in greedy coverage order

Sections are in ascending k.  Inside a section coverings are sorted by their
remainder vector (then by their primes), and line i of every file describes
the same covering.  The length m of a covering in the remainders file is the
run of positions 1, 2, ... it covers.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .covering import (Covering, covered_run, is_balanced, moduli_representation,
                       permutation_representation, verify)
from .errors import FormatError, InputError, VerificationError
from .numtheory import is_prime, nth_prime
from .scheme import fixture_table

REMAINDERS = "remainders_c.txt"
MODULI = "moduli_c.txt"
PERMUTATIONS = "permutations_c.txt"

_HEADER = re.compile(r"k = (\d+)")
_TOKEN = re.compile(r"(\d+)/(\d+)")


@dataclass(frozen=True)
class CoveringRecord:
    k: int
    covering: Covering
    line: int | None = field(default=None, compare=False)


def _as_records(records: Iterable) -> list[CoveringRecord]:
    out = []
    for r in records:
        out.append(r if isinstance(r, CoveringRecord) else CoveringRecord(*r))
    return out


def _ordered(records: Iterable) -> list[tuple[int, list[Covering]]]:
    by_k: dict[int, list[Covering]] = defaultdict(list)
    for r in _as_records(records):
        c = r.covering
        if not verify(c) or covered_run(c.entries) != c.length:
            raise VerificationError(f"k={r.k}: refusing to write unverified covering {c} (m={c.length})")
        by_k[r.k].append(c)
    return [(k, sorted(by_k[k], key=Covering.sort_key)) for k in sorted(by_k)]


def _render(sections: list[tuple[int, list[Covering]]], view) -> str:
    lines = []
    for k, coverings in sections:
        lines.append(f"k = {k}")
        lines.extend(view(c) for c in coverings)
    return "".join(line + "\n" for line in lines)


def format_remainders(records: Iterable) -> str:
    return _render(_ordered(records), str)


def format_moduli(records: Iterable) -> str:
    return _render(_ordered(records), lambda c: " ".join(map(str, moduli_representation(c))))


def format_permutations(records: Iterable) -> str:
    return _render(_ordered(records), lambda c: " ".join(map(str, permutation_representation(c))))


def _write(path, text: str) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def write_remainders(records: Iterable, destination) -> Path:
    return _write(destination, format_remainders(records))


def write_moduli(records: Iterable, destination) -> Path:
    return _write(destination, format_moduli(records))


def write_permutations(records: Iterable, destination) -> Path:
    return _write(destination, format_permutations(records))


def write_all(records: Iterable, out_dir) -> dict[str, Path]:
    records = _as_records(records)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return {
        REMAINDERS: write_remainders(records, out_dir / REMAINDERS),
        MODULI: write_moduli(records, out_dir / MODULI),
        PERMUTATIONS: write_permutations(records, out_dir / PERMUTATIONS),
    }


# -- reading -----------------------------------------------------------------

def _sections(text: str):
    """Yield (k, line number, stripped line) for every covering line."""
    k = None
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("k"):
            match = _HEADER.fullmatch(line)
            if not match:
                raise FormatError(f"malformed section header {line!r}", lineno)
            k = int(match.group(1))
            continue
        if k is None:
            raise FormatError("covering line before the first 'k = ' header", lineno)
        yield k, lineno, line


def parse_remainder_line(line: str, lineno: int | None = None) -> list[tuple[int, int]]:
    pairs = []
    for token in line.split():
        match = _TOKEN.fullmatch(token)
        if not match:
            raise FormatError(f"expected a/p, got {token!r}", lineno)
        pairs.append((int(match.group(2)), int(match.group(1))))
    return pairs


def _read_text(path) -> str:
    with open(path, encoding="utf-8", newline="") as f:
        return f.read()


def parse_remainders(text: str) -> list[CoveringRecord]:
    records = []
    for k, lineno, line in _sections(text):
        pairs = parse_remainder_line(line, lineno)
        try:
            records.append(CoveringRecord(k, Covering(tuple(pairs), covered_run(pairs)), lineno))
        except InputError as e:
            raise FormatError(str(e), lineno) from e
    return records


def read_remainders(path) -> list[CoveringRecord]:
    return parse_remainders(_read_text(path))


def parse_prime_lines(text: str) -> list[tuple[int, tuple[int, ...]]]:
    """Sections of a moduli or permutations file as (k, primes) per line."""
    out = []
    for k, lineno, line in _sections(text):
        try:
            out.append((k, tuple(int(t) for t in line.split())))
        except ValueError as e:
            raise FormatError(f"expected integers: {line!r}", lineno) from e
    return out


def read_prime_lines(path) -> list[tuple[int, tuple[int, ...]]]:
    return parse_prime_lines(_read_text(path))


def format_prime_lines(rows: Sequence[tuple[int, tuple[int, ...]]]) -> str:
    lines = []
    current = None
    for k, primes in rows:
        if k != current:
            lines.append(f"k = {k}")
            current = k
        lines.append(" ".join(map(str, primes)))
    return "".join(line + "\n" for line in lines)


def check_consistency(remainders_path, moduli_path, permutations_path) -> list[str]:
    """Re-derive the moduli and permutation views from the remainders file."""
    records = read_remainders(remainders_path)
    problems = []
    for name, path, view in ((MODULI, moduli_path, moduli_representation),
                             (PERMUTATIONS, permutations_path, permutation_representation)):
        rows = read_prime_lines(path)
        if len(rows) != len(records):
            problems.append(f"{name}: {len(rows)} coverings, remainders file has {len(records)}")
            continue
        for i, (record, (k, primes)) in enumerate(zip(records, rows), 1):
            if k != record.k or tuple(view(record.covering)) != primes:
                problems.append(f"{name}: covering {i} (k={k}) differs from the remainders file")
    return problems


# -- verification --------------------------------------------------------------

@dataclass
class Failure:
    line: int
    k: int
    reason: str

    def __str__(self) -> str:
        return f"line {self.line} (k={self.k}): {self.reason}"


@dataclass
class VerifyReport:
    records: int = 0
    failures: list[Failure] = field(default_factory=list)
    per_k: dict[int, list[int]] = field(default_factory=dict)  # k -> [passed, failed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [f"{self.records} coverings, {len(self.failures)} failures"]
        for k in sorted(self.per_k):
            passed, failed = self.per_k[k]
            lines.append(f"k = {k}: {passed} passed, {failed} failed")
        lines.extend(str(f) for f in self.failures)
        return "\n".join(lines)


def _check_record(k: int, pairs: list[tuple[int, int]], claimed: int | None) -> list[str]:
    problems = []
    primes = [p for p, _ in pairs]
    if any(b <= a for a, b in zip(primes, primes[1:])):
        problems.append("primes not strictly increasing")
    for p, a in pairs:
        if p == 2 or not is_prime(p):
            problems.append(f"{p} is not an odd prime")
        elif not 1 <= a < p:
            problems.append(f"{a}/{p} is not a non-zero residue")
    if len(pairs) != k - 1:
        problems.append(f"{len(pairs)} primes, expected {k - 1}")
    if problems:
        return problems
    run = covered_run(pairs)
    if claimed is not None and run != claimed:
        problems.append(f"covers {run} positions, claimed length is {claimed}")
    if run == 0:
        return problems + ["position 1 is not covered"]
    c = Covering(tuple(pairs), run)
    if not is_balanced(c, k, nth_prime(k)):
        problems.append(f"not balanced with respect to p_{k} = {nth_prime(k)}")
    return problems


def verify_text(text: str, omega: dict[int, int] | None = None) -> VerifyReport:
    """Check every covering: structure, claimed length, balance against p_k.

    `omega` maps k to the claimed length Omega(k); it defaults to the
    published values.  For k it does not know, the longest covering in the
    section sets the claim.
    """
    if omega is None:
        table = fixture_table()
        omega = {k: table.get(k, "omega_max") for k in table.ks() if table.get(k, "omega_max")}
    entries = [(k, lineno, parse_remainder_line(line, lineno)) for k, lineno, line in _sections(text)]
    fallback: dict[int, int] = {}
    for k, _, pairs in entries:
        if k not in omega:
            fallback[k] = max(fallback.get(k, 0), covered_run(pairs))

    report = VerifyReport()
    for k, lineno, pairs in entries:
        claimed = omega.get(k, fallback.get(k))
        problems = _check_record(k, pairs, claimed)
        tally = report.per_k.setdefault(k, [0, 0])
        report.records += 1
        if problems:
            tally[1] += 1
            report.failures.append(Failure(lineno, k, "; ".join(problems)))
        else:
            tally[0] += 1
    return report


def verify_files(remainders_path, omega: dict[int, int] | None = None) -> VerifyReport:
    return verify_text(_read_text(remainders_path), omega)
