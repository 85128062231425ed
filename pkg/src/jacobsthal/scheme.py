"""The H(k) pipeline: q_k, Omega(k), H(k), h(k), the function table and
checks of the open conjectures over whatever range is populated."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .egpa import ProgressHook, SearchConfig, SearchOutcome, egpa_search, pool_up_to, primorial_pool
from .errors import DataError, InputError, RegressionError
from .numtheory import jacobsthal_brute, largest_prime_at_most, nth_prime, primorial

log = logging.getLogger(__name__)

COMPUTED = "computed"
CERTIFICATE = "certificate"
FIXTURE = "fixture"
SEED = "seed"

# Published values: H(1) = 2, Omega(2) = 1 and, for 2 <= k <= 19, q_k = p_k,
# Omega(k) = omega(k), H(k) = h(k).  k -> (Omega(k), H(k))
TABLE_1 = {
    2: (1, 4), 3: (2, 6), 4: (4, 10), 5: (6, 14), 6: (10, 22), 7: (12, 26),
    8: (16, 34), 9: (19, 40), 10: (22, 46), 11: (28, 58), 12: (32, 66),
    13: (36, 74), 14: (44, 90), 15: (49, 100), 16: (52, 106), 17: (58, 118),
    18: (65, 132), 19: (75, 152),
}

# k -> (p_k, q_k, h(k), H(k), Omega(k), n_cov)
TABLE_2 = {
    20: (71, 73, 174, 174, 86, 0),
    21: (73, 83, 190, 190, 94, 48),
    22: (79, 89, 200, 200, 99, 180),
    23: (83, 97, 216, 216, 107, 0),
    24: (89, 107, 234, 236, 117, 12),
    25: (97, 113, 258, 258, 128, 0),
    26: (101, 127, 264, 264, 131, 320),
    27: (103, 131, 282, 284, 141, 216),
    28: (107, 139, 300, 300, 149, 0),
    29: (109, 149, 312, 312, 155, 2074),
    30: (113, 151, 330, 332, 165, 48),
    31: (127, 163, 354, 354, 176, 0),
    32: (131, 173, 378, 378, 188, 0),
    33: (137, 181, 388, 390, 194, 14),
    34: (139, 193, 414, 420, 209, 4),
    35: (149, 199, 432, 438, 218, 8),
    36: (151, 211, 450, 462, 230, 2),
    37: (157, 229, 476, 482, 240, 4),
    38: (163, 241, 492, 500, 249, 2),
    39: (167, 241, 510, 520, 259, 116),
    40: (173, 257, 538, 544, 271, 4),
    41: (179, 271, 550, 566, 282, 4),
    42: (181, 283, 574, 588, 293, 4),
    43: (191, 293, 600, 610, 304, 2),
}

H_1 = 2
OMEGA_2 = 1

# jacobsthal_brute on p_k# stays cheap up to here
BRUTE_H_MAX_K = 8


@dataclass
class Row:
    k: int
    p_k: int | None = None
    q_k: int | None = None
    omega_primorial: int | None = None
    omega_max: int | None = None
    h: int | None = None
    H: int | None = None
    n_cov: int | None = None
    provenance: dict[str, str] = field(default_factory=dict)


CELLS = ("p_k", "q_k", "omega_primorial", "omega_max", "h", "H", "n_cov")


class FunctionTable:
    """Per-k function values, one provenance tag per cell.

    Cells are write-once.  With a reference table attached, every write is
    compared to the reference cell and a mismatch raises RegressionError.
    """

    def __init__(self, reference: FunctionTable | None = None):
        self.rows: dict[int, Row] = {}
        self.reference = reference

    def row(self, k: int) -> Row:
        if k not in self.rows:
            self.rows[k] = Row(k)
        return self.rows[k]

    def get(self, k: int, cell: str) -> int | None:
        row = self.rows.get(k)
        return None if row is None else getattr(row, cell)

    def set(self, k: int, cell: str, value: int, provenance: str) -> None:
        if cell not in CELLS:
            raise InputError(f"unknown cell {cell!r}")
        row = self.row(k)
        old = getattr(row, cell)
        if old is not None and old != value:
            raise RegressionError(f"k={k} {cell}: {value} contradicts stored {old} ({row.provenance[cell]})")
        if self.reference is not None:
            expected = self.reference.get(k, cell)
            if expected is not None and expected != value:
                raise RegressionError(f"k={k} {cell}: computed {value}, published {expected}")
        if old is None:
            setattr(row, cell, value)
            row.provenance[cell] = provenance

    def ks(self) -> list[int]:
        return sorted(self.rows)

    def check_invariants(self) -> list[str]:
        problems = []
        for k in self.ks():
            r = self.rows[k]
            if r.H is not None and r.h is not None and r.H < r.h:
                problems.append(f"k={k}: H={r.H} < h={r.h}")
            if k >= 2 and r.h is not None and r.omega_primorial is not None and r.h != 2 * r.omega_primorial + 2:
                problems.append(f"k={k}: h={r.h} != 2*omega+2 with omega={r.omega_primorial}")
            prev = self.get(k - 1, "omega_max")
            if r.omega_max is not None and prev is not None and r.omega_max <= prev:
                problems.append(f"k={k}: Omega not increasing ({prev} -> {r.omega_max})")
        return problems


def fixture_table() -> FunctionTable:
    t = FunctionTable()
    t.set(1, "p_k", 2, FIXTURE)
    t.set(1, "H", H_1, SEED)
    t.set(1, "h", H_1, SEED)
    for k, (omega, H) in TABLE_1.items():
        p = nth_prime(k)
        t.set(k, "p_k", p, FIXTURE)
        t.set(k, "q_k", p, FIXTURE)
        t.set(k, "omega_max", omega, SEED if k == 2 else FIXTURE)
        t.set(k, "omega_primorial", omega, SEED if k == 2 else FIXTURE)
        t.set(k, "H", H, FIXTURE)
        t.set(k, "h", H, FIXTURE)
    for k, (p, q, h, H, omega, n_cov) in TABLE_2.items():
        t.set(k, "p_k", p, FIXTURE)
        t.set(k, "q_k", q, FIXTURE)
        t.set(k, "h", h, FIXTURE)
        t.set(k, "omega_primorial", (h - 2) // 2, FIXTURE)
        t.set(k, "H", H, FIXTURE)
        t.set(k, "omega_max", omega, FIXTURE)
        t.set(k, "n_cov", n_cov, FIXTURE)
    return t


def compute_qk(k: int, omega_prev: int) -> int:
    """Largest prime that can occur in a balanced covering for k."""
    if k < 3:
        raise InputError(f"q_k is defined for k >= 3, got {k}")
    return largest_prime_at_most(max(nth_prime(k), omega_prev + 1))


@dataclass(frozen=True)
class HValue:
    value: int
    branch: str  # "even": 2*Omega(k)+2 (n contains 2), "odd": Omega(k+1)+1

    def __int__(self) -> int:
        return self.value


def compute_H(omega_k: int, omega_next: int) -> HValue:
    if omega_next <= omega_k:
        raise DataError(f"Omega(k+1)={omega_next} must exceed Omega(k)={omega_k}")
    odd = omega_next + 1
    even = 2 * omega_k + 2
    # Omega(k+1) <= 2*Omega(k)+1 is exactly the case where the even branch wins
    if even >= odd:
        return HValue(even, "even")
    return HValue(odd, "odd")


def omega_primorial(k: int, workers: int = 1, progress: ProgressHook | None = None) -> int:
    """omega(k): the longest window covered by p_2..p_k."""
    if k == 2:
        return OMEGA_2
    return egpa_search(SearchConfig(k, primorial_pool(k), workers=workers), progress).omega


def compute_h(k: int, method: str = "auto", workers: int = 1) -> int:
    """h(k) = j(p_k#), by a period scan for small k or as 2*omega(k)+2."""
    if k < 1:
        raise InputError(f"h(k) needs k >= 1, got {k}")
    if method == "auto":
        method = "brute" if k <= BRUTE_H_MAX_K else "search"
    if method == "brute":
        return jacobsthal_brute(primorial(k))
    if method == "search":
        if k == 1:
            return H_1
        return 2 * omega_primorial(k, workers) + 2
    raise InputError(f"unknown method {method!r}")


def compute_omega(k: int, omega_prev: int, *, enumerate_all: bool = False, workers: int = 1,
                  progress: ProgressHook | None = None) -> SearchOutcome:
    """Omega(k) over the odd primes up to q_k, seeded with Omega(k-1)+1."""
    q = compute_qk(k, omega_prev)
    cfg = SearchConfig(k, pool_up_to(q), start_length=omega_prev + 1,
                       enumerate_all=enumerate_all, workers=workers)
    return egpa_search(cfg, progress)


def run_scheme(k_to: int, *, enumerate_all: bool = False, workers: int = 1,
               reference: FunctionTable | None = None,
               on_row: Callable[[Row], None] | None = None,
               progress: ProgressHook | None = None) -> FunctionTable:
    """Walk k = 3, 4, ..., computing Omega(k) one step ahead of H(k-1).

    The table covers Omega up to k_to and H up to k_to - 1.  Pass a
    reference (normally fixture_table()) to raise on any disagreement.
    """
    if k_to < 3:
        raise InputError("the scheme starts at k = 3")
    t = FunctionTable(reference)
    t.set(1, "p_k", 2, COMPUTED)
    t.set(1, "H", H_1, SEED)
    t.set(2, "p_k", 3, COMPUTED)
    t.set(2, "q_k", 3, COMPUTED)
    t.set(2, "omega_max", OMEGA_2, SEED)
    t.set(2, "omega_primorial", OMEGA_2, SEED)
    t.set(2, "h", 2 * OMEGA_2 + 2, COMPUTED)
    for k in range(3, k_to + 1):
        omega_prev = t.get(k - 1, "omega_max")
        q = compute_qk(k, omega_prev)
        t.set(k, "p_k", nth_prime(k), COMPUTED)
        t.set(k, "q_k", q, COMPUTED)
        outcome = compute_omega(k, omega_prev, enumerate_all=enumerate_all,
                                workers=workers, progress=progress)
        t.set(k, "omega_max", outcome.omega, COMPUTED)
        if enumerate_all:
            t.set(k, "n_cov", outcome.n_cov, COMPUTED)
        if q == nth_prime(k):
            # pool is exactly p_2..p_k
            omega_p = outcome.omega
        else:
            omega_p = omega_primorial(k, workers, progress)
        t.set(k, "omega_primorial", omega_p, COMPUTED)
        t.set(k, "h", 2 * omega_p + 2, COMPUTED)
        t.set(k - 1, "H", compute_H(omega_prev, outcome.omega).value, COMPUTED)
        log.info("k=%d q_k=%d Omega=%d H(%d)=%d (%.2fs)", k, q, outcome.omega, k - 1,
                 t.get(k - 1, "H"), outcome.stats.wall_time)
        if on_row is not None:
            on_row(t.row(k - 1))
    problems = t.check_invariants()
    if problems:
        raise RegressionError("; ".join(problems))
    return t


def format_table(table: FunctionTable, ks: Iterable[int] | None = None) -> str:
    """Aligned plain-text columns: k, p_k, q_k, h, H, Omega, n_cov."""
    header = ("k", "p_k", "q_k", "h(k)", "H(k)", "Omega(k)", "n_cov")
    cells = ("p_k", "q_k", "h", "H", "omega_max", "n_cov")
    lines = [header]
    for k in (table.ks() if ks is None else ks):
        row = table.rows.get(k) or Row(k)
        values = [getattr(row, c) for c in cells]
        lines.append((str(k),) + tuple("-" if v is None else str(v) for v in values))
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    return "\n".join("  ".join(s.rjust(w) for s, w in zip(line, widths)) for line in lines)


# -- conjectures -----------------------------------------------------------

SATISFIED = "satisfied"
VIOLATED = "violated"
UNKNOWN = "unknown"


@dataclass
class ConjectureReport:
    statements: dict[str, str]
    status: dict[str, dict[int, str]]

    def violations(self, name: str) -> list[int]:
        return [k for k, s in self.status[name].items() if s == VIOLATED]

    def holds_everywhere(self, name: str) -> bool:
        return all(s == SATISFIED for s in self.status[name].values())

    def format(self) -> str:
        out = []
        for name, statement in self.statements.items():
            status = self.status[name]
            counts = {s: sum(1 for v in status.values() if v == s) for s in (SATISFIED, VIOLATED, UNKNOWN)}
            out.append(f"{name}: {statement}")
            out.append(f"  satisfied {counts[SATISFIED]}, violated {counts[VIOLATED]}, unknown {counts[UNKNOWN]}")
            bad = self.violations(name)
            if bad:
                out.append(f"  violated at k = {', '.join(map(str, bad))}")
            missing = [k for k, s in status.items() if s == UNKNOWN]
            if missing:
                out.append(f"  unknown at k = {', '.join(map(str, missing))}")
        return "\n".join(out)


def _judge(*values, test) -> str:
    if any(v is None for v in values):
        return UNKNOWN
    return SATISFIED if test(*values) else VIOLATED


def check_conjectures(table: FunctionTable, k_from: int | None = None, k_to: int | None = None
                      ) -> ConjectureReport:
    """Status of each conjecture at every k of the range where it applies."""
    ks = table.ks()
    lo = ks[0] if k_from is None else k_from
    hi = ks[-1] if k_to is None else k_to
    g = table.get
    statements = {
        "jacobsthal": "H(k) = h(k)",
        "conjecture_2": "H(k) > h(k) for k >= 33",
        "conjecture_3": "H(k) < 2 H(k-1) for k >= 3",
        "conjecture_3_omega": "Omega(k) <= 2 Omega(k-1) + 1 for k >= 3",
        "conjecture_4": "H(k) < k^2 for k >= 3",
    }
    status: dict[str, dict[int, str]] = {name: {} for name in statements}
    for k in range(lo, hi + 1):
        status["jacobsthal"][k] = _judge(g(k, "H"), g(k, "h"), test=lambda H, h: H == h)
        if k >= 33:
            status["conjecture_2"][k] = _judge(g(k, "H"), g(k, "h"), test=lambda H, h: H > h)
        if k >= 3:
            status["conjecture_3"][k] = _judge(g(k, "H"), g(k - 1, "H"), test=lambda H, Hp: H < 2 * Hp)
            status["conjecture_3_omega"][k] = _judge(
                g(k, "omega_max"), g(k - 1, "omega_max"), test=lambda o, op: o <= 2 * op + 1)
            status["conjecture_4"][k] = _judge(g(k, "H"), test=lambda H: H < k * k)
    return ConjectureReport(statements, status)
