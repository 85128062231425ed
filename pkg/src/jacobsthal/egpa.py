"""Extended Greedy Permutation Algorithm (EGPA) for Omega(k).

Positions 1..m of the tentative window are bits 0..m-1 of a Python int.  A
search node holds the free-position mask and a frequency table mapping every
still usable (prime, residue) pair to the number of free positions it would
cover.  At each node the pair with the largest count is committed and the
search descends one level; afterwards the pair is deleted and the next best
pair is tried on the same level.  A level is abandoned as soon as the best
`levels` counts (one per prime) can no longer reach the number of free
positions.

Omega(k) is found by escalation: a find-one search at length m either fails
(Omega = m - 1) or returns a covering whose covered run L >= m, and the search
restarts at L + 1.  A final complete pass at m = Omega collects every balanced
covering.
"""

from __future__ import annotations

import logging
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .covering import Covering, covered_run, is_balanced
from .errors import ConfigError
from .numtheory import is_prime, nth_prime, odd_primes_up_to

log = logging.getLogger(__name__)

Key = tuple[int, int]
ProgressHook = Callable[[int, int, int], None]

_STOP_POLL = 1024


def masks_for(primes: Sequence[int], m: int) -> dict[Key, int]:
    """Bit masks of positions x in 1..m with x = a (mod p), for non-zero a."""
    masks = {}
    for p in primes:
        for a in range(1, min(p, m + 1)):
            mask = 0
            for x in range(a, m + 1, p):
                mask |= 1 << (x - 1)
            masks[(p, a)] = mask
    return masks


class FrequencyTable:
    """Counts of free positions per usable (prime, residue) pair.

    Pairs that cover no free position are dropped; a free position can only
    become occupied, so they never come back.
    """

    __slots__ = ("masks", "free", "counts")

    def __init__(self, masks: dict[Key, int], free: int, counts: dict[Key, int]):
        self.masks = masks
        self.free = free
        self.counts = counts

    @classmethod
    def fill(cls, masks: dict[Key, int], free: int, keys=None) -> FrequencyTable:
        if keys is None:
            keys = masks
        counts = {}
        for key in keys:
            c = (free & masks[key]).bit_count()
            if c:
                counts[key] = c
        return cls(masks, free, counts)

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def n_free(self) -> int:
        return self.free.bit_count()

    def ranked(self) -> list[tuple[Key, int]]:
        """Pairs by decreasing count; ties go to the smaller prime, then residue."""
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def delete(self, key: Key) -> None:
        del self.counts[key]

    def commit(self, key: Key, cover_keys: list[list[Key]], live=None) -> FrequencyTable:
        """Child table after assigning `key`: its prime leaves the table and
        every newly covered position is decremented from the remaining pairs."""
        p = key[0]
        source = self.counts if live is None else live
        counts = {kk: c for kk, c in source.items() if kk[0] != p}
        mask = self.masks[key]
        newly = self.free & mask
        while newly:
            low = newly & -newly
            newly ^= low
            for kk in cover_keys[low.bit_length()]:
                c = counts.get(kk)
                if c is not None:
                    if c == 1:
                        del counts[kk]
                    else:
                        counts[kk] = c - 1
        return FrequencyTable(self.masks, self.free & ~mask, counts)

    def recount(self) -> dict[Key, int]:
        out = {}
        for key in self.counts:
            c = (self.free & self.masks[key]).bit_count()
            if c:
                out[key] = c
        return out

    def is_consistent(self) -> bool:
        return self.recount() == self.counts


def _best_per_prime(ranked: Sequence[tuple[Key, int]], start: int, levels: int) -> int:
    total = 0
    seen: set[int] = set()
    for i in range(start, len(ranked)):
        (p, _), c = ranked[i]
        if p not in seen:
            seen.add(p)
            total += c
            if len(seen) == levels:
                break
    return total


def count_max_possible(ftab: FrequencyTable, levels_remaining: int) -> int:
    """Upper bound on the free positions the remaining levels can cover:
    the sum of the `levels_remaining` largest counts, one residue per prime."""
    if levels_remaining <= 0:
        return 0
    return _best_per_prime(ftab.ranked(), 0, levels_remaining)


def select_candidate(ftab: FrequencyTable) -> Key | None:
    if not ftab.counts:
        return None
    return min(ftab.counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]


@dataclass(frozen=True)
class SearchConfig:
    k: int
    prime_pool: tuple[int, ...]
    start_length: int = 1
    enumerate_all: bool = False
    workers: int = 1
    reference_prime: int | None = None
    prune: bool = True
    check_tables: bool = False
    split_depth: int = 2
    progress_every: int = 100_000

    def __post_init__(self) -> None:
        object.__setattr__(self, "prime_pool", tuple(self.prime_pool))
        if self.k < 2:
            raise ConfigError(f"k must be >= 2, got {self.k}")
        pool = self.prime_pool
        if any(b <= a for a, b in zip(pool, pool[1:])):
            raise ConfigError("prime pool must be strictly increasing")
        if any(p == 2 or not is_prime(p) for p in pool):
            raise ConfigError("prime pool must contain odd primes only")
        if len(pool) < self.k - 1:
            raise ConfigError(f"k={self.k} needs at least {self.k - 1} primes, pool has {len(pool)}")
        if self.start_length < 1:
            raise ConfigError("start length must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.reference_prime is None:
            object.__setattr__(self, "reference_prime", nth_prime(self.k))

    @property
    def max_levels(self) -> int:
        return self.k - 1


@dataclass
class SearchStats:
    nodes: int = 0
    prunes: int = 0
    hits: int = 0
    unbalanced: int = 0
    lengths_tried: list[int] = field(default_factory=list)
    wall_time: float = 0.0

    def absorb(self, other: SearchStats) -> None:
        self.nodes += other.nodes
        self.prunes += other.prunes
        self.hits += other.hits


@dataclass(frozen=True)
class SearchOutcome:
    k: int
    omega: int
    coverings: tuple[Covering, ...]
    reference_prime: int
    stats: SearchStats = field(default_factory=SearchStats, compare=False)

    @property
    def n_cov(self) -> int:
        """Balanced coverings using at least one prime above p_k."""
        return sum(1 for c in self.coverings if c.max_prime > self.reference_prime)


class _Stop(Exception):
    pass


class _Engine:
    """Depth-first EGPA at one fixed window length."""

    def __init__(self, pool: Sequence[int], m: int, levels: int, *, find_one: bool,
                 prune: bool = True, check_tables: bool = False,
                 progress: ProgressHook | None = None, progress_every: int = 100_000,
                 stop_event=None):
        self.pool = tuple(pool)
        self.m = m
        self.levels = levels
        self.find_one = find_one
        self.prune = prune
        self.check_tables = check_tables
        self.progress = progress
        self.progress_every = progress_every
        self.stop_event = stop_event
        self.masks = masks_for(pool, m)
        self.cover_keys: list[list[Key]] = [[]] + [
            [(p, x % p) for p in pool if x % p] for x in range(1, m + 1)
        ]
        self.stats = SearchStats()
        self.hits: list[tuple[Key, ...]] = []
        self._reported = 0

    def root(self) -> tuple[FrequencyTable, int, tuple[Key, ...]]:
        return FrequencyTable.fill(self.masks, (1 << self.m) - 1), self.levels, ()

    def children(self, table: FrequencyTable, levels: int, chosen: tuple[Key, ...]
                 ) -> Iterator[tuple[FrequencyTable, int, tuple[Key, ...]]]:
        """Commit the best pair, then delete it and commit the next one, while
        the bound still allows the free positions to be filled."""
        n_empty = table.n_free
        ranked = table.ranked()
        live = dict(table.counts)
        for idx, (key, _) in enumerate(ranked):
            if self.prune and _best_per_prime(ranked, idx, levels) < n_empty:
                self.stats.prunes += 1
                return
            del live[key]
            child = table.commit(key, self.cover_keys, live)
            if self.check_tables and not child.is_consistent():
                raise AssertionError(f"frequency table drifted after committing {key}")
            yield child, levels - 1, chosen + (key,)

    def descend(self, table: FrequencyTable, levels: int, chosen: tuple[Key, ...]) -> None:
        stats = self.stats
        stats.nodes += 1
        if stats.nodes % _STOP_POLL == 0:
            if self.stop_event is not None and self.stop_event.is_set():
                raise _Stop
            if self.progress is not None and stats.nodes - self._reported >= self.progress_every:
                self._reported = stats.nodes
                self.progress(stats.nodes, self.m, len(chosen))
        if not table.free:
            stats.hits += 1
            self.hits.append(chosen)
            if self.find_one:
                raise _Stop
            return
        if levels == 0:
            return
        for child in self.children(table, levels, chosen):
            self.descend(*child)

    def run(self, state=None) -> list[tuple[Key, ...]]:
        try:
            self.descend(*(state or self.root()))
        except _Stop:
            pass
        return self.hits

    def split(self, depth: int) -> list[tuple[FrequencyTable, int, tuple[Key, ...]]]:
        """Frontier of disjoint subtrees `depth` levels below the root, in
        search order.  Leaves reached on the way are kept as tasks."""
        frontier = [self.root()]
        for _ in range(depth):
            nxt = []
            for state in frontier:
                self.stats.nodes += 1
                table, levels, _ = state
                if not table.free or levels == 0:
                    nxt.append(state)
                else:
                    nxt.extend(self.children(*state))
            frontier = nxt
        return frontier


# -- worker side of the process pool ------------------------------------------

_worker_stop = None


def _init_worker(stop_event) -> None:
    global _worker_stop
    _worker_stop = stop_event


def _run_task(args) -> tuple[list[tuple[Key, ...]], SearchStats]:
    pool, m, find_one, prune, check_tables, (counts, free, levels, chosen) = args
    if _worker_stop is not None and _worker_stop.is_set():
        return [], SearchStats()
    engine = _Engine(pool, m, levels, find_one=find_one, prune=prune,
                     check_tables=check_tables, stop_event=_worker_stop)
    table = FrequencyTable(engine.masks, free, counts)
    hits = engine.run((table, levels, chosen))
    if find_one and hits and _worker_stop is not None:
        _worker_stop.set()
    return hits, engine.stats


class _Runner:
    """Runs fixed-length searches, serially or fanned out over processes."""

    def __init__(self, cfg: SearchConfig, progress: ProgressHook | None):
        self.cfg = cfg
        self.progress = progress
        self.stats = SearchStats()
        self._executor = None
        self._stop = None
        if cfg.workers > 1:
            ctx = multiprocessing.get_context()
            self._stop = ctx.Event()
            self._executor = ProcessPoolExecutor(
                cfg.workers, mp_context=ctx, initializer=_init_worker, initargs=(self._stop,))

    def close(self) -> None:
        if self._executor is not None:
            self._executor.shutdown()

    def search(self, m: int, find_one: bool) -> list[tuple[Key, ...]]:
        cfg = self.cfg
        self.stats.lengths_tried.append(m)
        engine = _Engine(cfg.prime_pool, m, cfg.max_levels, find_one=find_one,
                         prune=cfg.prune, check_tables=cfg.check_tables,
                         progress=self.progress, progress_every=cfg.progress_every)
        if self._executor is None:
            hits = engine.run()
            self.stats.absorb(engine.stats)
            return hits

        frontier = engine.split(cfg.split_depth)
        self.stats.absorb(engine.stats)
        self._stop.clear()
        tasks = [(cfg.prime_pool, m, find_one, cfg.prune, cfg.check_tables,
                  (table.counts, table.free, levels, chosen))
                 for table, levels, chosen in frontier]
        hits = []
        for task_hits, task_stats in self._executor.map(_run_task, tasks):
            self.stats.absorb(task_stats)
            hits.extend(task_hits)
            if self.progress is not None:
                self.progress(self.stats.nodes, m, cfg.split_depth)
        if find_one:
            hits = hits[:1]
        return hits


def _run_length(chosen: tuple[Key, ...]) -> int:
    return covered_run(chosen)


def egpa_search(cfg: SearchConfig, progress: ProgressHook | None = None) -> SearchOutcome:
    """Omega(k) over the configured prime pool, optionally with every balanced
    covering of that length."""
    started = time.perf_counter()
    runner = _Runner(cfg, progress)
    try:
        m = cfg.start_length
        hits = runner.search(m, find_one=True)
        if hits:
            while hits:
                omega = _run_length(hits[0])
                log.info("k=%d: covering of length %d found", cfg.k, omega)
                hits = runner.search(omega + 1, find_one=True)
        else:
            # started above Omega; walk down to the first coverable length
            omega = m - 1
            while omega > 1 and not runner.search(omega, find_one=True):
                omega -= 1

        coverings: tuple[Covering, ...] = ()
        if cfg.enumerate_all:
            found = set()
            for chosen in runner.search(omega, find_one=False):
                if len(chosen) != cfg.max_levels:
                    continue
                c = Covering.from_pairs(chosen, omega)
                if is_balanced(c, cfg.k, cfg.reference_prime):
                    found.add(c)
                else:
                    runner.stats.unbalanced += 1
            coverings = tuple(sorted(found, key=Covering.sort_key))
    finally:
        runner.close()
    runner.stats.wall_time = time.perf_counter() - started
    return SearchOutcome(cfg.k, omega, coverings, cfg.reference_prime, runner.stats)


def find_covering(cfg: SearchConfig, m: int, progress: ProgressHook | None = None) -> Covering | None:
    """Any covering of positions 1..m by k-1 primes of the pool, or None."""
    runner = _Runner(cfg, progress)
    try:
        hits = runner.search(m, find_one=True)
    finally:
        runner.close()
    return Covering.from_pairs(hits[0], m) if hits else None


def primorial_pool(k: int) -> tuple[int, ...]:
    """The first k-1 odd primes p_2..p_k."""
    return tuple(nth_prime(i) for i in range(2, k + 1))


def pool_up_to(q: int) -> tuple[int, ...]:
    return tuple(odd_primes_up_to(q))
