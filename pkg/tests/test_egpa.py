import math
import random
from itertools import combinations, product

import pytest

from jacobsthal.bruteforce import brute_force_omega
from jacobsthal.covering import is_balanced, verify
from jacobsthal.egpa import (FrequencyTable, SearchConfig, count_max_possible, egpa_search, masks_for,
                             pool_up_to, primorial_pool, select_candidate)
from jacobsthal.errors import ConfigError, SizeGuardError
from jacobsthal.numtheory import nth_prime


def table_of(counts):
    return FrequencyTable({}, 0, dict(counts))


def test_count_max_possible_examples():
    assert count_max_possible(table_of({}), 3) == 0
    counts = {(3, 1): 5, (5, 1): 4, (7, 2): 4, (11, 1): 1}
    assert count_max_possible(table_of(counts), 2) == 9
    assert count_max_possible(table_of(counts), 10) == 14
    assert count_max_possible(table_of(counts), 0) == 0


def test_count_max_possible_takes_one_residue_per_prime():
    counts = {(3, 1): 5, (3, 2): 4, (5, 1): 3}
    assert count_max_possible(table_of(counts), 2) == 8


def test_select_candidate():
    assert select_candidate(table_of({(3, 1): 4, (5, 2): 2})) == (3, 1)
    assert select_candidate(table_of({(7, 3): 1})) == (7, 3)
    assert select_candidate(table_of({(5, 2): 3, (3, 2): 3, (3, 1): 3})) == (3, 1)
    assert select_candidate(table_of({})) is None


def random_partial_state(rng, k):
    pool = primorial_pool(k)
    m = rng.randint(2, 12)
    masks = masks_for(pool, m)
    used = rng.sample(pool, rng.randint(0, k - 2))
    free = (1 << m) - 1
    for p in used:
        free &= ~masks.get((p, rng.randint(1, p - 1)), 0)
    rest = [p for p in pool if p not in used]
    table = FrequencyTable.fill(masks, free, [key for key in masks if key[0] in rest])
    return pool, m, free, rest, k - 1 - len(used), table


def best_completion(m, free, rest, levels):
    best = 0
    for primes in combinations(rest, levels):
        for residues in product(*(range(1, p) for p in primes)):
            hit = sum(1 for x in range(1, m + 1)
                      if free >> (x - 1) & 1 and any(x % p == a for p, a in zip(primes, residues)))
            best = max(best, hit)
    return best


def test_count_max_possible_is_an_upper_bound():
    rng = random.Random(7)
    for _ in range(1000):
        k = rng.randint(3, 6)
        _, m, free, rest, levels, table = random_partial_state(rng, k)
        bound = count_max_possible(table, levels)
        assert best_completion(m, free, rest, levels) <= bound


def test_frequency_table_incremental_updates_match_recount():
    rng = random.Random(11)
    for _ in range(200):
        pool = primorial_pool(rng.randint(4, 9))
        m = rng.randint(5, 25)
        masks = masks_for(pool, m)
        cover_keys = [[]] + [[(p, x % p) for p in pool if x % p] for x in range(1, m + 1)]
        table = FrequencyTable.fill(masks, (1 << m) - 1)
        while table.counts:
            key = rng.choice(sorted(table.counts))
            table = table.commit(key, cover_keys)
            assert table.is_consistent()
            for (p, _), c in table.counts.items():
                assert 0 < c <= math.ceil(m / p)
            assert key[0] not in {p for p, _ in table.counts}


def test_config_validation():
    with pytest.raises(ConfigError):
        SearchConfig(5, (3, 5, 7))
    with pytest.raises(ConfigError):
        SearchConfig(3, (2, 3))
    with pytest.raises(ConfigError):
        SearchConfig(3, (5, 3))
    with pytest.raises(ConfigError):
        SearchConfig(3, (3, 9))
    assert SearchConfig(6, primorial_pool(6)).max_levels == 5
    assert SearchConfig(6, primorial_pool(6)).reference_prime == 13


@pytest.mark.parametrize("k, pool, omega", [
    (3, (3, 5), 2),
    (4, (3, 5, 7), 4),
    (6, (3, 5, 7, 11, 13), 10),
])
def test_egpa_examples(k, pool, omega):
    assert egpa_search(SearchConfig(k, pool)).omega == omega


@pytest.mark.parametrize("k, pool, omega", [
    (2, (3,), 1),
    (3, (3, 5), 2),
    (4, (3, 5, 7), 4),
])
def test_brute_force_examples(k, pool, omega):
    assert brute_force_omega(k, pool).omega == omega


def test_brute_force_guard():
    with pytest.raises(SizeGuardError):
        brute_force_omega(8, primorial_pool(8))


@pytest.mark.parametrize("k", [3, 4, 5, 6])
@pytest.mark.parametrize("extra", [0, 2])
def test_egpa_agrees_with_brute_force(k, extra):
    pool = pool_up_to(nth_prime(k + extra))
    outcome = egpa_search(SearchConfig(k, pool, enumerate_all=True, check_tables=True))
    oracle = brute_force_omega(k, pool)
    assert outcome.omega == oracle.omega
    assert outcome.coverings == oracle.balanced()
    # nothing longer exists in the pool
    assert all(c.length == oracle.omega for c in oracle.coverings)


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_every_recorded_covering_is_sound(k):
    pool = pool_up_to(nth_prime(k + 2))
    outcome = egpa_search(SearchConfig(k, pool, enumerate_all=True))
    assert outcome.coverings
    assert len(set(outcome.coverings)) == len(outcome.coverings)
    for c in outcome.coverings:
        assert verify(c) and c.length == outcome.omega
        assert len(c.primes) == k - 1 and set(c.primes) <= set(pool)
        assert is_balanced(c, k)


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_pruning_gate_is_sound(k):
    pool = pool_up_to(nth_prime(k + 1))
    pruned = egpa_search(SearchConfig(k, pool, enumerate_all=True))
    full = egpa_search(SearchConfig(k, pool, enumerate_all=True, prune=False))
    assert pruned == full
    assert pruned.stats.nodes < full.stats.nodes


def test_start_length_above_omega_walks_down():
    assert egpa_search(SearchConfig(6, primorial_pool(6), start_length=15)).omega == 10
    assert egpa_search(SearchConfig(6, primorial_pool(6), start_length=11)).omega == 10


def test_larger_pool_does_not_change_omega():
    # primes above q_k can never help
    assert egpa_search(SearchConfig(7, pool_up_to(31))).omega == 12


def test_n_cov_counts_large_primes_only():
    outcome = egpa_search(SearchConfig(6, pool_up_to(13), enumerate_all=True))
    assert outcome.n_cov == 0
    outcome = egpa_search(SearchConfig(6, pool_up_to(19), enumerate_all=True, reference_prime=11))
    assert outcome.n_cov == sum(1 for c in outcome.coverings if max(c.primes) > 11)


def test_progress_hook_is_called():
    calls = []
    cfg = SearchConfig(16, primorial_pool(16), start_length=50, progress_every=1000)
    egpa_search(cfg, lambda nodes, m, depth: calls.append((nodes, m, depth)))
    assert calls
    assert all(m in (50, 51, 52, 53) and 0 <= depth <= 15 for _, m, depth in calls)


@pytest.mark.parametrize("k", [6, 9])
def test_parallel_matches_serial(k):
    serial = egpa_search(SearchConfig(k, primorial_pool(k), enumerate_all=True))
    parallel = egpa_search(SearchConfig(k, primorial_pool(k), enumerate_all=True, workers=2))
    assert serial == parallel
    assert serial.coverings == parallel.coverings
