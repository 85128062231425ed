import random

import pytest
from hypothesis import strategies as st

from jacobsthal.covering import Covering, covered_run
from jacobsthal.numtheory import odd_primes_up_to

ACCEPTANCE: dict[str, tuple[bool, str]] = {}

SMALL_ODD_PRIMES = odd_primes_up_to(47)


@st.composite
def coverings(draw, max_primes=6):
    """Random covering whose length is its full covered run from position 1."""
    primes = sorted(draw(st.lists(st.sampled_from(SMALL_ODD_PRIMES), min_size=1,
                                  max_size=max_primes, unique=True)))
    residues = [draw(st.integers(1, p - 1)) for p in primes]
    # position 1 must be covered
    residues[0] = 1
    pairs = tuple(zip(primes, residues))
    return Covering(pairs, covered_run(pairs))


def random_covering(rng: random.Random, max_primes=8) -> Covering:
    n = rng.randint(1, max_primes)
    primes = sorted(rng.sample(SMALL_ODD_PRIMES, n))
    residues = [rng.randint(1, p - 1) for p in primes]
    residues[0] = 1
    pairs = tuple(zip(primes, residues))
    return Covering(pairs, covered_run(pairs))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


@pytest.fixture
def rng():
    return random.Random(20240611)
