"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 resource guard.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from . import ancillary
from .bruteforce import brute_force_omega
from .covering import Covering, covered_run, verify
from .egpa import SearchConfig, SearchOutcome, egpa_search, find_covering, pool_up_to, primorial_pool
from .errors import InputError, JacobsthalError
from .numtheory import nth_prime
from .scheme import (check_conjectures, compute_H, compute_h, compute_qk, fixture_table,
                     format_table, run_scheme)

log = logging.getLogger("jacobsthal")


def _progress(nodes: int, m: int, depth: int) -> None:
    print(f"  nodes={nodes} m={m} depth={depth}", file=sys.stderr, flush=True)


def _omega_prev(k: int, chain: bool, workers: int) -> int:
    """Omega(k-1): published value when known, otherwise computed from k = 3."""
    if k == 3:
        return 1
    if not chain:
        known = fixture_table().get(k - 1, "omega_max")
        if known is not None:
            return known
    return run_scheme(k - 1, workers=workers).get(k - 1, "omega_max")


def _config(args, k: int, enumerate_all: bool = False) -> SearchConfig:
    if k < 3:
        raise InputError("searches start at k = 3")
    workers = 1 if args.deterministic else args.threads
    if args.pool == "primorial":
        pool = primorial_pool(k)
        start = args.start_length or 1
    else:
        omega_prev = _omega_prev(k, args.chain, workers)
        pool = pool_up_to(compute_qk(k, omega_prev))
        start = args.start_length or omega_prev + 1
    return SearchConfig(k, pool, start_length=start, enumerate_all=enumerate_all, workers=workers)


def _report(out: SearchOutcome, cfg: SearchConfig) -> None:
    s = out.stats
    print(f"k = {out.k}")
    print(f"pool = {cfg.prime_pool[0]}..{cfg.prime_pool[-1]} ({len(cfg.prime_pool)} primes)")
    print(f"Omega = {out.omega}")
    if cfg.enumerate_all:
        print(f"balanced coverings = {len(out.coverings)}, n_cov = {out.n_cov}")
    print(f"nodes = {s.nodes}, prunes = {s.prunes}, lengths tried = {s.lengths_tried}, "
          f"time = {s.wall_time:.2f}s")


def cmd_omega(args) -> int:
    cfg = _config(args, args.k, enumerate_all=args.enumerate)
    out = egpa_search(cfg, _progress if args.progress else None)
    _report(out, cfg)
    return 0


def cmd_h(args) -> int:
    workers = 1 if args.deterministic else args.threads
    print(f"h({args.k}) = {compute_h(args.k, args.method, workers)}")
    return 0


def cmd_bigh(args) -> int:
    workers = 1 if args.deterministic else args.threads
    if args.k == 1:
        print("H(1) = 2")
        return 0
    table = run_scheme(max(args.k + 1, 3), workers=workers, reference=fixture_table())
    H = compute_H(table.get(args.k, "omega_max"), table.get(args.k + 1, "omega_max"))
    print(f"H({args.k}) = {H.value} ({'2*Omega(k)+2' if H.branch == 'even' else 'Omega(k+1)+1'})")
    return 0


def cmd_enumerate(args) -> int:
    cfg = _config(args, args.k, enumerate_all=True)
    out = egpa_search(cfg, _progress if args.progress else None)
    _report(out, cfg)
    coverings = out.coverings
    if args.only_large:
        coverings = tuple(c for c in coverings if c.max_prime > out.reference_prime)
    paths = ancillary.write_all([(args.k, c) for c in coverings], args.out_dir)
    for path in paths.values():
        print(f"wrote {path}")
    return 0


def cmd_verify(args) -> int:
    report = ancillary.verify_files(args.file)
    print(report.summary())
    return 0 if report.ok else 1


def cmd_oracle(args) -> int:
    if args.max_prime is not None:
        pool = pool_up_to(args.max_prime)
    elif args.pool == "primorial":
        pool = primorial_pool(args.k)
    else:
        pool = pool_up_to(nth_prime(args.k))
    out = brute_force_omega(args.k, pool)
    balanced = out.balanced()
    print(f"k = {args.k}, pool = {list(pool)}")
    print(f"Omega = {out.omega}, maximal coverings = {len(out.coverings)}, balanced = {len(balanced)}")
    for c in balanced:
        print(f"  {c}")
    return 0


def cmd_table(args) -> int:
    workers = 1 if args.deterministic else args.threads
    table = run_scheme(args.to + 1, enumerate_all=args.enumerate, workers=workers,
                       reference=fixture_table(),
                       progress=_progress if args.progress else None)
    print(format_table(table, range(args.frm, args.to + 1)))
    return 0


def cmd_conjectures(args) -> int:
    table = fixture_table()
    print(check_conjectures(table, args.frm, args.to).format())
    return 0


def cmd_certify(args) -> int:
    """Find one covering of a given length; H(k) >= 2*length+2 follows."""
    cfg = _config(args, args.k)
    started = time.perf_counter()
    c = find_covering(cfg, args.length, _progress if args.progress else None)
    elapsed = time.perf_counter() - started
    if c is None:
        print(f"no covering of length {args.length} for k = {args.k} ({elapsed:.1f}s)")
        return 1
    if not verify(c):
        print("internal error: covering failed verification", file=sys.stderr)
        return 1
    run = covered_run(c.entries)
    print(f"k = {args.k}, length = {args.length} (covers {run}), time = {elapsed:.1f}s")
    print(c)
    print(f"H({args.k}) >= {2 * run + 2}")
    if args.out:
        ancillary.write_remainders([(args.k, Covering(c.entries, run))], args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacobsthal", description=__doc__.splitlines()[0])
    parser.add_argument("--deterministic", action="store_true", help="force single-process search")
    parser.add_argument("--progress", action="store_true", help="progress lines on stderr")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def search_opts(p):
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--pool", choices=("primorial", "max"), default="max",
                       help="p_2..p_k, or all odd primes up to q_k")
        p.add_argument("--start-length", type=int, default=None)
        p.add_argument("--threads", type=int, default=1, help="worker processes")
        p.add_argument("--chain", action="store_true",
                       help="compute Omega(k-1) instead of using the published value")

    p = sub.add_parser("omega", help="compute Omega(k)")
    search_opts(p)
    p.add_argument("--enumerate", action="store_true", help="also list balanced coverings")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("h", help="primorial Jacobsthal function h(k)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=("auto", "brute", "search"), default="auto")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_h)

    p = sub.add_parser("bigh", help="maximum Jacobsthal function H(k)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_bigh)

    p = sub.add_parser("enumerate", help="write all balanced coverings of length Omega(k)")
    search_opts(p)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--only-large", action="store_true", help="keep coverings with a prime > p_k")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="check a remainders file")
    p.add_argument("--file", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force Omega(k) for small k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--pool", choices=("primorial", "max"), default="primorial")
    p.add_argument("--max-prime", type=int, default=None, help="use the odd primes up to this bound")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("table", help="run the pipeline and print the function table")
    p.add_argument("--from", dest="frm", type=int, default=2)
    p.add_argument("--to", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--enumerate", action="store_true", help="also count n_cov")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("conjectures", help="check the conjectures on the published tables")
    p.add_argument("--from", dest="frm", type=int, default=1)
    p.add_argument("--to", type=int, default=43)
    p.set_defaults(func=cmd_conjectures)

    p = sub.add_parser("certify", help="find one covering of a given length")
    search_opts(p)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--out", default=None, help="write the covering as a remainders file")
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except JacobsthalError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
