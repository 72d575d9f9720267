"""Command-line interface: single queries, bulk murmuration scans, class
number tables and the selftest harness.

Exit codes: 0 success, 2 usage, 3 internal consistency (non-integral value
where an integer is required), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .arith import HurwitzTable, as_int, is_prime, mobius
from .errors import DomainError, IntegrityError
from .newspace import (
    TraceContext,
    dims_signed,
    trace_new,
    trace_new_TpWN,
)
from .oracles import run_selftest
from .traces import trace_full

CACHE_ENV = "HECKEAL_CACHE"

MURMUR_COLUMNS = [
    "N", "k", "p", "p_divides_N",
    "dim_new", "dim_plus", "dim_minus",
    "tr_Tp_new", "tr_TpWN_new", "tr_plus", "tr_minus",
]
AGG_COLUMNS = ["p", "sum_tr_plus", "sum_tr_minus", "sum_dim_plus", "sum_dim_minus"]


@dataclass
class RunConfig:
    """Parameters of one murmuration scan."""

    k: int
    n_min: int
    n_max: int
    prime_bound: int
    level_filter: str = "all"  # all | squarefree | prime
    out_format: str = "csv"  # csv | json
    output: str | None = None
    workers: int = 1
    cache_path: str | None = None

    def validate(self) -> None:
        if self.k < 2 or self.k % 2 != 0:
            raise DomainError("weight must be even and >= 2")
        if self.n_min < 1 or self.n_min > self.n_max:
            raise DomainError("need 1 <= N1 <= N2")
        if self.prime_bound < 2:
            raise DomainError("prime bound must be >= 2")
        if self.level_filter not in ("all", "squarefree", "prime"):
            raise DomainError(f"unknown level filter {self.level_filter!r}")
        if self.out_format not in ("csv", "json"):
            raise DomainError(f"unknown output format {self.out_format!r}")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")


def _primes_upto(P: int) -> list[int]:
    return [p for p in range(2, P + 1) if is_prime(p)]


def _level_passes(N: int, level_filter: str) -> bool:
    if level_filter == "squarefree":
        return mobius(N) != 0
    if level_filter == "prime":
        return is_prime(N)
    return True


# module-level state handed to forked pool workers
_WORKER_STATE: dict = {}


def _load_cache(ctx: TraceContext, path: str) -> None:
    if not os.path.exists(path):
        return
    with open(path) as f:
        raw = json.load(f)
    for key, val in raw.items():
        k, N, Q, n = (int(x) for x in key.split(":"))
        ctx.new[(k, N, Q, n)] = Fraction(val)


def _save_cache(ctx: TraceContext, path: str) -> None:
    raw = {
        f"{k}:{N}:{Q}:{n}": str(v) for (k, N, Q, n), v in sorted(ctx.new.items())
    }
    with open(path, "w") as f:
        json.dump(raw, f)


def _murmur_level(args: tuple) -> list[dict]:
    """Rows for a single level; used both inline and inside pool workers."""
    N, k, primes = args
    ctx: TraceContext = _WORKER_STATE["ctx"]
    dim_new = as_int(trace_new(k, N, 1, 1, ctx))
    if dim_new <= 0:
        return []
    dim_plus, dim_minus = dims_signed(k, N, ctx)
    rows = []
    for p in primes:
        tr_tp = as_int(trace_new(k, N, 1, p, ctx))
        tr_tpwn = as_int(trace_new_TpWN(k, N, p, ctx))
        if (tr_tp + tr_tpwn) % 2 != 0:
            raise IntegrityError(
                f"sign-split traces not integral at (N={N}, p={p})"
            )
        tr_plus = (tr_tp + tr_tpwn) // 2
        tr_minus = (tr_tp - tr_tpwn) // 2
        rows.append(
            {
                "N": N, "k": k, "p": p,
                "p_divides_N": int(N % p == 0),
                "dim_new": dim_new, "dim_plus": dim_plus, "dim_minus": dim_minus,
                "tr_Tp_new": tr_tp, "tr_TpWN_new": tr_tpwn,
                "tr_plus": tr_plus, "tr_minus": tr_minus,
            }
        )
    return rows


def _pool_init(table, cache_path):
    ctx = TraceContext(table)
    if cache_path:
        _load_cache(ctx, cache_path)
    _WORKER_STATE["ctx"] = ctx


def run_murmur(config: RunConfig) -> tuple[list[dict], list[dict]]:
    """Compute all rows and per-prime aggregate sums for a scan."""
    config.validate()
    primes = _primes_upto(config.prime_bound)
    levels = [
        N
        for N in range(config.n_min, config.n_max + 1)
        if _level_passes(N, config.level_filter)
    ]
    table = HurwitzTable(4 * config.n_max * max(primes, default=1))
    tasks = [(N, config.k, primes) for N in levels]
    if config.workers == 1:
        _pool_init(table, config.cache_path)
        per_level = [_murmur_level(t) for t in tasks]
        if config.cache_path:
            _save_cache(_WORKER_STATE["ctx"], config.cache_path)
    else:
        import multiprocessing as mp

        chunk = max(1, len(tasks) // (config.workers * 4))
        mp_ctx = mp.get_context("fork")
        with mp_ctx.Pool(
            config.workers, initializer=_pool_init, initargs=(table, config.cache_path)
        ) as pool:
            per_level = pool.map(_murmur_level, tasks, chunksize=chunk)
    rows = [row for level_rows in per_level for row in level_rows]

    agg: dict[int, list[int]] = {p: [0, 0, 0, 0] for p in primes}
    for row in rows:
        a = agg[row["p"]]
        a[0] += row["tr_plus"]
        a[1] += row["tr_minus"]
        a[2] += row["dim_plus"]
        a[3] += row["dim_minus"]
    aggregates = [
        {
            "p": p,
            "sum_tr_plus": agg[p][0],
            "sum_tr_minus": agg[p][1],
            "sum_dim_plus": agg[p][2],
            "sum_dim_minus": agg[p][3],
        }
        for p in primes
    ]
    return rows, aggregates


def _write_murmur(config: RunConfig, rows: list[dict], aggregates: list[dict]) -> None:
    if config.out_format == "json":
        payload = json.dumps({"rows": rows, "aggregates": aggregates}, indent=1)
        if config.output:
            with open(config.output, "w") as f:
                f.write(payload + "\n")
        else:
            sys.stdout.write(payload + "\n")
        return
    header = ",".join(MURMUR_COLUMNS)
    body = [header]
    body += [",".join(str(r[c]) for c in MURMUR_COLUMNS) for r in rows]
    csv_text = "\n".join(body) + "\n"
    agg_lines = [",".join(AGG_COLUMNS)]
    agg_lines += [",".join(str(a[c]) for c in AGG_COLUMNS) for a in aggregates]
    agg_text = "\n".join(agg_lines) + "\n"
    if config.output:
        with open(config.output, "w", newline="") as f:
            f.write(csv_text)
        with open(config.output + ".agg.csv", "w", newline="") as f:
            f.write(agg_text)
    else:
        sys.stdout.write(csv_text)
        for line in agg_text.splitlines():
            sys.stdout.write("# " + line + "\n")


def _print_exact(value: Fraction) -> None:
    print(as_int(value))


def _cmd_trace(args) -> int:
    table = HurwitzTable()
    _print_exact(trace_full(args.k, args.N, args.Q, args.n, table))
    return 0


def _cmd_trace_new(args) -> int:
    ctx = TraceContext()
    _print_exact(trace_new(args.k, args.N, args.Q, args.n, ctx))
    return 0


def _cmd_dims(args) -> int:
    ctx = TraceContext()
    dim = as_int(ctx.trace_full(args.k, args.N, 1, 1))
    dim_new = as_int(trace_new(args.k, args.N, 1, 1, ctx))
    plus, minus = dims_signed(args.k, args.N, ctx)
    print(f"{dim} {dim_new} {plus} {minus}")
    return 0


def _cmd_murmur(args) -> int:
    cache = args.cache or os.environ.get(CACHE_ENV)
    try:
        n1, n2 = (int(x) for x in args.levels.split(":"))
    except ValueError:
        raise DomainError("levels must be of the form N1:N2")
    config = RunConfig(
        k=args.k,
        n_min=n1,
        n_max=n2,
        prime_bound=args.primes,
        level_filter=args.filter,
        out_format=args.format,
        output=args.output,
        workers=args.workers,
        cache_path=cache,
    )
    config.validate()
    rows, aggregates = run_murmur(config)
    _write_murmur(config, rows, aggregates)
    return 0


def _cmd_hurwitz(args) -> int:
    if args.max < 0:
        raise DomainError("hurwitz: need n_max >= 0")
    table = HurwitzTable(args.max)
    lines = ["n,twelve_H"]
    lines += [f"{n},{table.twelve_h(n)}" for n in range(args.max + 1)]
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_selftest(args) -> int:
    report = run_selftest(args.level)
    print(report.to_text())
    if args.json:
        with open(args.json, "w") as f:
            f.write(report.to_json() + "\n")
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckeal",
        description="Exact Hecke / Atkin-Lehner traces on cusp form spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_query(p, hecke=True):
        p.add_argument("-k", type=int, required=True, help="weight (even, >= 2)")
        p.add_argument("-N", type=int, required=True, help="level")
        if hecke:
            p.add_argument("-Q", type=int, default=1, help="Atkin-Lehner divisor (default 1)")
            p.add_argument("-n", type=int, default=1, help="Hecke index (default 1)")

    p = sub.add_parser("trace", help="Tr(T_n o W_Q | S_k(N))")
    add_query(p)
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("trace-new", help="Tr(T_n o W_Q | S_k(N)^new)")
    add_query(p)
    p.set_defaults(func=_cmd_trace_new)

    p = sub.add_parser("dims", help="dim, new dim, and signed new dims")
    add_query(p, hecke=False)
    p.set_defaults(func=_cmd_dims)

    p = sub.add_parser("murmur", help="bulk scan over a conductor window")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--levels", required=True, metavar="N1:N2")
    p.add_argument("--primes", type=int, required=True, help="prime bound P")
    p.add_argument("--filter", default="all", choices=("all", "squarefree", "prime"))
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cache", default=None, help=f"cache file (or ${CACHE_ENV})")
    p.set_defaults(func=_cmd_murmur)

    p = sub.add_parser("hurwitz", help="table of 12*H(n) for n <= max")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_hurwitz)

    p = sub.add_parser("selftest", help="cross-module consistency suites")
    p.add_argument("--level", default="quick", choices=("quick", "full"))
    p.add_argument("--json", default=None, help="also write a JSON report here")
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IntegrityError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
