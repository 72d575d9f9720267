"""Newspace traces via Moebius inversion over the divisor lattice.

The central recursion expresses Tr(T_n o W_Q | S_k(N)^new) through traces on
full cusp spaces at divisor levels, with a correction sum over Hecke indices
n' > 1 that recurses into newspace traces at strictly smaller Hecke index.
All values are memoized in a TraceContext, which murmuration scans share
across a whole conductor window.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .arith import (
    HurwitzTable,
    alpha_Qn,
    as_int,
    divisors,
    factorize,
    is_prime,
    is_square,
    mobius,
    part_supported,
    sigma0_coprime,
    valuation,
)
from .errors import DomainError, IntegrityError
from .traces import trace_full, validate_query


class TraceContext:
    """Memo caches shared across a run; owns the Hurwitz table."""

    def __init__(self, table: HurwitzTable | None = None):
        self.table = table if table is not None else HurwitzTable()
        self.full: dict[tuple[int, int, int, int], Fraction] = {}
        self.new: dict[tuple[int, int, int, int], Fraction] = {}
        self.hits = 0
        self.misses = 0

    def trace_full(self, k: int, N: int, Q: int, n: int) -> Fraction:
        key = (k, N, Q, n)
        v = self.full.get(key)
        if v is None:
            v = trace_full(k, N, Q, n, self.table)
            self.full[key] = v
        return v


def set_N_d(N: int, d: int) -> list[int]:
    """Divisors N' of N with d | N/N' and gcd(d, N') = 1."""
    if N < 1 or d < 1:
        raise DomainError("set_N_d: positive arguments required")
    return [
        Np
        for Np in divisors(N)
        if (N // Np) % d == 0 and math.gcd(d, Np) == 1
    ]


def set_N_dn(N: int, n: int, d: int, nprime: int) -> list[int]:
    """Members N' of set_N_d(N, d) with N/(N'*n') a perfect square and
    gcd(N/N', d*n) = n'."""
    if d < 1 or nprime % d != 0 or n % nprime != 0:
        raise DomainError("set_N_dn: need d | nprime | n")
    out = []
    for Np in set_N_d(N, d):
        co = N // Np
        if co % nprime != 0:
            continue
        if not is_square(co // nprime)[0]:
            continue
        if math.gcd(co, d * n) != nprime:
            continue
        out.append(Np)
    return out


def set_N_QNn(Q: int, N: int, n: int, d: int, nprime: int) -> list[int]:
    """The level set of the correction sum: elementwise products of the
    Q-side set (carrying the square and gcd conditions) with the plain
    divisor set on the complementary part of the level."""
    if Q < 1 or N % Q != 0 or math.gcd(Q, N // Q) != 1:
        raise DomainError(f"set_N_QNn: need Q || N, got Q={Q}, N={N}")
    if nprime % d != 0 or n % nprime != 0:
        raise DomainError("set_N_QNn: need d | nprime | n")
    M = N // Q
    d_Q, d_M = part_supported(d, Q), part_supported(d, M)
    if d_Q * d_M != d:
        return []  # d has prime factors outside N
    np_Q, np_M = part_supported(nprime, Q), part_supported(nprime, M)
    if np_Q * np_M != nprime:
        return []  # n' has prime factors outside N
    n_Q = part_supported(n, Q)
    qs = set_N_dn(Q, n_Q, d_Q, np_Q)
    ms = set_N_d(M, d_M)
    return sorted(q * m for q in qs for m in ms)


def t_less(k: int, Q: int, N: int, n: int, ctx: TraceContext) -> Fraction:
    """Correction sum over Hecke indices 1 < n' | n; recursion strictly
    decreases the Hecke index, so termination is immediate."""
    if Q < 1 or N % Q != 0 or math.gcd(Q, N // Q) != 1:
        raise DomainError(f"t_less: need Q || N, got Q={Q}, N={N}")
    M = N // Q
    total = Fraction(0)
    for nprime in divisors(n):
        if nprime == 1:
            continue
        np_M = part_supported(nprime, M)
        for d in divisors(nprime):
            if mobius(d) == 0:
                continue
            d_M = part_supported(d, M)
            if np_M != d_M * d_M:
                continue
            levels = set_N_QNn(Q, N, n, d, nprime)
            if not levels:
                continue
            w = Fraction(nprime ** (k // 2) * mobius(d), d)
            inner = Fraction(0)
            for Np in levels:
                Qp = math.gcd(Q, Np)
                inner += sigma0_coprime(M // (Np // Qp), n) * trace_new(
                    k, Np, Qp, n // nprime, ctx
                )
            total += w * inner
    return total


def trace_new(k: int, N: int, Q: int, n: int, ctx: TraceContext) -> Fraction:
    """Tr(T_n o W_Q | S_k(N)^new), exactly."""
    validate_query(k, N, Q, n)
    key = (k, N, Q, n)
    v = ctx.new.get(key)
    if v is not None:
        ctx.hits += 1
        return v
    ctx.misses += 1
    primeset = frozenset(p for p, _ in factorize(Q))
    total = Fraction(0)
    for Np in divisors(N):
        a = alpha_Qn(N // Np, primeset, n)
        if a == 0:
            continue
        Qp = math.gcd(Q, Np)
        term = ctx.trace_full(k, Np, Qp, n)
        if n > 1:
            term -= t_less(k, Qp, Np, n, ctx)
        total += a * term
    ctx.new[key] = total
    return total


def trace_new_AL(k: int, N: int, Q: int, ctx: TraceContext) -> Fraction:
    """Tr(W_Q | S_k(N)^new): the n = 1 case, with no correction sum."""
    return trace_new(k, N, Q, 1, ctx)


def trace_new_TpWN(k: int, N: int, p: int, ctx: TraceContext) -> Fraction:
    """Tr(T_p o W_N | S_k(N)^new) by the dedicated prime fast path."""
    if not is_prime(p):
        raise DomainError(f"trace_new_TpWN: p={p} is not prime")
    validate_query(k, N, N, p)
    total = Fraction(0)
    for Np in divisors(N):
        co = N // Np
        if co % p == 0:
            continue
        ok, r = is_square(co)
        if not ok:
            continue
        total += mobius(r) * ctx.trace_full(k, Np, Np, p)
    if N % p == 0:
        v = valuation(N, p)
        w = Fraction(0)
        if N % (p * p) != 0:
            w += p ** (k // 2 - 1) * trace_new_AL(k, N // p, N // p, ctx)
        s = Fraction(0)
        for i in range((v - 1) // 2 + 1):
            Nq = N // p ** (2 * i + 1)
            s += trace_new_AL(k, Nq, Nq, ctx)
        total += w - p ** (k // 2) * s
    return total


def dims_signed(k: int, N: int, ctx: TraceContext) -> tuple[int, int]:
    """Dimensions of the +1 / -1 Fricke eigenspaces of the newspace."""
    dim_new = trace_new(k, N, 1, 1, ctx)
    w = trace_new_AL(k, N, N, ctx)
    plus, minus = (dim_new + w) / 2, (dim_new - w) / 2
    try:
        plus_i, minus_i = as_int(plus), as_int(minus)
    except IntegrityError as exc:
        raise IntegrityError(f"signed dimensions not integral at (k={k}, N={N})") from exc
    if plus_i < 0 or minus_i < 0:
        raise IntegrityError(f"negative signed dimension at (k={k}, N={N})")
    return plus_i, minus_i


def trace_new_signed(k: int, N: int, p: int, ctx: TraceContext) -> tuple[Fraction, Fraction]:
    """(t_plus, t_minus): traces of T_p on the +1 / -1 Fricke eigenspaces."""
    tp = trace_new(k, N, 1, p, ctx)
    tw = trace_new_TpWN(k, N, p, ctx)
    return (tp + tw) / 2, (tp - tw) / 2


def sz_combination(k2: int, m: int, n: int, l: int, s_values) -> Fraction:
    """Moebius-weighted combination of externally supplied s-values over
    divisors m' of m with m/m' squarefree; reconstructs the full-space trace
    of T_l o W_n in weight 2*k2 - 2 from the s-value table."""
    if math.gcd(l, m) != 1:
        raise DomainError("sz_combination: need gcd(l, m) = 1")
    if m % n != 0 or math.gcd(n, m // n) != 1:
        raise DomainError("sz_combination: need n || m")
    total = Fraction(0)
    for mp in divisors(m):
        if mobius(m // mp) == 0:
            continue
        g = math.gcd(n, mp)
        mu = mobius(n // g)
        if mu == 0:
            continue
        try:
            total += mu * Fraction(s_values[(mp, g)])
        except KeyError as exc:
            raise DomainError(f"sz_combination: missing s-value for {(mp, g)}") from exc
    return total
