"""Exact traces of T_n composed with an Atkin-Lehner involution W_Q on the
full cusp space S_k(N), plus the classical level-1 and Fricke special cases.

Conventions for the elliptic sum: t runs over all multiples of Q with
t^2 <= 4Qn (both signs and the endpoints included); a term whose class
number argument (4Qn - t^2)/(u*u')^2 is not an integer contributes nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    HurwitzTable,
    divisors,
    mobius,
    pk,
    sigma1_coprime,
)
from .errors import DomainError
from .localcounts import C_closed, phi_NQ


@dataclass(frozen=True)
class TraceQuery:
    """A single trace request: weight k, level N, involution divisor Q, Hecke index n."""

    k: int
    N: int
    Q: int
    n: int

    def __post_init__(self):
        validate_query(self.k, self.N, self.Q, self.n)


def validate_query(k: int, N: int, Q: int, n: int) -> None:
    if k < 2 or k % 2 != 0:
        raise DomainError(f"weight must be even and >= 2, got {k}")
    if N < 1 or n < 1:
        raise DomainError("level and Hecke index must be positive")
    if Q < 1 or N % Q != 0 or math.gcd(Q, N // Q) != 1:
        raise DomainError(f"Q={Q} must exactly divide N={N}")


def _elliptic_term(k: int, N: int, Q: int, n: int, table: HurwitzTable) -> Fraction:
    Qn = Q * n
    M = N // Q
    qpow = Q ** (k // 2 - 1)
    mus = [(u, mobius(u)) for u in divisors(Q)]
    mus = [(u, mu) for u, mu in mus if mu != 0]
    udivs = divisors(M)
    total = Fraction(0)
    tmax = math.isqrt(4 * Qn)
    for t in range(-(tmax - tmax % Q), tmax + 1, Q):
        m = 4 * Qn - t * t
        inner = Fraction(0)
        for u, mu in mus:
            for up in udivs:
                sq = (u * up) ** 2
                if m % sq != 0:
                    continue
                h12 = table.twelve_h(m // sq)
                if h12 == 0:
                    continue
                c = C_closed(M, up, t, Qn)
                if c:
                    inner += Fraction(mu * h12 * c, 12)
        if inner:
            total += Fraction(pk(k, t, Qn), qpow) * inner
    return -total / 2


def _hyperbolic_term(k: int, N: int, Q: int, n: int) -> Fraction:
    Qn = Q * n
    qpow = Q ** (k // 2 - 1)
    total = Fraction(0)
    for a in divisors(Qn):
        d = Qn // a
        if (a + d) % Q != 0:
            continue
        total += Fraction(min(a, d) ** (k - 1), qpow) * phi_NQ(N, Q, a, d)
    return -total / 2


def trace_full(k: int, N: int, Q: int, n: int, table: HurwitzTable) -> Fraction:
    """Tr(T_n o W_Q | S_k(N)), exactly."""
    validate_query(k, N, Q, n)
    out = _elliptic_term(k, N, Q, n, table) + _hyperbolic_term(k, N, Q, n)
    if k == 2:
        out += sigma1_coprime(n, N)
    return out


def trace_level1(k: int, n: int, table: HurwitzTable) -> Fraction:
    """Tr(T_n | S_k) for the full modular group, k even >= 4."""
    if k < 4 or k % 2 != 0:
        raise DomainError(f"trace_level1: need even k >= 4, got {k}")
    if n < 1:
        raise DomainError("trace_level1: need n >= 1")
    ell = Fraction(0)
    tmax = math.isqrt(4 * n)
    for t in range(-tmax, tmax + 1):
        h12 = table.twelve_h(4 * n - t * t)
        if h12:
            ell += Fraction(pk(k, t, n) * h12, 12)
    hyp = sum(min(d, n // d) ** (k - 1) for d in divisors(n))
    return -(ell + hyp) / 2


def trace_AL(k: int, N: int, table: HurwitzTable) -> Fraction:
    """Tr(W_N | S_k(N)): the Fricke involution trace."""
    return trace_full(k, N, N, 1, table)


def trace_AL_simplified(k: int, N: int, table: HurwitzTable) -> Fraction:
    """Short form of the Fricke trace, valid for N > 4."""
    if N <= 4:
        raise DomainError(f"trace_AL_simplified: need N > 4, got {N}")
    if k < 2 or k % 2 != 0:
        raise DomainError(f"weight must be even and >= 2, got {k}")
    total = Fraction(0)
    for u in divisors(N):
        mu = mobius(u)
        if mu == 0 or (4 * N) % (u * u) != 0:
            continue
        total += mu * Fraction(table.twelve_h(4 * N // (u * u)), 12)
    sign = -1 if (k // 2) % 2 else 1
    out = Fraction(sign, 2) * total
    if k == 2:
        out += 1
    return out
