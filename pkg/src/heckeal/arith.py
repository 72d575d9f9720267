"""Elementary exact arithmetic: factorization, multiplicative functions,
Hurwitz class numbers and the weight polynomials used by the trace formulas.

Everything here works with unbounded Python integers and fractions.Fraction;
no value ever passes through floating point.  Factorization is trial division
with a 2-3-5 wheel, adequate for the inputs this package sees in practice
(below ~10^7).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, IntegrityError

# increments of the 2-3-5 wheel starting from 7
_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)


@lru_cache(maxsize=200_000)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((p, e), ...) with p strictly increasing."""
    if n < 1:
        raise DomainError(f"factorize: need n >= 1, got {n}")
    out = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p, i = 7, 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += _WHEEL[i]
        i = (i + 1) % 8
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


def divisors(n: int) -> list[int]:
    """All positive divisors of n in ascending order."""
    if n < 1:
        raise DomainError(f"divisors: need n >= 1, got {n}")
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**i for d in ds for i in range(e + 1)]
    ds.sort()
    return ds


def valuation(n: int, p: int) -> int:
    """Largest v with p^v | n (n != 0)."""
    if n == 0:
        raise DomainError("valuation of 0 is infinite")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def part_supported(m: int, M: int) -> int:
    """The largest divisor of m composed only of primes dividing M (= gcd(m, M^inf))."""
    if m < 1 or M < 1:
        raise DomainError("part_supported: positive arguments required")
    out = 1
    g = math.gcd(m, M)
    while g > 1:
        out *= g
        m //= g
        g = math.gcd(m, g)
    return out


def mobius(n: int) -> int:
    if n < 1:
        raise DomainError(f"mobius: need n >= 1, got {n}")
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def euler_phi(n: int) -> int:
    if n < 1:
        raise DomainError(f"euler_phi: need n >= 1, got {n}")
    out = 1
    for p, e in factorize(n):
        out *= p ** (e - 1) * (p - 1)
    return out


def psi_index(N: int) -> int:
    """Index of the level-N congruence subgroup in the modular group: N * prod(1 + 1/p)."""
    if N < 1:
        raise DomainError(f"psi_index: need N >= 1, got {N}")
    out = 1
    for p, e in factorize(N):
        out *= p ** (e - 1) * (p + 1)
    return out


def sigma0_coprime(m: int, n: int) -> int:
    """Number of divisors of m coprime to n."""
    if m < 1 or n < 1:
        raise DomainError("sigma0_coprime: positive arguments required")
    out = 1
    for p, e in factorize(m):
        if n % p != 0:
            out *= e + 1
    return out


def sigma1_coprime(n: int, N: int) -> int:
    """Sum of n/d over divisors d of n coprime to N."""
    if n < 1 or N < 1:
        raise DomainError("sigma1_coprime: positive arguments required")
    return sum(n // d for d in divisors(n) if math.gcd(d, N) == 1)


def coprime_split(d: int, Q: int) -> tuple[int, int]:
    """Split d as (gcd(d, Q), d / gcd(d, Q))."""
    if d < 1 or Q < 1:
        raise DomainError("coprime_split: positive arguments required")
    g = math.gcd(d, Q)
    return g, d // g


def is_square(n: int) -> tuple[bool, int | None]:
    """Whether n is a perfect square >= 0; returns (flag, root or None)."""
    if n < 0:
        return False, None
    r = math.isqrt(n)
    return (True, r) if r * r == n else (False, None)


def alpha_Qn(m: int, primeset: frozenset[int] | set[int], n: int) -> int:
    """The multiplicative inversion weights used to pass to the new subspace.

    On a prime power p^e the value is determined by whether p divides n and
    whether p belongs to the distinguished prime set:
      p not in set, p ∤ n:  e=1 -> -2,  e=2 -> 1
      p in set,     p ∤ n:  e=2 -> -1
      p not in set, p | n:  e=1 -> -1
      anything else -> 0.
    """
    if m < 1 or n < 1:
        raise DomainError("alpha_Qn: positive arguments required")
    out = 1
    for p, e in factorize(m):
        in_set = p in primeset
        div_n = n % p == 0
        if not in_set and not div_n:
            v = -2 if e == 1 else (1 if e == 2 else 0)
        elif in_set and not div_n:
            v = -1 if e == 2 else 0
        elif not in_set and div_n:
            v = -1 if e == 1 else 0
        else:
            v = 0
        if v == 0:
            return 0
        out *= v
    return out


def sz_alpha(m: int) -> int:
    """Multiplicative function with value -1 at p and p^2, 1 at p^3, 0 beyond."""
    if m < 1:
        raise DomainError(f"sz_alpha: need m >= 1, got {m}")
    out = 1
    for _, e in factorize(m):
        if e >= 4:
            return 0
        out *= 1 if e == 3 else -1
    return out


def pk(k: int, t: int, N: int) -> int:
    """Coefficient of x^(k-2) in 1/(1 - t*x + N*x^2), for even k >= 2.

    Computed by the linear recurrence c_m = t*c_{m-1} - N*c_{m-2}.
    """
    if k < 2 or k % 2 != 0:
        raise DomainError(f"pk: need even k >= 2, got {k}")
    if k == 2:
        return 1
    prev, cur = 1, t
    for _ in range(k - 3):
        prev, cur = cur, t * cur - N * prev
    return cur


def _hurwitz12_single(n: int) -> int:
    """12*H(n) for a single n >= 0, by reduced binary quadratic form enumeration.

    Counts forms a*x^2 + b*xy + c*y^2 with 4ac - b^2 = n, 0 <= b <= a <= c;
    interior forms with 0 < b < a < c represent two classes (+-b).
    """
    if n == 0:
        return -1
    if n % 4 in (1, 2):
        return 0
    total = 0
    b = n % 2
    while 3 * b * b <= n:
        m4 = n + b * b  # = 4ac
        m = m4 // 4
        for a in divisors(m):
            if a * a > m:
                break
            if a < b or a < 1:
                continue
            c = m // a
            if b == 0 and a == c:
                total += 6
            elif a == b == c:
                total += 4
            elif b == 0 or b == a or a == c:
                total += 12
            else:
                total += 24
        b += 2
    return total


def _hurwitz12_bulk(n_max: int) -> np.ndarray:
    """Vectorized one-pass fill of 12*H(n) for 0 <= n <= n_max."""
    tbl = np.zeros(n_max + 1, dtype=np.int64)
    tbl[0] = -1
    a = 1
    while 4 * a * a - a * a <= n_max:  # minimal n for this a is at b=a, c=a
        for b in range(0, a + 1):
            n0 = 4 * a * a - b * b  # c = a
            if n0 > n_max:
                continue
            ns = np.arange(n0, n_max + 1, 4 * a)  # c = a, a+1, ...
            if len(ns) == 0:
                continue
            if b == 0:
                w = np.full(len(ns), 12, dtype=np.int64)
                w[0] = 6  # c == a
            elif b == a:
                w = np.full(len(ns), 12, dtype=np.int64)
                w[0] = 4  # a == b == c
            else:
                w = np.full(len(ns), 24, dtype=np.int64)
                w[0] = 12  # c == a
            tbl[ns] += w
        a += 1
    return tbl


class HurwitzTable:
    """Memoized table of 12*H(n), with an explicit bulk precompute mode.

    Values for n <= the high-water mark live in a dense int64 array filled by
    one sieve pass; anything beyond is enumerated on demand and cached.
    Precompute before handing the table to parallel workers; reads are safe
    to share.
    """

    def __init__(self, n_max: int = 0):
        self._dense = _hurwitz12_bulk(n_max) if n_max > 0 else np.array([-1], dtype=np.int64)
        self._extra: dict[int, int] = {}

    @property
    def high_water(self) -> int:
        return len(self._dense) - 1

    def precompute(self, n_max: int) -> None:
        if n_max > self.high_water:
            self._dense = _hurwitz12_bulk(n_max)

    def twelve_h(self, n: int) -> int:
        """12*H(n) as an exact integer."""
        if n < 0 or n % 4 in (1, 2):
            return 0
        if n < len(self._dense):
            return int(self._dense[n])
        v = self._extra.get(n)
        if v is None:
            v = _hurwitz12_single(n)
            self._extra[n] = v
        return v


def hurwitz(n: int, table: HurwitzTable) -> Fraction:
    """The Hurwitz class number H(n): weighted count of positive definite
    binary quadratic forms of discriminant -n, with H(0) = -1/12 and
    H(n) = 0 for n < 0 or n congruent to 1, 2 mod 4."""
    return Fraction(table.twelve_h(n), 12)


def as_int(x: Fraction | int) -> int:
    """Assert a rational is integral and return it as int."""
    if isinstance(x, int):
        return x
    if x.denominator != 1:
        raise IntegrityError(f"expected an integer, got {x}")
    return x.numerator
