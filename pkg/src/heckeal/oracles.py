"""Independent brute-force oracles: dimension formulas, q-expansion products
and a reduced-form class number enumerator, plus the selftest harness.

Everything here is deliberately slow and simple, and shares no code with the
trace-formula paths it cross-checks.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import HurwitzTable
from .errors import DomainError


class QSeries:
    """Truncated integer power series in q, coefficients indexed from q^0."""

    def __init__(self, coefficients: list[int], precision: int):
        if len(coefficients) < precision + 1:
            coefficients = coefficients + [0] * (precision + 1 - len(coefficients))
        self.coefficients = coefficients[: precision + 1]
        self.precision = precision

    def __getitem__(self, n: int) -> int:
        if n > self.precision:
            raise DomainError(f"coefficient {n} beyond precision {self.precision}")
        return self.coefficients[n]

    def __mul__(self, other: "QSeries") -> "QSeries":
        P = min(self.precision, other.precision)
        out = [0] * (P + 1)
        for i, a in enumerate(self.coefficients[: P + 1]):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients[: P + 1 - i]):
                if b:
                    out[i + j] += a * b
        return QSeries(out, P)

    def pow(self, e: int) -> "QSeries":
        out = QSeries([1], self.precision)
        for _ in range(e):
            out = out * self
        return out

    def shift(self, s: int) -> "QSeries":
        return QSeries([0] * s + self.coefficients, self.precision)


def _eta_like(precision: int, stride: int) -> QSeries:
    """prod_{m >= 1} (1 - q^(stride*m)) to the given precision."""
    out = QSeries([1], precision)
    m = stride
    while m <= precision:
        out = out * QSeries([1] + [0] * (m - 1) + [-1], precision)
        m += stride
    return out


def delta_coeffs(max_n: int) -> QSeries:
    """q * prod (1 - q^m)^24; coefficient n is the n-th discriminant coefficient."""
    if max_n < 1:
        raise DomainError("delta_coeffs: need max_n >= 1")
    return _eta_like(max_n, 1).pow(24).shift(1)


def eta_product_11(max_n: int) -> QSeries:
    """q * prod (1 - q^m)^2 (1 - q^(11m))^2: the weight-2 level-11 newform."""
    if max_n < 1:
        raise DomainError("eta_product_11: need max_n >= 1")
    return (_eta_like(max_n, 1).pow(2) * _eta_like(max_n, 11).pow(2)).shift(1)


def _divisor_list(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _legendre_sym(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _eps2(N: int) -> int:
    if N % 4 == 0:
        return 0
    out = 1
    for p in range(3, N + 1, 2):
        if N % p == 0 and all(p % q for q in range(2, p)):
            out *= 1 + _legendre_sym(-1, p)
    return out


def _eps3(N: int) -> int:
    if N % 9 == 0:
        return 0
    out = 1
    for p in range(2, N + 1):
        if N % p == 0 and all(p % q for q in range(2, p)):
            if p == 3:
                continue
            out *= 1 + (1 if p % 3 == 1 else -1)
    return out


def _eps_inf(N: int) -> int:
    from math import gcd

    def phi(m):
        return sum(1 for i in range(1, m + 1) if gcd(i, m) == 1)

    return sum(phi(gcd(d, N // d)) for d in _divisor_list(N))


def dim_cusp(k: int, N: int) -> int:
    """dim S_k(Gamma_0(N)) from the genus / elliptic point / cusp counts."""
    if k < 2 or k % 2 != 0:
        raise DomainError(f"dim_cusp: need even k >= 2, got {k}")
    psi = N
    for p in range(2, N + 1):
        if N % p == 0 and all(p % q for q in range(2, p)):
            psi += psi // p
    c2 = k // 4 - Fraction(k - 1, 4)
    c3 = k // 3 - Fraction(k - 1, 3)
    d = (
        Fraction(k - 1, 12) * psi
        - Fraction(_eps_inf(N), 2)
        + c2 * _eps2(N)
        + c3 * _eps3(N)
    )
    if k == 2:
        d += 1
    if d.denominator != 1 or d < 0:
        raise DomainError(f"dimension formula produced {d} at (k={k}, N={N})")
    return int(d)


def dim_new_oracle(k: int, N: int) -> int:
    """Newspace dimension by inverting the divisor-lattice decomposition:
    the inverse of the divisor-count function has value -2 at p, 1 at p^2."""

    def beta(m: int) -> int:
        out = 1
        mm = m
        p = 2
        while p * p <= mm:
            if mm % p == 0:
                e = 0
                while mm % p == 0:
                    mm //= p
                    e += 1
                out *= -2 if e == 1 else (1 if e == 2 else 0)
            p += 1
        if mm > 1:
            out *= -2
        return out

    return sum(beta(N // Np) * dim_cusp(k, Np) for Np in _divisor_list(N))


def hurwitz_enumerate(n: int) -> Fraction:
    """H(n) by direct enumeration of reduced positive definite forms
    (-a < b <= a <= c, b >= 0 when a == c), with stabilizer weights."""
    if n < 0:
        return Fraction(0)
    if n == 0:
        return Fraction(-1, 12)
    total = Fraction(0)
    a = 1
    while 3 * a * a <= n:
        for b in range(-a + 1, a + 1):
            m4 = n + b * b
            if m4 % (4 * a) != 0:
                continue
            c = m4 // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if a == c and b == 0:
                total += Fraction(1, 2)
            elif a == b == c:
                total += Fraction(1, 3)
            else:
                total += 1
        a += 1
    return total


@dataclass
class SelftestCase:
    suite: str
    case: str
    status: str  # "pass" | "fail"
    counterexample: str | None = None


@dataclass
class SelftestReport:
    level: str
    cases: list[SelftestCase] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.cases)

    def to_json(self) -> str:
        return json.dumps(
            {
                "level": self.level,
                "ok": self.ok,
                "elapsed": round(self.elapsed, 3),
                "cases": [
                    {
                        "suite": c.suite,
                        "case": c.case,
                        "status": c.status,
                        **(
                            {"counterexample": c.counterexample}
                            if c.counterexample
                            else {}
                        ),
                    }
                    for c in self.cases
                ],
            },
            indent=2,
        )

    def to_text(self) -> str:
        lines = [
            f"[{c.status.upper():4}] {c.suite}: {c.case}"
            + (f"  ({c.counterexample})" if c.counterexample else "")
            for c in self.cases
        ]
        verdict = "OK" if self.ok else "FAILED"
        lines.append(f"selftest {self.level}: {verdict} in {self.elapsed:.1f}s")
        return "\n".join(lines)


def run_selftest(level: str = "quick", table: HurwitzTable | None = None) -> SelftestReport:
    """Run the cross-module consistency suites at reduced (quick) or full scale."""
    from math import gcd

    from .arith import hurwitz, mobius, sz_alpha
    from .localcounts import C_closed, C_direct
    from .newspace import TraceContext, trace_new, trace_new_TpWN
    from .traces import trace_full, trace_level1

    if level not in ("quick", "full"):
        raise DomainError(f"selftest level must be quick or full, got {level}")
    full = level == "full"
    start = time.monotonic()
    report = SelftestReport(level=level)
    table = table if table is not None else HurwitzTable()
    table.precompute(4 * (300 if full else 60) * 8)
    ctx = TraceContext(table)

    def record(suite, case, ok, counterexample=None):
        report.cases.append(
            SelftestCase(suite, case, "pass" if ok else "fail",
                         None if ok else counterexample)
        )

    # hand-checkable example: weight 4, Hecke index 5, level 1
    ell = sum(
        Fraction((t * t - 5) * table.twelve_h(20 - t * t), 12) for t in range(-4, 5)
    )
    record("worked-example", "k=4 n=5 elliptic sum", ell == -2, f"got {ell}")
    record(
        "worked-example",
        "k=4 n=5 total trace",
        trace_full(4, 1, 1, 5, table) == 0,
        f"got {trace_full(4, 1, 1, 5, table)}",
    )

    # Hurwitz pins and enumeration agreement
    pins = {0: Fraction(-1, 12), 3: Fraction(1, 3), 4: Fraction(1, 2),
            11: 1, 16: Fraction(3, 2), 19: 1, 20: 2}
    bad = [(n, hurwitz(n, table)) for n, v in pins.items() if hurwitz(n, table) != v]
    record("hurwitz", "pinned values", not bad, f"{bad}")
    top = 5000 if full else 500
    mism = next(
        (n for n in range(top + 1) if hurwitz_enumerate(n) != hurwitz(n, table)), None
    )
    record("hurwitz", f"enum agreement 0..{top}", mism is None, f"n={mism}")

    # zero spaces at level 1
    nmax = 200 if full else 40
    bad = next(
        (
            (k, n)
            for k in (4, 6, 8, 10, 14)
            for n in range(1, nmax + 1)
            if trace_level1(k, n, table) != 0
        ),
        None,
    )
    record("level1", f"zero spaces n<={nmax}", bad is None, f"{bad}")

    # dimension agreement
    nmax = 300 if full else 60
    bad = None
    for k in (2, 4, 6, 8, 10, 12):
        for N in range(1, nmax + 1):
            if ctx.trace_full(k, N, 1, 1) != dim_cusp(k, N):
                bad = ("full", k, N)
                break
            if trace_new(k, N, 1, 1, ctx) != dim_new_oracle(k, N):
                bad = ("new", k, N)
                break
        if bad:
            break
    record("dimensions", f"trace = dimension, N<={nmax}", bad is None, f"{bad}")

    # closed form vs definitional local coefficients
    rng = 40 if full else 12
    bad = None
    for p in (2, 3, 5):
        a = 1
        while p**a <= (625 if full else 125):
            N = p**a
            for i in range(a + 1):
                u = p**i
                for t in range(-rng, rng + 1):
                    for n in range(-rng, rng + 1):
                        if (t * t - 4 * n) % (u * u) != 0:
                            continue
                        if C_closed(N, u, t, n) != C_direct(N, u, t, n):
                            bad = (N, u, t, n)
                            break
            a += 1
    record("local-counts", "closed = direct", bad is None, f"{bad}")

    # inversion-weight identities
    top = 10_000 if full else 1000
    ok1 = ok2 = True
    bad = None
    from math import isqrt

    for n in range(1, top + 1):
        ds = [d for d in range(1, n + 1) if n % d == 0]
        lhs = sum(sz_alpha(d) for d in ds if isqrt(n // d) ** 2 == n // d)
        if lhs != mobius(n):
            ok1, bad = False, n
            break
        lhs2 = sum(sz_alpha(d) * len([e for e in ds if (n // d) % e == 0]) for d in ds)
        sqfree = mobius(n) != 0
        if lhs2 != (1 if sqfree else 0):
            ok2, bad = False, n
            break
    record("sz-alpha", f"square/divisor identities n<={top}", ok1 and ok2, f"n={bad}")

    # fast path vs general newspace path
    nmax = 200 if full else 40
    bad = next(
        (
            (k, N, p)
            for k in ((2, 4, 6) if full else (2,))
            for N in range(1, nmax + 1)
            for p in (2, 3, 5, 7, 11)
            if trace_new_TpWN(k, N, p, ctx) != trace_new(k, N, N, p, ctx)
        ),
        None,
    )
    record("newspace", f"prime fast path N<={nmax}", bad is None, f"{bad}")

    report.elapsed = time.monotonic() - start
    return report
