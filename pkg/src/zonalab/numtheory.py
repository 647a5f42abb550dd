"""Arithmetic functions, lattice counting, quadratic exponential sums and the
rational-interval family used by the divergence construction.

Factorization is deterministic: a smallest-prime-factor sieve (grown on
demand, trial division beyond its range).  The bulk *_sieve helpers return
whole tables at once for the large-n asymptotic checks.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DomainError, PreconditionError

__all__ = [
    "mobius",
    "totient",
    "divisor_count",
    "divisors",
    "mobius_identity_check",
    "r2",
    "r2_table",
    "mobius_sieve",
    "totient_sieve",
    "divisor_count_sieve",
    "zeta_odd_mobius",
    "zeta_odd_euler",
    "odd_totient_sum",
    "gauss_sum_direct",
    "gauss_sum_phase_ratio",
    "CongruenceSet",
    "RationalInterval",
    "build_EN",
    "strichartz_table",
    "strichartz_count",
    "strichartz_max_count",
]

_SPF_BASE = 1 << 20
_spf: np.ndarray | None = None


def _build_spf(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int32)
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == 0:
            block = spf[i * i :: i]
            block[block == 0] = i
    untouched = spf == 0
    untouched[:2] = False
    spf[untouched] = np.nonzero(untouched)[0]
    return spf


def _ensure_spf(limit: int) -> np.ndarray:
    global _spf
    if _spf is None or _spf.shape[0] <= limit:
        size = _SPF_BASE
        while size < limit:
            size *= 2
        _spf = _build_spf(size)
    return _spf


def _primes_upto(limit: int) -> np.ndarray:
    spf = _ensure_spf(limit)
    idx = np.arange(spf.shape[0], dtype=np.int64)
    mask = (spf == idx) & (idx >= 2) & (idx <= limit)
    return idx[mask]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as {prime: exponent}."""
    if n < 1:
        raise DomainError("factorization requires n >= 1")
    out: dict[int, int] = {}
    spf = _ensure_spf(min(n, 10**7))
    if n < spf.shape[0]:
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        return out
    for p in _primes_upto(math.isqrt(n) + 1):
        p = int(p)
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n: int) -> int:
    """1 for n = 1, 0 if n has a squared factor, else (-1)^(#prime factors)."""
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def totient(n: int) -> int:
    out = n
    for p in factorize(n):
        out -= out // p
    return out


def divisor_count(n: int) -> int:
    out = 1
    for e in factorize(n).values():
        out *= e + 1
    return out


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def mobius_identity_check(n: int) -> int:
    """Divisor sum of the Mobius function: 1 for n = 1 and 0 otherwise."""
    return sum(mobius(m) for m in divisors(n))


def r2(n: int) -> int:
    """Number of integer pairs (n1, n2) with n1^2 + n2^2 = n, by enumeration."""
    if n < 1:
        raise DomainError("r2 requires n >= 1")
    count = 0
    for n1 in range(-math.isqrt(n), math.isqrt(n) + 1):
        rem = n - n1 * n1
        s = math.isqrt(rem)
        if s * s == rem:
            count += 1 if s == 0 else 2
    return count


def r2_table(limit: int) -> np.ndarray:
    """r2(n) for all 0 <= n <= limit at once (two-square histogram)."""
    m = math.isqrt(limit)
    vals = np.arange(-m, m + 1, dtype=np.int64)
    sq = vals * vals
    grid = (sq[:, None] + sq[None, :]).ravel()
    return np.bincount(grid[grid <= limit], minlength=limit + 1)


def mobius_sieve(limit: int) -> np.ndarray:
    """Mobius values mu(0..limit) (mu(0) stored as 0)."""
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in _primes_upto(limit):
        p = int(p)
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def totient_sieve(limit: int) -> np.ndarray:
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in _primes_upto(limit):
        p = int(p)
        phi[p::p] -= phi[p::p] // p
    return phi


def divisor_count_sieve(limit: int) -> np.ndarray:
    d = np.zeros(limit + 1, dtype=np.int32)
    for i in range(1, limit + 1):
        d[i::i] += 1
    return d


def zeta_odd_mobius(cutoff: int) -> float:
    """Partial sum over odd m <= cutoff of mu(m)/m^2."""
    if cutoff < 1:
        raise DomainError("cutoff must be positive")
    mu = mobius_sieve(cutoff)
    m = np.arange(1, cutoff + 1, 2, dtype=np.float64)
    return float((mu[1 : cutoff + 1 : 2] / (m * m)).sum())


def zeta_odd_euler(prime_cutoff: int) -> float:
    """Euler-product route to the same constant: prod over odd p of (1 - p^-2)."""
    primes = _primes_upto(prime_cutoff)
    odd = primes[primes > 2].astype(np.float64)
    return float(np.prod(1.0 - odd**-2.0))


def odd_totient_sum(n: int) -> int:
    """Sum of the totient over odd arguments up to n, via a sieve."""
    if n < 1:
        raise DomainError("n must be positive")
    phi = totient_sieve(n)
    return int(phi[1::2].sum())


def gauss_sum_direct(q: int, ell: int, p: int) -> complex:
    """The q-term quadratic exponential sum sum_n exp(-2*pi*i*(n^2 + n*(ell - p))/q).

    q must be odd; the linear shift ell - p enters only through its residue
    class mod q, so the phases are reduced exactly in integer arithmetic.
    """
    if q < 1 or q % 2 == 0:
        raise DomainError("the quadratic sum is evaluated for odd q only")
    n = np.arange(q, dtype=np.int64)
    ph = (n * n + n * ((ell - p) % q)) % q
    return complex(np.exp(-2j * math.pi / q * ph).sum())


def gauss_sum_phase_ratio(q: int, ell: int, p1: int, p2: int) -> complex:
    """Predicted unimodular ratio of two quadratic sums with shifts p1, p2.

    Completing the square gives ratio = exp(2*pi*i*r*((ell-p1)^2 - (ell-p2)^2)/q)
    with 4*r = 1 (mod q).
    """
    if q < 1 or q % 2 == 0:
        raise DomainError("the quadratic sum is evaluated for odd q only")
    r = pow(4, -1, q)
    e = (r * ((ell - p1) ** 2 - (ell - p2) ** 2)) % q
    return complex(np.exp(2j * math.pi * e / q))


class RationalInterval(NamedTuple):
    p: int
    q: int
    lo: float
    hi: float


@dataclass(frozen=True)
class CongruenceSet:
    """Disjoint short intervals to the right of rationals 2*pi*p/q.

    Stored pairs have q odd in [sqrt(N), 2*sqrt(N)], p even with p/q in
    lowest terms, and 2*eps < 2*pi*p/q < pi - 2*eps; each interval is
    (2*pi*p/q + pi/(16N), 2*pi*p/q + pi/(8N)), of length exactly pi/(16N).
    """

    N: int
    epsilon: float
    intervals: tuple[RationalInterval, ...]

    def measure(self) -> float:
        return len(self.intervals) * math.pi / (16 * self.N)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["p", "q", "lo", "hi"])
            for iv in self.intervals:
                w.writerow([iv.p, iv.q, repr(iv.lo), repr(iv.hi)])


def build_EN(N: int, epsilon: float = 0.1) -> CongruenceSet:
    """Enumerate the admissible (p, q) pairs and their intervals.

    p is enumerated as 2*p' with gcd(p', q) = 1, then the open angular window
    (2*eps, pi - 2*eps) is applied to 2*pi*p/q.  Duplicate rationals are
    deduplicated (a no-op for coprime pairs, kept for safety).
    """
    if N < 1:
        raise DomainError("N must be positive")
    if not 0.0 < epsilon < math.pi / 20:
        raise PreconditionError("epsilon must lie in (0, pi/20)")
    seen: dict[Fraction, RationalInterval] = {}
    q_lo = math.isqrt(N - 1) + 1  # smallest integer >= sqrt(N)
    q_hi = math.isqrt(4 * N)  # largest integer <= 2*sqrt(N)
    off_lo = math.pi / (16 * N)
    off_hi = math.pi / (8 * N)
    for q in range(q_lo | 1, q_hi + 1, 2):
        for pp in range(1, q // 4 + 1):
            angle = 4.0 * math.pi * pp / q
            if not (2.0 * epsilon < angle < math.pi - 2.0 * epsilon):
                continue
            if math.gcd(pp, q) != 1:
                continue
            p = 2 * pp
            key = Fraction(p, q)
            if key in seen:
                continue
            base = 2.0 * math.pi * p / q
            seen[key] = RationalInterval(p=p, q=q, lo=base + off_lo, hi=base + off_hi)
    intervals = tuple(sorted(seen.values(), key=lambda iv: (iv.lo, iv.q, iv.p)))
    return CongruenceSet(N=N, epsilon=epsilon, intervals=intervals)


_COUNT_CAP = 128  # inclusive degree range [0, N] of the memoized triple table


def _strichartz_keys(N: int, s: int, ell: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distinct (u, v) keys and counts of triples in [0, N]^3 with
    n1+n2+n3 = u and e(n1)+e(n2)+e(n3) = v, where e(n) = s*n*(s*n + ell).

    Since u and v both add componentwise, the packed key u*span + v is a sum
    of three per-index keys, which keeps only one N^3 array alive.
    """
    n = np.arange(N + 1, dtype=np.int64)
    e = s * n * (s * n + ell)
    span = 3 * int(e[-1]) + 1
    k = n * span + e
    keys, counts = np.unique(
        (k[:, None, None] + k[None, :, None] + k[None, None, :]).ravel(), return_counts=True
    )
    return keys // span, keys % span, counts


@lru_cache(maxsize=32)
def strichartz_table(N: int, s: int, ell: int) -> dict[tuple[int, int], int]:
    """Memoized full table {(u, v): count} for triples in [0, N]^3."""
    if N < 0:
        raise DomainError("N must be non-negative")
    if s not in (1, 2):
        raise DomainError("the metric scaling s must be 1 or 2")
    if ell < 0:
        raise DomainError("ell must be non-negative")
    if N > _COUNT_CAP:
        raise PreconditionError(f"triple table is limited to N <= {_COUNT_CAP} at desk scale")
    u, v, counts = _strichartz_keys(N, s, ell)
    return {(int(a), int(b)): int(c) for a, b, c in zip(u, v, counts)}


def strichartz_count(N: int, s: int, ell: int, u: int, v: int) -> int:
    """Count of triples (n1, n2, n3) in [0, N]^3 with the given (u, v)."""
    return strichartz_table(N, s, ell).get((u, v), 0)


def strichartz_max_count(N: int, s: int, ell: int) -> int:
    """Maximum of the triple counts over all (u, v), without keeping the table."""
    return int(_strichartz_keys(N, s, ell)[2].max())


def counting_table_to_csv(table: dict[tuple[int, int], int], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["u", "v", "count"])
        for (u, v), c in sorted(table.items()):
            w.writerow([u, v, c])
