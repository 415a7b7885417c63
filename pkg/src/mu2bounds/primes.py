"""Segmented prime sieving, squarefree flags, and small multiplicative helpers.

Windows of 2^22 flags keep the working set inside L2 cache; squarefree flags
mark multiples of p^2 for base primes p <= sqrt(hi).  Windows are independent,
so an optional thread pool may produce them in parallel; all consumers in this
package merge window results in ascending order, which keeps every downstream
interval reduction deterministic regardless of thread count.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import LimitExceeded
from .interval import Interval

SEGMENT_FLAGS = 1 << 22

# Desk-scale cap; billion-prime precision runs are out of scope here.
MAX_SIEVE_LIMIT = 2 * 10**8

_TRIAL_DIVISION_LIMIT = 10**12


@dataclass
class SieveWindow:
    """Flags for the half-open integer window [lo, hi)."""

    lo: int
    hi: int
    prime_flags: np.ndarray
    squarefree_flags: np.ndarray

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self.prime_flags).astype(np.int64) + self.lo


_base_lock = threading.Lock()
_base_cache: dict[int, np.ndarray] = {}


def _base_primes(limit: int) -> np.ndarray:
    """Primes <= limit by a plain sieve; cached for reuse as base primes."""
    with _base_lock:
        best = max((k for k in _base_cache if k >= limit), default=None)
        if best is not None:
            arr = _base_cache[best]
            return arr[arr <= limit]
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    arr = np.flatnonzero(mask).astype(np.int64)
    with _base_lock:
        _base_cache[limit] = arr
    return arr


def sieve_window(lo: int, hi: int) -> SieveWindow:
    """Sieve primality and squarefree flags for [lo, hi)."""
    if hi <= lo:
        raise LimitExceeded(f"empty window [{lo}, {hi})")
    if hi > MAX_SIEVE_LIMIT:
        raise LimitExceeded(f"hi={hi} exceeds configured limit {MAX_SIEVE_LIMIT}")
    if lo < 0:
        raise LimitExceeded("window must start at a natural number")
    n = hi - lo
    prime = np.ones(n, dtype=bool)
    square = np.ones(n, dtype=bool)
    for v in (0, 1):
        if lo <= v < hi:
            prime[v - lo] = False
    base = _base_primes(max(2, int((hi - 1) ** 0.5) + 1))
    for p in base:
        p = int(p)
        # p*k for k < p has a smaller prime factor, so start marking at p^2
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start < hi:
            prime[start - lo :: p] = False
        p2 = p * p
        start2 = ((lo + p2 - 1) // p2) * p2
        if start2 < hi:
            square[start2 - lo :: p2] = False
    return SieveWindow(lo=lo, hi=hi, prime_flags=prime, squarefree_flags=square)


def iter_windows(
    lo: int, hi: int, segment: int = SEGMENT_FLAGS, threads: int = 1
) -> Iterator[SieveWindow]:
    """Yield sieved windows covering [lo, hi) in ascending order."""
    bounds = []
    start = lo
    while start < hi:
        end = min(start + segment, hi)
        bounds.append((start, end))
        start = end
    if threads <= 1 or len(bounds) <= 1:
        for a, b in bounds:
            yield sieve_window(a, b)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(sieve_window, a, b) for a, b in bounds]
        for fut in futures:  # submission order == ascending order
            yield fut.result()


_primes_lock = threading.Lock()
_primes_cache: dict[str, np.ndarray] = {}


def primes_up_to(limit: int, threads: int = 1) -> np.ndarray:
    """All primes <= limit as an int64 array; cached at the largest limit seen."""
    if limit > MAX_SIEVE_LIMIT:
        raise LimitExceeded(f"limit={limit} exceeds {MAX_SIEVE_LIMIT}")
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    with _primes_lock:
        cached = _primes_cache.get("primes")
        if cached is not None and _primes_cache["limit"] >= limit:
            cut = int(np.searchsorted(cached, limit, side="right"))
            return cached[:cut]
    parts = [w.primes() for w in iter_windows(2, limit + 1, threads=threads)]
    arr = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    with _primes_lock:
        prev = _primes_cache.get("limit", -1)
        if limit > prev:
            _primes_cache["primes"] = arr
            _primes_cache["limit"] = limit
    return arr


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization; inputs are small moduli by contract."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n > _TRIAL_DIVISION_LIMIT:
        raise LimitExceeded(f"n={n} above the trial-division limit")
    out: list[tuple[int, int]] = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def is_squarefree(n: int) -> bool:
    return mobius(n) != 0


def liouville(n: int) -> int:
    """(-1)^Omega(n), Omega counted with multiplicity."""
    big_omega = sum(e for _, e in factorize(n))
    return -1 if big_omega % 2 else 1


def euler_phi(q: int) -> int:
    out = q
    for p, _ in factorize(q):
        out -= out // p
    return out


def kappa(q: int) -> Fraction:
    """kappa_1(q) = q * prod_{p|q} (1 + 1/p); integer-valued, kept exact."""
    out = Fraction(q)
    for p, _ in factorize(q):
        out *= Fraction(p + 1, p)
    return out


def phi_s(q: int, s) -> Interval:
    """q^s * prod_{p|q} (1 - p^{-s}) as a certified interval."""
    return _generalized_totient(q, s, sign=-1)

def kappa_s(q: int, s) -> Interval:
    """q^s * prod_{p|q} (1 + p^{-s}) as a certified interval."""
    return _generalized_totient(q, s, sign=+1)


def _generalized_totient(q: int, s, sign: int) -> Interval:
    if q < 1:
        raise ValueError("q must be a positive integer")
    s = Interval.of(s)
    if q == 1:
        return Interval(1.0, 1.0)
    acc = Interval.of(q).pow_interval(s)
    one = Interval(1.0, 1.0)
    for p, _ in factorize(q):
        pws = Interval.of(p).pow_interval(s)
        if sign < 0:
            acc = acc * (one - one / pws)
        else:
            acc = acc * (one + one / pws)
    return acc


# ----------------------------------------------------------------------
# dense tables used by the brute-force oracle

_table_lock = threading.Lock()
_table_cache: dict[str, tuple[int, np.ndarray]] = {}


def squarefree_table(limit: int) -> np.ndarray:
    """Boolean array t with t[n] = mu^2(n) for 0 <= n <= limit (t[0] False)."""
    with _table_lock:
        got = _table_cache.get("squarefree")
        if got is not None and got[0] >= limit:
            return got[1][: limit + 1]
    flags = np.ones(limit + 1, dtype=bool)
    flags[0] = False
    for p in _base_primes(max(2, int(limit**0.5) + 1)):
        p2 = int(p) * int(p)
        if p2 <= limit:
            flags[p2::p2] = False
    with _table_lock:
        _table_cache["squarefree"] = (limit, flags)
    return flags


def phi_table(limit: int) -> np.ndarray:
    """Exact Euler phi values 0..limit via an integer multiplicative sieve."""
    with _table_lock:
        got = _table_cache.get("phi")
        if got is not None and got[0] >= limit:
            return got[1][: limit + 1]
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in _base_primes(limit if limit >= 2 else 2):
        p = int(p)
        phi[p::p] -= phi[p::p] // p
    with _table_lock:
        _table_cache["phi"] = (limit, phi)
    return phi
