"""Prime generation, Mobius tabulation and factorization over intervals.

Two levels of service: factorize_interval yields complete per-integer
factorizations (object level, used by the divisor-walk error correction and by
tests), while screen_chunk produces the vectorized per-integer summaries
(smoothness, square-freeness, cell-index sums) that the fast correction path
consumes without ever materializing factorizations.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import segmentation

_MAX_N = 1 << 62  # word-range guard for interval entries

_prime_cache = np.array([], dtype=np.int64)


def primes_up_to(limit):
    """Ascending array of all primes <= limit (cached, grow-only)."""
    global _prime_cache
    if limit < 2:
        return np.array([], dtype=np.int64)
    if len(_prime_cache) == 0 or _prime_cache[-1] < limit:
        span = max(int(limit), 1000)
        sieve = np.ones(span + 1, dtype=bool)
        sieve[:2] = False
        for p in range(2, math.isqrt(span) + 1):
            if sieve[p]:
                sieve[p * p::p] = False
        _prime_cache = np.nonzero(sieve)[0].astype(np.int64)
    cut = np.searchsorted(_prime_cache, limit, side="right")
    return _prime_cache[:cut]


class MuTable:
    """Mobius values mu(0..limit) as int8, with cached prefix sums."""

    def __init__(self, values, limit):
        self.values = values
        self.limit = limit
        self._prefix = None

    def prefix_sum(self, k):
        """Sum of mu(1..k)."""
        if self._prefix is None:
            self._prefix = np.cumsum(self.values.astype(np.int64))
        return int(self._prefix[k])

    def __getitem__(self, n):
        return int(self.values[n])


def mu_up_to(limit):
    """Sieve mu(n) for all n <= limit."""
    if limit < 1:
        raise ValueError("mu_up_to needs limit >= 1")
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in primes_up_to(limit):
        p = int(p)
        mu[p::p] *= -1
        if p * p <= limit:
            mu[p * p::p * p] = 0
    return MuTable(mu, limit)


@dataclass(frozen=True)
class FactoredNumber:
    """An integer with its complete prime factorization, primes ascending."""
    n: int
    factors: tuple
    complete: bool = True


def factorize_interval(lo, hi, prime_budget=None, *, chunk_size=1 << 20):
    """Complete factorizations for every n in (lo, hi], ascending.

    Sieves with primes up to the budget (default floor(sqrt(hi))); anything
    left unfactored after that must be a single prime. Processes fixed-size
    chunks so peak memory is O(chunk + pi(sqrt(hi))).
    """
    if lo < 1 or hi < lo:
        raise ValueError("need hi >= lo >= 1")
    if hi >= _MAX_N:
        raise ValueError("interval end exceeds supported word range")
    if hi == lo:
        return []
    budget = math.isqrt(hi) if prime_budget is None else prime_budget
    if budget < math.isqrt(hi):
        raise ValueError("prime budget below sqrt of the interval end")
    primes = [int(p) for p in primes_up_to(budget)]
    out = []
    start = lo
    while start < hi:
        stop = min(start + chunk_size, hi)
        out.extend(_factor_chunk(start, stop, primes))
        start = stop
    return out


def _factor_chunk(lo, hi, primes):
    size = hi - lo
    rem = np.arange(lo + 1, hi + 1, dtype=np.uint64)
    hits = [[] for _ in range(size)]
    for p in primes:
        if p * p > hi and p > hi:
            break
        first = (lo // p + 1) * p
        if first > hi:
            continue
        q, e = p, 1
        counts = np.zeros(size, dtype=np.int8)
        while q <= hi:
            i0 = (lo // q + 1) * q - (lo + 1)
            counts[i0::q] += 1
            rem[i0::q] //= p
            q *= p
            e += 1
        for idx in np.nonzero(counts)[0]:
            hits[idx].append((p, int(counts[idx])))
    result = []
    for idx in range(size):
        n = lo + 1 + idx
        factors = hits[idx]
        left = int(rem[idx])
        if left > 1:
            factors.append((left, 1))
        result.append(FactoredNumber(n=n, factors=tuple(factors)))
    return result


def prime_cell_indices(primes, params):
    """cell_index of each prime (int64 array aligned with `primes`)."""
    return segmentation.cell_index_vec(np.asarray(primes, dtype=np.uint64), params)


def screen_chunk(lo, hi, primes, prime_cells, *, want_excess=False):
    """Vectorized per-integer summary of (lo, hi] against primes <= bound.

    Returns (smooth, kh, sign, sqfree, excess):
      smooth: no prime factor above the sieving primes' bound
      kh: sum of e * cell_index(p) over sieved primes (complete iff smooth)
      sign: (-1)^(number of distinct sieved primes)
      sqfree: no sieved prime divides twice
      excess: product of p^(e-1) over sieved primes with e >= 2 (or None)

    Only `smooth` rows carry final values of kh/sign; a residual > 1 means a
    prime factor above the bound, which every caller treats as weight zero.
    """
    size = hi - lo
    dtype = np.uint32 if hi < (1 << 32) else np.uint64
    rem = np.arange(lo + 1, hi + 1, dtype=dtype)
    kh = np.zeros(size, dtype=np.int32)
    sign = np.ones(size, dtype=np.int8)
    sqfree = np.ones(size, dtype=bool)
    excess = np.ones(size, dtype=np.uint64) if want_excess else None
    for i in range(len(primes)):
        p = int(primes[i])
        first = (lo // p + 1) * p
        if first > hi:
            continue
        kb = np.int32(prime_cells[i])
        i0 = first - (lo + 1)
        sl = slice(i0, None, p)
        rem[sl] //= dtype(p)
        kh[sl] += kb
        sign[sl] = -sign[sl]
        q = p * p
        if q <= hi:
            first2 = (lo // q + 1) * q
            if first2 <= hi:
                sqfree[first2 - (lo + 1)::q] = False
            while q <= hi:
                first_q = (lo // q + 1) * q
                if first_q > hi:
                    break
                slq = slice(first_q - (lo + 1), None, q)
                rem[slq] //= dtype(p)
                kh[slq] += kb
                if want_excess:
                    excess[slq] *= np.uint64(p)
                q *= p
    return rem == 1, kh, sign, sqfree, excess
