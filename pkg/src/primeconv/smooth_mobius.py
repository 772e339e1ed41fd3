"""Smooth-Mobius segment arrays.

The cell array of the truncated Mobius function (optionally weighted by a
completely multiplicative function) is assembled from arrays counting products
of r distinct primes. Those satisfy a Newton-identities-style recurrence
against the arrays of r-th prime powers, which is solved either directly in
the time domain (reference path) or per Fourier coefficient as a power-series
exponential (fast path), with the primes split into size ranges to keep
transform padding small.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import modmath, segmentation


@dataclass(frozen=True)
class PrimePartition:
    """One size range of primes: indices [lo, hi) into the prime array,
    truncation order r_used, and the padded transform length."""
    lo: int
    hi: int
    r_used: int
    pad_length: int


def prime_cell_sums(primes, params, *, weight=None, modulus=None, power=1,
                    length=None):
    """Cell array of h(p^power) scattered at power * cell_index(p).

    With the unit weight this counts primes per cell (power=1) or marks r-th
    powers (power=r). Truncated to `length` (default top_cell + 1).
    """
    if length is None:
        length = params.top_cell + 1
    primes = np.asarray(primes, dtype=np.int64)
    cells = segmentation.cell_index_vec(primes.astype(np.uint64), params)
    idx = cells.astype(np.int64) * power
    keep = idx < length
    if weight is None and modulus is None:
        out = np.zeros(length, dtype=np.int64)
        np.add.at(out, idx[keep], 1)
        return out
    out = np.zeros(length, dtype=np.uint64)
    if weight is None:
        vals = np.ones(int(keep.sum()), dtype=np.uint64)
    else:
        vals = weight.prime_power_values(primes[keep], power, modulus)
    np.add.at(out, idx[keep], vals)
    return out % np.uint64(modulus) if modulus is not None else out


def dilate_prime_cells(e1, r):
    """Spread entry i of the order-1 array to index r*i, dropping overflow.

    Exact for the unit weight, where the order-r prime-power array is an
    index dilation of the order-1 array; r = 1 returns a copy.
    """
    if r < 1:
        raise ValueError("dilation order must be >= 1")
    e1 = np.asarray(e1)
    out = np.zeros_like(e1)
    count = (len(e1) - 1) // r + 1
    out[::r] = e1[:count]
    return out


def newton_direct(e_arrays, r_max, modulus=None):
    """Arrays counting weighted products of r distinct primes, r = 0..r_max.

    e_arrays[j] is the order-(j+1) prime-power cell array; all arrays share
    one truncation length, and each convolution is re-truncated to it. Time-
    domain reference path: r * C_r = sum_j (-1)^(j-1) C_(r-j) conv E_j.
    """
    if not e_arrays:
        raise ValueError("need at least the order-1 array")
    k_len = len(e_arrays[0])
    c0 = np.zeros(k_len, dtype=np.uint64 if modulus is not None else np.int64)
    c0[0] = 1
    cs = [c0]
    for r in range(1, r_max + 1):
        if modulus is None:
            acc = np.zeros(k_len, dtype=np.int64)
        else:
            acc = np.zeros(k_len, dtype=np.uint64)
        for j in range(1, r + 1):
            if j - 1 >= len(e_arrays):
                break
            ej = e_arrays[j - 1]
            if modulus is None:
                term = np.convolve(cs[r - j], ej)[:k_len]
                acc = acc + (term if j % 2 == 1 else -term)
            else:
                term = modmath.convolve_mod(cs[r - j], ej, modulus)[:k_len]
                pad = np.zeros(k_len, dtype=np.uint64)
                pad[:len(term)] = term
                if j % 2 == 1:
                    acc = (acc + pad) % np.uint64(modulus)
                else:
                    acc = (acc + (np.uint64(modulus) - pad)) % np.uint64(modulus)
        if modulus is None:
            q, rem = np.divmod(acc, r)
            if rem.any():
                raise ArithmeticError("product-count recurrence not divisible")
            cs.append(q)
        else:
            cs.append(acc * np.uint64(pow(r, -1, modulus)) % np.uint64(modulus))
    return cs


def make_partitions(primes, params):
    """Split primes (<= smoothness bound) into log-size ranges.

    Range m covers log2(p) in [log2(n)/2^(m+1), log2(n)/2^m); the truncation
    order per range is the largest r with r * cell_index(p_min) <= top_cell
    (products of more primes from the range always land above the truncation),
    also capped by the number of primes in the range.
    """
    n = params.n
    if len(primes) == 0:
        return []
    log2n = math.log2(n)
    m_max = max(1, int(math.log2(log2n)) if log2n > 1 else 1)
    edges = [2.0 ** (log2n / 2 ** m) for m in range(1, m_max + 1)]
    parts = []
    hi = len(primes)
    for m in range(1, m_max + 1):
        if m == m_max:
            lo = 0
        else:
            lo = int(np.searchsorted(primes, edges[m], side="right"))
        if lo < hi:
            parts.append(_make_partition(primes, lo, hi, params))
        hi = lo
        if hi == 0:
            break
    return parts


def _make_partition(primes, lo, hi, params):
    top = params.top_cell
    kb_min = segmentation.cell_index(int(primes[lo]), params)
    if kb_min < 1:
        raise ValueError("delta must keep every prime above cell 0")
    r_used = min(top // kb_min, hi - lo)
    kb_max = segmentation.cell_index(int(primes[hi - 1]), params)
    need = r_used * (kb_max + 1) + top + 1
    pad = 1
    while pad < need:
        pad *= 2
    return PrimePartition(lo=lo, hi=hi, r_used=r_used, pad_length=pad)


def smooth_mobius_cells(primes, params, modulus, *, weight=None, partition=True):
    """Cell array of the truncated-Mobius mass, weighted by h, modulo modulus.

    Entry k holds sum of h(n) * mu(n) over square-free n composed of the given
    primes with factored cell index k, truncated at top_cell. Fourier-space
    path: per coefficient, the order-r product arrays are read off a
    power-series exponential of the prime-power transforms.
    """
    if 2 * params.delta > 1:
        raise ValueError("smooth Mobius cells need delta <= 1/2")
    top = params.top_cell
    p = np.uint64(modulus)
    primes = np.asarray(primes, dtype=np.int64)
    if partition:
        parts = make_partitions(primes, params)
    else:
        parts = [_make_partition(primes, 0, len(primes), params)] if len(primes) else []
    pieces = [_partition_mobius(primes, part, params, modulus, weight)
              for part in parts]
    if not pieces:
        out = np.zeros(top + 1, dtype=np.uint64)
        out[0] = 1
        return out
    # pairwise balanced merge, truncating every intermediate to top_cell + 1
    while len(pieces) > 1:
        merged = []
        for i in range(0, len(pieces) - 1, 2):
            conv = modmath.convolve_mod(pieces[i], pieces[i + 1], modulus)
            merged.append(conv[:top + 1])
        if len(pieces) % 2:
            merged.append(pieces[-1])
        pieces = merged
    out = np.zeros(top + 1, dtype=np.uint64)
    res = pieces[0][:top + 1]
    out[:len(res)] = res
    return out


def _partition_mobius(primes, part, params, modulus, weight):
    top = params.top_cell
    p = np.uint64(modulus)
    sub = primes[part.lo:part.hi]
    r_used = part.r_used
    length = part.pad_length
    ctx = modmath.get_context(modulus, length)
    if r_used == 0:
        out = np.zeros(top + 1, dtype=np.uint64)
        out[0] = 1
        return out
    # Fourier transforms of the order-r prime-power arrays
    e_tilde = np.empty((r_used + 1, length), dtype=np.uint64)
    e_tilde[0] = 0
    if weight is None:
        base = prime_cell_sums(sub, params, modulus=modulus, length=length)
        e1t = modmath.ntt_forward(base, ctx)
        idx = np.arange(length, dtype=np.int64)
        for r in range(1, r_used + 1):
            e_tilde[r] = e1t[(idx * r) % length]
    else:
        for r in range(1, r_used + 1):
            arr = prime_cell_sums(sub, params, weight=weight, modulus=modulus,
                                  power=r, length=length)
            e_tilde[r] = modmath.ntt_forward(arr, ctx)
    # alternating signs folded into the series: f_r = (-1)^(r-1) e_r / r
    f = np.zeros_like(e_tilde)
    for r in range(1, r_used + 1):
        row = e_tilde[r] * np.uint64(pow(r, -1, modulus)) % p
        f[r] = row if r % 2 == 1 else (p - row) % p
    c = modmath.power_series_exp(f, r_used + 1, modulus)
    acc = np.zeros(length, dtype=np.uint64)
    for r in range(r_used + 1):
        acc = (acc + (c[r] if r % 2 == 0 else (p - c[r]) % p)) % p
    return modmath.ntt_inverse(acc, ctx)[:top + 1]
