"""Modular arithmetic kernel: NTT contexts, exact convolution, power-series
exponentials and CRT recombination.

All transforms run over word-sized prime fields chosen so that products of two
residues fit in uint64, which lets every butterfly stay inside vectorized numpy
arithmetic. Final results are reconstructed from a pair of coprime moduli.
"""

from dataclasses import dataclass

import numpy as np

# NTT-friendly primes with large power-of-two subgroups and known primitive
# roots. Pairwise products are ~2^62, far above any value this library lifts.
#   2013265921 = 15 * 2^27 + 1   (p - 1 divisible by 2^27, 3, 5)
#   2281701377 = 17 * 2^27 + 1   (p - 1 divisible by 2^27, 17)
#   3221225473 =  3 * 2^30 + 1   (p - 1 divisible by 2^30, 3)
NTT_PRIMES = (2013265921, 2281701377, 3221225473)
_PRIMITIVE_ROOTS = {2013265921: 31, 2281701377: 3, 3221225473: 5}
DEFAULT_MODULI = (2013265921, 2281701377)


def mod_inverse(a, m):
    """Inverse of a modulo m; raises ValueError if gcd(a, m) != 1."""
    return pow(a, -1, m)


def _bit_reversal(length):
    rev = np.zeros(1, dtype=np.int64)
    while len(rev) < length:
        rev = np.concatenate([2 * rev, 2 * rev + 1])
    return rev


def _power_table(base, count, modulus):
    """[base^0, base^1, ..., base^(count-1)] mod modulus as uint64."""
    out = np.empty(max(count, 1), dtype=np.uint64)
    out[0] = 1
    filled = 1
    while filled < count:
        step = np.uint64(pow(base, filled, modulus))
        take = min(filled, count - filled)
        out[filled:filled + take] = (out[:take] * step) % np.uint64(modulus)
        filled += take
    return out[:count]


class NttContext:
    """Immutable transform context for one (modulus, length) pair.

    length is a power of two dividing modulus - 1; root is a primitive
    length-th root of unity. Twiddle and permutation tables are precomputed so
    transforms are pure array passes.
    """

    __slots__ = ("modulus", "length", "root", "root_inv", "length_inv",
                 "_rev", "_tw_fwd", "_tw_inv")

    def __init__(self, modulus, length, root):
        if length < 1 or length & (length - 1):
            raise ValueError("transform length must be a power of two")
        if (modulus - 1) % length:
            raise ValueError("modulus - 1 must be divisible by length")
        if pow(root, length, modulus) != 1:
            raise ValueError("root is not a length-th root of unity")
        if length > 1 and pow(root, length // 2, modulus) != modulus - 1:
            raise ValueError("root is not primitive for this length")
        self.modulus = modulus
        self.length = length
        self.root = root
        self.root_inv = pow(root, -1, modulus)
        self.length_inv = pow(length, -1, modulus)
        self._rev = _bit_reversal(length)
        self._tw_fwd = self._stage_tables(root)
        self._tw_inv = self._stage_tables(self.root_inv)

    def _stage_tables(self, base):
        half = self.length // 2
        full = _power_table(base, max(half, 1), self.modulus)
        tables = []
        m = 2
        while m <= self.length:
            tables.append(np.ascontiguousarray(full[::self.length // m][:m // 2]))
            m *= 2
        return tables

    def __repr__(self):
        return f"NttContext(modulus={self.modulus}, length={self.length})"


_context_cache = {}


def get_context(modulus, length):
    """Cached NttContext; root derived from the known primitive root."""
    key = (modulus, length)
    ctx = _context_cache.get(key)
    if ctx is None:
        g = _PRIMITIVE_ROOTS.get(modulus)
        if g is None:
            g = _find_primitive_root(modulus)
        root = pow(g, (modulus - 1) // length, modulus)
        ctx = NttContext(modulus, length, root)
        _context_cache[key] = ctx
    return ctx


def _find_primitive_root(p):
    # factor p-1 by trial division (only used for non-pool moduli)
    n, fac = p - 1, []
    d = 2
    while d * d <= n:
        if n % d == 0:
            fac.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fac.append(n)
    g = 2
    while True:
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            return g
        g += 1


def _transform(values, ctx, tables):
    p = np.uint64(ctx.modulus)
    a = np.asarray(values, dtype=np.uint64)
    if a.shape[-1] != ctx.length:
        raise ValueError(f"expected length {ctx.length}, got {a.shape[-1]}")
    a = np.ascontiguousarray(a[..., ctx._rev])
    m = 2
    for tw in tables:
        half = m // 2
        v = a.reshape(a.shape[:-1] + (-1, m))
        lo = v[..., :half]
        hi = (v[..., half:] * tw) % p
        s = (lo + hi) % p
        d = (lo + (p - hi)) % p
        v[..., :half] = s
        v[..., half:] = d
        m *= 2
    return a


def ntt_forward(values, ctx):
    """Evaluate the polynomial with given coefficients at powers of ctx.root.

    Index ell of the output holds the evaluation at root^ell. Bijective;
    ntt_inverse undoes it.
    """
    return _transform(values, ctx, ctx._tw_fwd)


def ntt_inverse(values, ctx):
    """Exact inverse of ntt_forward."""
    out = _transform(values, ctx, ctx._tw_inv)
    return (out * np.uint64(ctx.length_inv)) % np.uint64(ctx.modulus)


def convolve(a, b, ctx):
    """Linear (acyclic) convolution of a and b modulo ctx.modulus.

    Requires len(a) + len(b) - 1 <= ctx.length so zero padding prevents
    cyclic wraparound; returns exactly len(a) + len(b) - 1 entries.
    """
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    out_len = len(a) + len(b) - 1
    if out_len > ctx.length:
        raise ValueError("operands too long for this context (cyclic overlap)")
    p = np.uint64(ctx.modulus)
    fa = np.zeros(ctx.length, dtype=np.uint64)
    fa[:len(a)] = a % p
    fb = np.zeros(ctx.length, dtype=np.uint64)
    fb[:len(b)] = b % p
    fa = ntt_forward(fa, ctx)
    fb = ntt_forward(fb, ctx)
    return ntt_inverse((fa * fb) % p, ctx)[:out_len]


def convolve_mod(a, b, modulus):
    """Convenience wrapper picking the smallest adequate cached context."""
    need = len(a) + len(b) - 1
    length = 1
    while length < need:
        length *= 2
    return convolve(a, b, get_context(modulus, length))


def power_series_exp(f, n, modulus):
    """First n coefficients of exp(f(x)) over the prime field.

    f must have zero constant term; n must be below the modulus so the
    divisions by 1..n-1 are exact. Accepts a 1-D series or a 2-D stack of
    shape (terms, batch) holding one series per column, in which case the
    result has shape (n, batch).
    """
    f = np.asarray(f, dtype=np.uint64)
    if f.shape[0] == 0 or np.any(f[0] != 0):
        raise ValueError("series must have zero constant term")
    if n >= modulus:
        raise ValueError("series length must be below the modulus")
    p = np.uint64(modulus)
    terms = f.shape[0]
    # e_r = r * f_r drives the quotient-free recurrence r*c_r = sum c_(r-j) e_j
    rr = np.arange(terms, dtype=np.uint64).reshape((terms,) + (1,) * (f.ndim - 1))
    e = (f % p) * rr % p
    c = np.zeros((n,) + f.shape[1:], dtype=np.uint64)
    c[0] = 1
    for r in range(1, n):
        acc = np.zeros(f.shape[1:], dtype=np.uint64)
        for j in range(1, min(r, terms - 1) + 1):
            acc += (c[r - j] * e[j]) % p
            if j % 60 == 0:
                acc %= p
        c[r] = acc % p * np.uint64(pow(r, -1, modulus)) % p
    return c


@dataclass(frozen=True)
class CrtPair:
    """One value seen through two coprime prime moduli."""
    residue1: int
    modulus1: int
    residue2: int
    modulus2: int


def crt_combine(pair):
    """Unique representative of the pair in (-P/2, P/2], P = m1*m2."""
    m1, m2 = pair.modulus1, pair.modulus2
    r1 = pair.residue1 % m1
    r2 = pair.residue2 % m2
    t = (r2 - r1) * pow(m1, -1, m2) % m2
    x = r1 + m1 * t
    product = m1 * m2
    if x > product // 2:
        x -= product
    return x
