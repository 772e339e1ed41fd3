"""Exact correction of segmentation misattribution.

Array convolution over log-scale cells credits some products d1*d2 (or
d1*d2*d3) just past the target bound as if they were inside it. Every such
product lies in a short window (n, n+S]; this module computes the exact
correction sum two ways:

* a per-integer depth-first walk over the square-free smooth divisors of each
  factored window element, pruned to divisors with enough prime factors to
  matter (the reference route, also the test surface), and
* a divisor-major aggregation that, for each admissible divisor, counts the
  cofactors inside an interval directly from the cell-boundary table (the
  production route; same sum, no per-divisor Python work).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import segmentation, sieve


@dataclass
class CorrectionJob:
    """Window description for one correction run.

    interval holds the complete factorizations of (lo, hi] and is built
    lazily; mode selects the pair walk (prime counting and weighted variants)
    or the triple walk (Mertens); residue restricts to window elements
    congruent to r mod m.
    """
    params: segmentation.SegParams
    lo: int
    hi: int
    bound: int
    mode: str = "pairs"
    trunc: int = 0
    residue: tuple | None = None
    interval: list | None = field(default=None, repr=False)

    def factored(self):
        if self.interval is None:
            self.interval = sieve.factorize_interval(self.lo, self.hi)
        return self.interval


def pairs_job(params, bound, *, residue=None, window=None):
    if window is None:
        window = params.window
        if window is None:
            window = segmentation.error_window_size(params)
    return CorrectionJob(params=params, lo=params.n, hi=params.n + window,
                         bound=bound, mode="pairs", residue=residue)


def triple_window(params):
    """Window length for triple corrections: only cell indices within two of
    the top cell can host a contributing triple."""
    return max(0, params.cell_top(params.top_cell + 2) - params.n)


def triples_job(params, trunc, *, window=None):
    if window is None:
        window = triple_window(params)
    return CorrectionJob(params=params, lo=params.n, hi=params.n + window,
                         bound=trunc, mode="triples", trunc=trunc)


def error_term_pairs(job, weight=None, modulus=None):
    """Walk every window element's square-free smooth divisors and sum the
    misattributed mass: h(n) * (-1)^omega(d) over divisors d with
    p_max(d) <= bound and cell(n/d) + factored_cell(d) <= top_cell.

    Only divisors with omega(d) >= cell(n) - top_cell - 1 can satisfy the
    test, so the subset walk cuts branches that cannot reach that count.
    Returns an exact integer for the unit weight, a residue otherwise.
    """
    if job.mode != "pairs":
        raise ValueError("job mode must be 'pairs'")
    params = job.params
    top = params.top_cell
    res_m, res_r = job.residue if job.residue else (0, 0)
    total = 0
    for fn in job.factored():
        if not fn.complete:
            raise ValueError(f"incomplete factorization for {fn.n}")
        n = fn.n
        if res_m and n % res_m != res_r:
            continue
        ps = [p for p, _ in fn.factors if p <= job.bound]
        need = segmentation.cell_index(n, params) - top - 1
        if len(ps) < need:
            continue
        kcells = [segmentation.cell_index(p, params) for p in ps]
        hn = 1 if weight is None else weight.value_at(n, modulus)
        total += hn * _pair_walk(n, ps, kcells, need, params, top)
        if modulus is not None:
            total %= modulus
    return total % modulus if modulus is not None else total


def _pair_walk(n, ps, kcells, need, params, top):
    total = 0
    count = len(ps)
    stack = [(0, 1, 0, 0)]  # (next prime index, divisor, its cell sum, omega)
    while stack:
        i, d, kd, omega = stack.pop()
        if omega + (count - i) < need:
            continue  # even taking every remaining prime cannot qualify
        if i == count:
            if segmentation.cell_index(n // d, params) + kd <= top:
                total += 1 if omega % 2 == 0 else -1
            continue
        stack.append((i + 1, d, kd, omega))
        stack.append((i + 1, d * ps[i], kd + kcells[i], omega + 1))
    return total


def error_term_triples(job, mu_table):
    """Sum mu(d2) * mu(d3) over ordered factorizations n = d1*d2*d3 of window
    elements with d2, d3 <= trunc and all three cell indices summing to at
    most top_cell. Square-freeness rides on the Mobius table's zeros."""
    if job.mode != "triples":
        raise ValueError("job mode must be 'triples'")
    params = job.params
    top = params.top_cell
    trunc = job.trunc
    total = 0
    for fn in job.factored():
        if not fn.complete:
            raise ValueError(f"incomplete factorization for {fn.n}")
        for d2, d3 in _split_pairs(fn.factors, trunc):
            w = mu_table[d2] * mu_table[d3]
            if w == 0:
                continue
            d1 = fn.n // (d2 * d3)
            ks = (segmentation.cell_index(d1, params)
                  + segmentation.cell_index(d2, params)
                  + segmentation.cell_index(d3, params))
            if ks <= top:
                total += w
    return total


def _split_pairs(factors, trunc):
    """All (d2, d3) with d2 * d3 dividing the factored number, both <= trunc."""
    pairs = [(1, 1)]
    for p, e in factors:
        nxt = []
        for a in range(e + 1):
            for b in range(e + 1 - a):
                pa, pb = p ** a, p ** b
                for d2, d3 in pairs:
                    if d2 * pa <= trunc and d3 * pb <= trunc:
                        nxt.append((d2 * pa, d3 * pb))
        pairs = nxt
    return pairs


def _chunk_ranges(lo, hi, chunk):
    start = lo
    while start < hi:
        stop = min(start + chunk, hi)
        yield start, stop
        start = stop


def _auto_chunk(total, chunk_size):
    if chunk_size:
        return chunk_size
    return max(1 << 20, (total >> 3) + 1)


class _Accumulator:
    """Exact or per-modulus accumulation of correction terms."""

    def __init__(self, moduli):
        self.moduli = moduli
        self.totals = [0] * max(1, len(moduli) if moduli else 1)

    def add_exact(self, value):
        if self.moduli:
            for i, p in enumerate(self.moduli):
                self.totals[i] = (self.totals[i] + value) % p
        else:
            self.totals[0] += value

    def add_residues(self, residues):
        for i, (p, v) in enumerate(zip(self.moduli, residues)):
            self.totals[i] = (self.totals[i] + v) % p

    def result(self):
        if self.moduli:
            return tuple(t % p for t, p in zip(self.totals, self.moduli))
        return self.totals[0]


def pairs_correction(params, bound, *, weight=None, moduli=None, residue=None,
                     chunk_size=None, window=None):
    """Divisor-major evaluation of the pair error sum.

    Splits on the divisor value: divisors up to the window length come from a
    screen of (0, S] and each contributes a cofactor-interval count in O(1);
    larger divisors are n/d1 for small d1 and come from stride slices of the
    screened window itself. Unit weight returns an exact int; with `weight`
    returns one residue per modulus in `moduli`; `residue` restricts products
    to r mod m and returns an exact int.
    """
    n = params.n
    window = params.window if window is None else window
    if window is None:
        window = segmentation.error_window_size(params)
    if window <= 0:
        return _Accumulator(moduli if weight is not None else None).result()
    if window <= (1 << 11) or (n + window) // (window + 1) > (1 << 13):
        # tiny window: the factored divisor walk costs less than screening
        job = pairs_job(params, bound, residue=residue, window=window)
        if weight is None:
            return error_term_pairs(job)
        return tuple(error_term_pairs(job, weight, p) for p in moduli)
    top = params.top_cell
    primes = sieve.primes_up_to(bound)
    pcells = sieve.prime_cell_indices(primes, params)
    acc = _Accumulator(moduli if weight is not None else None)
    cap_x = window
    d1_max = (n + window) // (cap_x + 1)
    chunk = _auto_chunk(window, chunk_size)
    res_m, res_r = residue if residue else (0, 0)
    if res_m:
        inv_table = _inverse_table(res_m)
    for lo, hi in _chunk_ranges(0, cap_x, chunk):
        smooth, kh, sign, sqfree, _ = sieve.screen_chunk(lo, hi, primes, pcells)
        ok = smooth & sqfree
        d2 = np.arange(lo + 1, hi + 1, dtype=np.int64)[ok]
        if len(d2) == 0:
            continue
        khs = kh[ok].astype(np.int64)
        sg = sign[ok].astype(np.int64)
        keep = khs <= top
        d2, khs, sg = d2[keep], khs[keep], sg[keep]
        cap = params.bounds_np[(top - khs) + 1].astype(np.int64) - 1
        upper = np.minimum((n + window) // d2, cap)
        lower = n // d2
        live = upper > lower
        d2, sg, upper, lower = d2[live], sg[live], upper[live], lower[live]
        if len(d2) == 0:
            continue
        if weight is None and not res_m:
            acc.add_exact(int(np.sum(sg * (upper - lower))))
        elif res_m:
            dm = d2 % res_m
            inv = inv_table[dm]
            good = inv >= 0
            t = (res_r * inv[good]) % res_m
            up, lw = upper[good], lower[good]
            cnt = (up - t) // res_m - (lw - t) // res_m
            acc.add_exact(int(np.sum(sg[good] * cnt)))
        else:
            residues = []
            for p in moduli:
                hv = weight.values_vec(d2, p)
                sv = np.where(sg > 0, hv, (p - hv) % np.uint64(p))
                pref = (weight.prefix_vec(upper.astype(np.uint64), p)
                        + np.uint64(p)
                        - weight.prefix_vec(lower.astype(np.uint64), p)) % np.uint64(p)
                residues.append(int(np.sum((sv * pref % np.uint64(p)).astype(np.int64))) % p)
            acc.add_residues(residues)
    # large divisors: stride over the window for each small cofactor d1
    d1_info = []
    for d1 in range(1, d1_max + 1):
        if res_m and math.gcd(d1, res_m) != 1:
            continue
        kb1 = segmentation.cell_index(d1, params)
        if kb1 > top:
            continue
        fac = _small_factor(d1)
        kd1 = segmentation.factored_cell_index(fac, params)
        d1_info.append((d1, kb1, kd1, fac))
    for lo, hi in _chunk_ranges(n, n + window, chunk):
        smooth, kh, sign, sqfree, excess = sieve.screen_chunk(
            lo, hi, primes, pcells, want_excess=True)
        for d1, kb1, kd1, fac in d1_info:
            low = max(lo, d1 * (cap_x + 1) - 1)
            first = (low // d1 + 1) * d1
            if first > hi:
                continue
            i0 = first - (lo + 1)
            sl = slice(i0, None, d1)
            sm = smooth[sl]
            pos = np.nonzero(sm)[0]
            if len(pos) == 0:
                continue
            nv = first + pos.astype(np.int64) * d1
            khs = kh[sl][pos].astype(np.int64) - kd1
            exs = excess[sl][pos]
            good = (khs + kb1 <= top) & (exs <= np.uint64(d1))
            good &= (np.uint64(d1) % np.maximum(exs, np.uint64(1))) == 0
            if res_m:
                good &= (nv % res_m) == res_r
            if not good.any():
                continue
            nv = nv[good]
            sg = sign[sl][pos][good].astype(np.int64)
            for p, e in fac:
                pe1 = p ** (e + 1)
                sg = np.where(nv % pe1 != 0, -sg, sg)
            if weight is None:
                acc.add_exact(int(np.sum(sg)))
            else:
                residues = []
                for p in moduli:
                    h1 = weight.value_at(d1, p)
                    hv = weight.values_vec((nv // d1).astype(np.uint64), p)
                    hv = hv * np.uint64(h1) % np.uint64(p)
                    sv = np.where(sg > 0, hv, (np.uint64(p) - hv) % np.uint64(p))
                    residues.append(int(np.sum(sv.astype(np.int64))) % p)
                acc.add_residues(residues)
    return acc.result()


def _inverse_table(m):
    """inv[x] = x^-1 mod m, or -1 when gcd(x, m) > 1."""
    inv = np.full(m, -1, dtype=np.int64)
    for x in range(m):
        if math.gcd(x, m) == 1:
            inv[x] = pow(x, -1, m)
    return inv


def _small_factor(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def triples_correction(params, trunc, mu_table, *, block=1 << 21, window=None):
    """Pair-major evaluation of the triple error sum: for each square-free
    (d2, d3) below the truncation, count admissible d1 in one step."""
    n = params.n
    window = triple_window(params) if window is None else window
    if window <= 0:
        return 0
    top = params.top_cell
    vals = np.nonzero(mu_table.values[:trunc + 1])[0].astype(np.int64)
    vals = vals[vals >= 1]
    signs = mu_table.values[vals].astype(np.int64)
    kcells = segmentation.cell_index_vec(vals.astype(np.uint64), params).astype(np.int64)
    total = 0
    rows = max(1, block // max(1, len(vals)))
    bounds = params.bounds_np.astype(np.int64)
    for start in range(0, len(vals), rows):
        stop = min(start + rows, len(vals))
        q = vals[start:stop, None] * vals[None, :]
        kk = kcells[start:stop, None] + kcells[None, :]
        w = signs[start:stop, None] * signs[None, :]
        rest = top - kk
        ok = rest >= 0
        if not ok.all():
            q = np.where(ok, q, 1)
        cap = bounds[np.where(ok, rest + 1, 0)] - 1
        upper = np.minimum((n + window) // q, cap)
        lower = n // q
        cnt = np.maximum(upper - lower, 0)
        cnt = np.where(ok, cnt, 0)
        total += int(np.sum(w * cnt))
    return total
