import random
from fractions import Fraction

import pytest

from primeconv import segmentation as seg
from primeconv import sieve


def trial_factor(n):
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


def odd_sieve_count(limit):
    # independent second implementation: odd-only bitmap
    if limit < 2:
        return 0
    size = (limit - 1) // 2  # odd numbers 3, 5, ..., <= limit
    mask = bytearray([1]) * size
    i = 0
    while True:
        p = 2 * i + 3
        if p * p > limit:
            break
        if mask[i]:
            start = (p * p - 3) // 2
            for j in range(start, size, p):
                mask[j] = 0
        i += 1
    return 1 + sum(mask)


def test_primes_up_to_examples():
    assert sieve.primes_up_to(10).tolist() == [2, 3, 5, 7]
    assert sieve.primes_up_to(1).tolist() == []
    assert sieve.primes_up_to(2).tolist() == [2]


def test_primes_up_to_1e6_count_two_routes():
    primes = sieve.primes_up_to(10 ** 6)
    assert len(primes) == 78498
    assert odd_sieve_count(10 ** 6) == 78498
    rng = random.Random(4)
    for _ in range(50):
        p = int(primes[rng.randrange(len(primes))])
        assert trial_factor(p) == [(p, 1)]


def test_mu_table_examples():
    mu = sieve.mu_up_to(6)
    assert [mu[i] for i in range(1, 7)] == [1, -1, -1, 0, -1, 1]
    assert mu[4] == 0
    assert mu.prefix_sum(1) == 1
    big = sieve.mu_up_to(10 ** 5)
    for n in random.Random(9).sample(range(1, 10 ** 5), 60):
        fac = trial_factor(n)
        expect = 0 if any(e > 1 for _, e in fac) else (-1) ** len(fac)
        if n == 1:
            expect = 1
        assert big[n] == expect


def test_factorize_interval_examples():
    fns = sieve.factorize_interval(100, 110)
    by_n = {fn.n: fn for fn in fns}
    assert sorted(by_n) == list(range(101, 111))
    assert by_n[105].factors == ((3, 1), (5, 1), (7, 1))
    assert sieve.factorize_interval(50, 50) == []
    with pytest.raises(ValueError):
        sieve.factorize_interval(10, 5)
    with pytest.raises(ValueError):
        sieve.factorize_interval(1, 1 << 63)
    with pytest.raises(ValueError):
        sieve.factorize_interval(100, 110, prime_budget=5)


def test_factorize_interval_products_near_1e9():
    rng = random.Random(17)
    for _ in range(3):
        lo = rng.randrange(10 ** 9, 2 * 10 ** 9)
        for fn in sieve.factorize_interval(lo, lo + 400):
            prod = 1
            for p, e in fn.factors:
                prod *= p ** e
            assert prod == fn.n and fn.complete
            assert list(fn.factors) == sorted(fn.factors)


def test_factorize_interval_agrees_with_trial_division():
    fns = sieve.factorize_interval(1, 10 ** 5, chunk_size=2 ** 14)
    assert len(fns) == 10 ** 5 - 1
    for fn in fns[:: 13]:
        assert fn.factors == tuple(trial_factor(fn.n))
    # primes are exactly the single-factor exponent-1 entries
    primes = {fn.n for fn in fns if fn.factors == ((fn.n, 1),)}
    assert primes == set(int(p) for p in sieve.primes_up_to(10 ** 5))


def test_mu_matches_factorizations():
    mu = sieve.mu_up_to(10 ** 5)
    fns = sieve.factorize_interval(1, 10 ** 5)
    for fn in fns[:: 211]:
        sq = all(e == 1 for _, e in fn.factors)
        expect = (-1) ** len(fn.factors) if sq else 0
        assert mu[fn.n] == expect


def test_screen_chunk_summaries():
    params = seg.make_params(10 ** 4, Fraction(1, 40))
    bound = 100
    primes = sieve.primes_up_to(bound)
    pcells = sieve.prime_cell_indices(primes, params)
    lo, hi = 5000, 6000
    smooth, kh, sign, sqfree, excess = sieve.screen_chunk(
        lo, hi, primes, pcells, want_excess=True)
    for idx in range(0, hi - lo, 7):
        n = lo + 1 + idx
        fac = trial_factor(n)
        is_smooth = all(p <= bound for p, _ in fac)
        assert smooth[idx] == is_smooth
        assert sqfree[idx] == all(e == 1 for p, e in fac if p <= bound)
        small = [(p, e) for p, e in fac if p <= bound]
        assert sign[idx] == (-1) ** len(small)
        exp_excess = 1
        for p, e in small:
            exp_excess *= p ** (e - 1)
        assert excess[idx] == exp_excess
        if is_smooth:
            assert kh[idx] == seg.factored_cell_index(fac, params)
