"""Committed oracle fixture values for sizes too slow to regenerate per run.

Each value was produced once by the brute-force oracles in this repository;
the generating command is recorded next to it. Regenerate with:

    python -c "from primeconv import oracles; print(oracles.pi_naive(10**9))"
    python -c "from primeconv import oracles; print(oracles.mertens_naive(10**6))"
    python -c "from primeconv import oracles; print(oracles.sqfree_naive(10**6))"
    python -c "from primeconv import oracles; print(oracles.totient_sum_naive(10**5))"
"""

PI_1E9 = 50847534          # oracles.pi_naive(10**9), segmented sieve
MERTENS_1E6 = 212          # oracles.mertens_naive(10**6), linear mu sieve
SQFREE_1E6 = 607926        # oracles.sqfree_naive(10**6), square-marking sieve
TOTIENT_SUM_1E5 = 3039650754  # oracles.totient_sum_naive(10**5), phi sieve
