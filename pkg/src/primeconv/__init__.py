"""Exact prime counting and Mobius summation in roughly square-root time.

Integers are folded into logarithmic cells, sieving becomes one exact NTT
convolution against a truncated-Mobius cell array, and a short window past
the target is re-examined to cancel every misattributed product. The same
engine evaluates prime-power sums, primes in residue classes, the Mertens
function, square-free counts and the totient summatory function, each checked
against brute-force oracles.
"""

from .counting import (Config, ModulusSupportError, MultiplicativeWeight,
                       ResultBundle, ResultRangeError, count_primes,
                       count_primes_mod, count_primes_mod_result,
                       count_primes_result, count_squarefree,
                       count_squarefree_result, mertens, mertens_multi,
                       mertens_result, sum_over_primes,
                       sum_over_primes_result, totient_sum,
                       totient_sum_result)

__version__ = "0.1.0"

__all__ = [
    "Config", "ModulusSupportError", "MultiplicativeWeight", "ResultBundle",
    "ResultRangeError", "count_primes", "count_primes_mod",
    "count_primes_mod_result", "count_primes_result", "count_squarefree",
    "count_squarefree_result", "mertens", "mertens_multi", "mertens_result",
    "sum_over_primes", "sum_over_primes_result", "totient_sum",
    "totient_sum_result", "__version__",
]
