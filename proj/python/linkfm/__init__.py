"""Python interface to the linkfm core library."""

import json

from ._linkfm import (
    BudgetExceeded,
    InvalidInput,
    eligible_primes,
    is_circular,
    is_prime,
    linking_number,
)
from . import _linkfm

__all__ = [
    "BudgetExceeded",
    "InvalidInput",
    "check",
    "eligible_primes",
    "find_hom",
    "is_circular",
    "is_prime",
    "linking_data",
    "linking_number",
    "mild_fm_cover",
    "scan",
    "selftest",
]


def linking_data(p, primes, roots=()):
    """Linking numbers and c coefficients for a set of eligible primes."""
    return json.loads(_linkfm._linking_data(p, list(primes), list(roots)))


def check(p, primes, n=2, with_oracle=False, budget=10**9):
    """Decide FM(n) for one to three primes by every available route."""
    return json.loads(_linkfm._check(p, list(primes), n, with_oracle, budget))


def find_hom(p, primes, n=2, budget=10**9, jobs=1):
    """Lexicographically first nonzero homomorphism into gl_n(F_p), or None."""
    res = json.loads(_linkfm._oracle(p, list(primes), n, budget, jobs))
    return res.get("witness")


def mild_fm_cover(p, primes, bound):
    """Circular superset with new primes interleaved, or None on bound exhaustion."""
    res = json.loads(_linkfm._cover(p, list(primes), bound))
    return res.get("linkdata")


def scan(p, bound, jobs=1, cache_dir=""):
    """Classify every triple of eligible primes up to bound."""
    return json.loads(_linkfm._scan(p, bound, jobs, str(cache_dir)))


def selftest(p=3, seed=1729, samples=200):
    return json.loads(_linkfm._selftest(p, seed, samples))
