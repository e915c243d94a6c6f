import math

import pytest
from hypothesis import settings

from explicit_bv.arith import get_tables
from explicit_bv.constants import default_ledger

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def tables():
    return get_tables(10**6)


@pytest.fixture(scope="session")
def big_tables():
    return get_tables(10**7)


@pytest.fixture(scope="session")
def ledger():
    return default_ledger()


def brute_primes(n):
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, math.isqrt(p) + 1))]


def brute_factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out
