import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import brute_factor, brute_primes
from explicit_bv.arith import (
    build_tables,
    bulk_multiplicative_orders,
    chebyshev_segmented,
    factorize,
    is_prime,
    least_prime_in_ap,
    load_tables,
    multiplicative_order,
    primes_in_segments,
    progression_one_counts,
    save_tables,
    trial_factorize,
)
from explicit_bv.errors import CapacityError, DomainError, SearchLimitError


@pytest.fixture(scope="module")
def small():
    return build_tables(3000)


def test_small_table_values():
    t = build_tables(12)
    assert t.von_mangoldt[8] == pytest.approx(math.log(2), abs=1e-15)
    assert t.von_mangoldt[6] == 0
    assert (t.mobius[12], t.omega[12], t.euler_phi[12], t.greatest_prime_factor[12]) == (0, 2, 4, 3)


def test_tables_match_trial_division(small):
    for n in range(2, small.limit + 1):
        f = brute_factor(n)
        assert small.least_prime_factor[n] == min(f)
        assert small.greatest_prime_factor[n] == max(f)
        assert small.omega[n] == len(f)
        mu = 0 if any(k > 1 for k in f.values()) else (-1) ** len(f)
        assert small.mobius[n] == mu
        phi = n
        for p in f:
            phi = phi // p * (p - 1)
        assert small.euler_phi[n] == phi
        assert small.prime_power_base[n] == (next(iter(f)) if len(f) == 1 else 0)
    assert small.primes.tolist() == brute_primes(small.limit)


def test_divisor_sum_identities(small):
    N = small.limit
    mu_sum = np.zeros(N + 1, dtype=np.int64)
    phi_sum = np.zeros(N + 1, dtype=np.int64)
    lam_sum = np.zeros(N + 1)
    for d in range(1, N + 1):
        mu_sum[d::d] += small.mobius[d]
        phi_sum[d::d] += small.euler_phi[d]
        lam_sum[d::d] += small.von_mangoldt[d]
    n = np.arange(1, N + 1)
    assert mu_sum[1] == 1 and np.all(mu_sum[2:] == 0)
    assert np.array_equal(phi_sum[1:], n)
    assert np.allclose(lam_sum[1:], np.log(n), rtol=1e-9, atol=1e-12)


def test_phi_of_primes_and_squarefree_mobius(tables):
    p = tables.primes
    assert np.array_equal(tables.euler_phi[p], p - 1)
    sqf = np.flatnonzero(tables.mobius[1:]) + 1
    assert np.array_equal(tables.mobius[sqf], (-1) ** tables.omega[sqf])


def test_mertens_against_trial_division(tables):
    rng = np.random.default_rng(1)
    for n in rng.integers(2, 10**6, 2000):
        f = trial_factorize(int(n))
        mu = 0 if any(k > 1 for k in f.values()) else (-1) ** len(f)
        assert tables.mobius[n] == mu
        assert tables.greatest_prime_factor[n] == max(f)


def test_capacity_errors():
    with pytest.raises(CapacityError):
        build_tables(0)
    with pytest.raises(CapacityError):
        build_tables(10**6, max_entries=1000)
    t = build_tables(100)
    with pytest.raises(CapacityError):
        t.require(101)


def test_save_load_roundtrip(tmp_path, small):
    path = tmp_path / "t.bin"
    save_tables(small, path)
    t = load_tables(path, expected_limit=small.limit)
    assert np.array_equal(t.mobius, small.mobius)
    assert np.array_equal(t.primes, small.primes)


@given(st.integers(1, 10**12))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert math.prod(p**k for p, k in f.items()) == n
    assert all(is_prime(p) for p in f)


@given(st.integers(0, 10**5))
def test_is_prime_matches_table(n):
    from explicit_bv.arith import get_tables
    t = get_tables(10**5)
    assert is_prime(n) == (n >= 2 and t.least_prime_factor[n] == n)


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(561) and not is_prime(3215031751)
    assert is_prime(1_000_000_007)


def test_orders():
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(2, 5) == 4
    k, v = 1, 3
    while v != 1:
        v = v * 3 % 1009
        k += 1
    assert multiplicative_order(3, 1009) == k
    with pytest.raises(DomainError):
        multiplicative_order(14, 7)


def test_bulk_orders_match(tables):
    p = tables.primes[:3000]
    bulk = bulk_multiplicative_orders(p, 10, tables)
    for pi, e in zip(p.tolist(), bulk.tolist()):
        if 10 % pi == 0:
            assert e == 0
        else:
            assert e == multiplicative_order(10, pi)
            assert (pi - 1) % e == 0


def test_least_prime_in_ap():
    assert least_prime_in_ap(3, 1) == 7
    assert least_prime_in_ap(5, 2) == 2
    k = 1
    while not is_prime(1 + 101 * k):
        k += 1
    assert least_prime_in_ap(101, 1) == 1 + 101 * k
    with pytest.raises(DomainError):
        least_prime_in_ap(6, 3)
    with pytest.raises(SearchLimitError) as e:
        least_prime_in_ap(1000003, 1, ceiling=1000)
    assert e.value.ceiling == 1000


def test_progression_one_counts(small):
    x = 2000
    ps = brute_primes(x)
    mods = [1, 2, 3, 4, 10, 97, 200, 1999, 5000]
    got = progression_one_counts(x, mods, small)
    assert got.tolist() == [sum(1 for p in ps if (p - 1) % m == 0) for m in mods]
    assert progression_one_counts(100, [1, 2, 3, 4, 10, 200], small).tolist() == [25, 24, 11, 11, 5, 0]


def test_segmented_matches_tables(tables):
    x = 10**6
    psi, theta, count = chebyshev_segmented(x, segment=1 << 15)
    assert count == tables.primes.size
    assert theta == pytest.approx(math.fsum(np.log(tables.primes.astype(float))), rel=1e-12)
    assert psi == pytest.approx(math.fsum(tables.von_mangoldt[1:]), rel=1e-12)
    seg = np.concatenate(list(primes_in_segments(2, x + 1, segment=1 << 14)))
    assert np.array_equal(seg, tables.primes)
