import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import brute_primes
from explicit_bv.characters import character_group
from explicit_bv.chebyshev import (
    bv_lhs_pi,
    bv_lhs_psi,
    bv_moduli,
    class_step_values,
    deviation_max,
    mvt_lhs,
    pi,
    pi1,
    pi1_progression,
    pi_progression,
    psi,
    psi_progression,
    psi_prime,
    psi_twisted,
    psi_twisted_prefix_max,
    theta,
    twisted_maxima,
)
from explicit_bv.constants import a0_constant
from explicit_bv.errors import CapacityError


def brute_lambda(n):
    for p in brute_primes(n):
        m = n
        while m % p == 0:
            m //= p
        if m == 1:
            return math.log(p)
        if m != n:
            return 0.0
    return 0.0


PRIMES = set(brute_primes(400))
LAM = [0.0] + [brute_lambda(n) for n in range(1, 401)]


def test_basic_values(tables):
    assert psi(113, tables) / 113 == pytest.approx(1.03883, abs=1e-4)
    assert psi(1, tables) == 0 and pi(2, tables) == 1
    assert pi1(3, tables) == 2 and pi1(4, tables) == 2.5
    assert pi_progression(20, 4, 1, tables) == 3
    for x in (10, 100, 1000):
        assert pi_progression(x, 1, 0, tables) == pi(x, tables)
    assert psi_progression(10, 2, 1, tables) == pytest.approx(2 * math.log(3) + math.log(5) + math.log(7))


def test_theta_reverse_order(tables):
    p = brute_primes(10**4)
    assert theta(10**4, tables) == pytest.approx(math.fsum(math.log(v) for v in reversed(p)), abs=1e-9)
    rev = 0.0
    for v in tables.primes[::-1]:
        rev += math.log(int(v))
    assert abs(theta(10**6, tables) - rev) < 1e-6


def test_pi1_gap(tables):
    assert pi1(10**5, tables) - pi(10**5, tables) < 2 * math.sqrt(10**5)


@given(st.integers(1, 400), st.integers(1, 30))
def test_progressions_partition(x, q):
    from explicit_bv.arith import get_tables
    t = get_tables(10**4)
    assert psi(x, t) == pytest.approx(math.fsum(psi_progression(x, q, a, t) for a in range(q)), abs=1e-9)
    assert pi(x, t) == sum(pi_progression(x, q, a, t) for a in range(q))
    assert pi1(x, t) == pytest.approx(math.fsum(pi1_progression(x, q, a, t) for a in range(q)), abs=1e-9)
    assert psi(x, t) == pytest.approx(math.fsum(LAM[: x + 1]), abs=1e-9)


def test_principal_drops_ramified(tables):
    for q in range(1, 101, 7):
        chi0 = character_group(q).principal
        for x in (10, 1000, 10**4):
            ram = math.fsum(LAM_at(n) for n in range(2, x + 1) if math.gcd(n, q) > 1 and tables.prime_power_base[n])
            assert psi_twisted(x, chi0, tables).real == pytest.approx(psi(x, tables) - ram, abs=1e-8)


def LAM_at(n):
    from explicit_bv.arith import get_tables
    return get_tables(10**4).von_mangoldt[n]


def test_chebyshev_bound_up_to_1e7(big_tables):
    A0 = a0_constant(big_tables)
    pp = big_tables.prime_powers
    assert np.all(big_tables.psi_at_prime_powers <= A0.upper * pp)


def test_twisted_prefix_brute(tables):
    chi = [c for c in character_group(3) if not c.is_principal][0]
    best, s = 0.0, 0j
    for n in range(1, 21):
        s += LAM[n] * chi(n)
        best = max(best, abs(s))
    r = psi_twisted_prefix_max(20, chi, tables)
    assert r.max == pytest.approx(best)
    assert r.max >= abs(psi_twisted(20, chi, tables))
    assert psi_twisted_prefix_max(10**4, character_group(1)[0], tables).max == pytest.approx(psi(10**4, tables))


def brute_deviation(x, q, kind="psi"):
    w = LAM if kind == "psi" else [1.0 if n in PRIMES else 0.0 for n in range(x + 1)]
    res = [a for a in range(q) if math.gcd(a, q) == 1]
    phi = len(res)
    best = 0.0
    cls = {a: 0.0 for a in res}
    tot = 0.0
    for y in range(2, x + 1):
        tot += w[y]
        if y % q in cls:
            cls[y % q] += w[y]
        best = max(best, max(abs(cls[a] - tot / phi) for a in res))
    return best


@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 12, 30])
def test_deviation_brute(tables, q):
    assert deviation_max(50, q, tables).max == pytest.approx(brute_deviation(50, q), abs=1e-12)
    assert deviation_max(400, q, tables).max == pytest.approx(brute_deviation(400, q), abs=1e-9)
    assert deviation_max(400, q, tables, kind="pi").max == pytest.approx(brute_deviation(400, q, "pi"), abs=1e-9)


def test_deviation_q4_dense(tables):
    jumps, _, rows = class_step_values(10**4, 4, tables)
    # dense evaluation: values right after each jump and just before the next
    before = np.concatenate([np.zeros((rows.shape[0], 1)), rows[:, :-1]], axis=1)
    dense = max(np.abs(rows).max(), np.abs(before).max())
    assert deviation_max(10**4, 4, tables).max == pytest.approx(dense, abs=1e-9)
    r = deviation_max(10**4, 4, tables)
    assert np.all(r.per_residue >= np.abs(rows[:, -1]) - 1e-9)


def test_mvt_lhs_cases(tables):
    assert mvt_lhs(10**4, 0.5, tables) == 0
    assert mvt_lhs(10**4, 1.5, tables) == pytest.approx(psi(10**4, tables))
    want = 0.0
    for q in range(1, 11):
        g = character_group(q)
        for i in g.primitive_indices():
            want += q / g.phi * psi_twisted_prefix_max(10**4, g[i], tables).max
    assert mvt_lhs(10**4, 10, tables) == pytest.approx(want, rel=1e-12)
    assert mvt_lhs(10**4, 10, tables, threads=4) == mvt_lhs(10**4, 10, tables)
    with pytest.raises(CapacityError):
        mvt_lhs(10**6, 1000, tables, budget=10**6)


def test_bv_lhs(tables):
    qs = bv_moduli(20, 3)
    assert qs == [1, 5, 7, 11, 13, 17, 19]
    want = math.fsum(deviation_max(10**4, q, tables).max for q in qs)
    assert bv_lhs_psi(10**4, 20, 3, tables) == pytest.approx(want)
    assert bv_lhs_psi(10**4, 10, 10, tables) == 0
    assert bv_lhs_psi(10**4, 30, 3, tables) >= bv_lhs_psi(10**4, 20, 3, tables)
    assert bv_lhs_pi(10**4, 20, 3, tables) >= 0


@given(st.integers(1, 40), st.integers(2, 3000))
def test_psi_prime_vs_lifting(q, y):
    from explicit_bv.arith import get_tables
    from explicit_bv.characters import primitive_inducing
    t = get_tables(10**4)
    for chi in list(character_group(q))[:4]:
        star = primitive_inducing(chi)
        assert abs(psi_prime(y, star, t) - psi_prime(y, chi, t)) <= math.log(q * y) ** 2


def test_twisted_maxima_defaults(tables):
    idx, m = twisted_maxima(1000, 8, tables=tables)
    assert idx.tolist() == character_group(8).primitive_indices().tolist()
    for i, v in zip(idx, m):
        assert v == pytest.approx(psi_twisted_prefix_max(1000, character_group(8)[i], tables).max)
