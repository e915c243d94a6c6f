import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import brute_factor
from explicit_bv.characters import character_group
from explicit_bv.chebyshev import psi, psi_twisted
from explicit_bv.errors import DomainError
from explicit_bv.vaughan import (
    VaughanParams,
    at_bound_holds,
    bilinear_max_check,
    coefficient_tables,
    dyadic_blocks,
    dyadic_count_bound,
    lambda_arrays,
    lambda_components,
    large_sieve_check,
    mobius_square_sum,
    s2_pathway,
    s_split,
    snap_floor,
)


def mu(n):
    f = brute_factor(n)
    return 0 if any(k > 1 for k in f.values()) else (-1) ** len(f)


def lam(n):
    f = brute_factor(n)
    return math.log(next(iter(f))) if len(f) == 1 else 0.0


def brute_components(n, U, V):
    """Triple loops straight from the definitions."""
    l1 = lam(n) if n <= U else 0.0
    l2 = sum(mu(d) * math.log(n // d) for d in range(1, n + 1) if n % d == 0 and d <= V)
    l3 = 0.0
    l4 = 0.0
    for m in range(1, n + 1):
        if n % m:
            continue
        for d in range(1, n // m + 1):
            if (n // m) % d == 0 and m <= U and d <= V:
                l3 -= lam(m) * mu(d)
        k = n // m
        if m > U and k > V:
            l4 -= lam(m) * sum(mu(d) for d in range(1, k + 1) if k % d == 0 and d <= V)
    return l1, l2, l3, l4


@pytest.mark.parametrize("U,V", [(2, 2), (5, 20), (1, 1)])
def test_components_brute(U, V):
    p = VaughanParams(U, V)
    for n in range(1, 301):
        got = lambda_components(n, p)
        want = brute_components(n, U, V)
        assert np.allclose(got, want, atol=1e-9)


def test_component_cases():
    p = VaughanParams(10, 10)
    assert lambda_components(1, p) == (0.0, 0.0, 0.0, 0.0)
    assert lambda_components(7, p)[0] == pytest.approx(math.log(7))
    with pytest.raises(DomainError):
        VaughanParams(0.5, 2)


def test_identity_small_all_n(tables):
    p = VaughanParams(2, 2)
    for n in range(1, 10**4 + 1, 7):
        assert sum(lambda_components(n, p, tables)) == pytest.approx(tables.von_mangoldt[n], abs=1e-9)


@pytest.mark.parametrize("U,V", [((10**5) ** (1 / 3), (10**5) ** (1 / 3)), (5, 20), (1, 1), (3.7, 11.2)])
def test_bulk_identity_and_agreement(tables, U, V):
    p = VaughanParams(U, V)
    vt = lambda_arrays(10**5, p, tables)
    assert np.abs(vt.total() - tables.von_mangoldt[: 10**5 + 1]).max() < 1e-8
    for n in (1, 2, 60, 97, 720, 9973, 65536, 99991):
        c = lambda_components(n, p, tables)
        assert np.allclose(c, (vt.l1[n], vt.l2[n], vt.l3[n], vt.l4[n]), atol=1e-9)


def test_snap_floor():
    assert snap_floor((10**6) ** (1 / 3)) == 100
    assert snap_floor(99.5) == 99


def test_for_mvt():
    assert VaughanParams.for_mvt(10**6, 50).U == pytest.approx(100)
    assert VaughanParams.for_mvt(10**6, 500).U == pytest.approx(20)
    with pytest.raises(DomainError):
        VaughanParams.for_mvt(10**6, 1001)


def test_split_trivial(tables):
    p = VaughanParams(100 ** (1 / 3), 100 ** (1 / 3))
    s = s_split(100, 100, character_group(1)[0], p, tables)
    assert s.reconstruction.real == pytest.approx(psi(100, tables), abs=1e-9)


def test_split_mod3_random_y(tables):
    chi = [c for c in character_group(3) if not c.is_principal][0]
    p = VaughanParams(10, 10)
    coeffs = coefficient_tables(1000, p, tables)
    for y in np.random.default_rng(0).integers(1, 1001, 20):
        s = s_split(1000, int(y), chi, p, tables, coeffs)
        assert abs(s.reconstruction - psi_twisted(int(y), chi, tables)) < 1e-8 * max(1, abs(s.psi))


@given(st.integers(1, 30), st.integers(2, 3000), st.floats(1, 40), st.floats(1, 40))
def test_split_property(q, y, U, V):
    from explicit_bv.arith import get_tables
    t = get_tables(10**4)
    p = VaughanParams(U, V)
    for chi in list(character_group(q))[:3]:
        s = s_split(3000, y, chi, p, t)
        assert s.relative_error < 1e-8
        assert abs(s.S1) <= 1.03883 * U + 1e-9


def test_at_bound(tables):
    a, _ = coefficient_tables(10**4, VaughanParams(50, 50), tables)
    assert at_bound_holds(a)


@pytest.mark.parametrize("q", [3, 5, 8, 12, 31, 50])
def test_s2_pathway(q):
    p = VaughanParams(7, 7)
    for chi in list(character_group(q))[:4]:
        for y in (50, 500):
            s2, bound = s2_pathway(y, chi, p)
            assert s2 <= bound + 1e-9


def test_large_sieve_cases():
    assert large_sieve_check(0, 5, 4, np.zeros(5)).holds
    m0 = 6
    r = large_sieve_check(m0, 1, 3, [1.0])
    want = 0.0
    for q in (1, 2, 3):
        g = character_group(q)
        for i in g.primitive_indices():
            want += q / g.phi * abs(g[i](m0 + 1)) ** 2
    assert r.lhs == pytest.approx(want) and r.rhs == 10 and r.holds


def test_bilinear_cases(ledger):
    r = bilinear_max_check([1.0], [1.0], 1, 1, 1, ledger.c3.value)
    assert r.lhs == pytest.approx(1.0)
    assert r.rhs == pytest.approx(ledger.c3.value * 2 * math.log(2))
    assert r.rhs == pytest.approx(3.666, abs=1e-3)
    assert bilinear_max_check([1.0, 2.0], [0.0, 0.0, 0.0], 3, 4, 5, ledger.c3.value).lhs == 0


def test_mobius_square(tables):
    assert mobius_square_sum(1000, 1, tables).lhs == 1000
    x, V = 10**4, 10
    lhs = sum(sum(mu(d) for d in range(1, V + 1) if k % d == 0) ** 2 for k in range(1, x + 1))
    r = mobius_square_sum(x, V, tables)
    assert r.lhs == lhs and r.holds
    assert mobius_square_sum(10**6, 100, tables).holds


def test_dyadic_examples():
    assert dyadic_blocks(3, 3) == []
    assert dyadic_blocks(1, 8) == [(1, 2), (2, 4), (4, 8)]
    b = dyadic_blocks(5, 100)
    assert len(b) == 5 <= dyadic_count_bound(5, 100)


@given(st.floats(0.01, 1e6), st.floats(1.0001, 1e3))
def test_dyadic_cover(lo, ratio):
    hi = lo * ratio
    blocks = dyadic_blocks(lo, hi)
    assert blocks[0][0] <= lo < blocks[0][1] and blocks[-1][0] < hi <= blocks[-1][1]
    for (a, b), (c, d) in zip(blocks, blocks[1:]):
        assert b == c and b == 2 * a
    # the block count can exceed log2(2 hi/lo) by one when lo sits just below a power of two
    assert len(blocks) <= math.floor(dyadic_count_bound(lo, hi)) + 1
