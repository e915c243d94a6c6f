import math

import numpy as np
import pytest

from conftest import brute_factor, brute_primes
from explicit_bv.bounds import (
    AP_SUM_THETA_MAX,
    bv_moduli_count,
    displayed_constant_margin,
    grid_points,
    ap_sum_lhs,
    verify_bridge,
    verify_bt,
    verify_ebvt_pi,
    verify_ebvt_psi,
    verify_lemma31,
    verify_lemma51,
    verify_lifting,
    verify_mvt,
    verify_phi_harmonic,
    verify_s_recombination,
    verify_sq_partial_summation,
)
from explicit_bv.errors import DomainError
from explicit_bv.reports import BoundCheckReport


def lam(n):
    f = brute_factor(n) if n > 1 else {}
    return math.log(next(iter(f))) if len(f) == 1 else 0.0


def brute_bv(x, qs, kind):
    w = (lambda n: lam(n)) if kind == "psi" else (lambda n: float(len(brute_factor(n)) == 1 and max(brute_factor(n).values()) == 1) if n > 1 else 0.0)
    total = 0.0
    for q in qs:
        res = [a for a in range(1, q + 1) if math.gcd(a, q) == 1]
        best = 0.0
        for y in range(1, x + 1):
            full = sum(w(n) for n in range(1, y + 1))
            for a in res:
                part = sum(w(n) for n in range(1, y + 1) if n % q == a % q)
                best = max(best, abs(part - full / len(res)))
        total += best
    return total


def test_report_margins():
    r = BoundCheckReport("t", {"x": np.float64(2.0)}, 1, 2)
    assert r.margin == 1 and r.holds and type(r.params["x"]) is float
    assert not BoundCheckReport("t", {}, 2, 2).holds
    assert BoundCheckReport("t", {}, 2, 2, strict=False).holds
    two = BoundCheckReport("t", {}, 1.0, 2.0, rhs_lower=0.5)
    assert two.margin_lower == 0.5 and two.holds
    assert not BoundCheckReport("t", {}, 0.2, 2.0, rhs_lower=0.5).holds


def test_mvt_small(tables):
    r = verify_mvt(10, 1.5, tables)
    # psi(10) = log lcm(1..10), with Lambda(9) = log 3 counted
    assert r.lhs == pytest.approx(math.log(2520))
    assert r.holds
    r = verify_mvt(10, 0.5, tables)
    assert r.lhs == 0 and r.holds
    assert verify_mvt(10**4, 10, tables).holds
    with pytest.raises(DomainError):
        verify_mvt(3, 1, tables)


def test_ebvt_hand(tables):
    for fn, kind in ((verify_ebvt_psi, "psi"), (verify_ebvt_pi, "pi")):
        r = fn(16, 4, 1, tables)
        assert r.lhs == pytest.approx(brute_bv(16, [1, 2, 3, 4], kind), abs=1e-12)
        assert r.holds
        r = fn(16, 3, 3, tables)
        assert r.lhs == 0 and r.holds
    assert brute_bv(16, [2], "pi") == pytest.approx(verify_ebvt_pi(16, 2, 1, tables).lhs)


def test_ebvt_pipeline(tables):
    assert verify_ebvt_psi(10**5, 300, 10, tables).holds
    assert verify_ebvt_pi(10**5, 300, 10, tables).holds
    with pytest.raises(DomainError):
        verify_ebvt_psi(100, 11, 1, tables)
    with pytest.raises(DomainError):
        verify_ebvt_psi(100, 5, 6, tables)


def test_bv_moduli_count():
    # q <= 30 with every prime factor above 3, plus q = 1
    want = 1 + sum(1 for q in range(2, 31) if min(brute_factor(q)) > 3)
    assert bv_moduli_count(30, 3) == want


def test_prime_sum_examples(tables):
    e = {r.ineq: r for r in verify_lemma31("e", 10**6, points=[17], tables=tables)}
    assert e["L3.1e-lower"].lhs == 7
    assert e["L3.1e-lower"].rhs_lower == pytest.approx(17 / math.log(17))
    assert e["L3.1e-lower"].holds
    d = verify_lemma31("d", 10**6, points=[563], tables=tables)
    r = [r for r in d if r.ineq == "L3.1d"][0]
    th = sum(math.log(p) for p in brute_primes(563))
    assert r.lhs == pytest.approx(th) and r.holds
    assert r.rhs_lower is not None


def test_prime_sum_threshold_skip(tables):
    reps = verify_lemma31("a", 10**6, points=[100, 5000, 20000], tables=tables)
    assert {r.params["x"] for r in reps if r.ineq == "L3.1a"} == {20000}


@pytest.mark.parametrize("part", list("abcde"))
def test_prime_sum_grid_1e6(tables, part):
    reps = verify_lemma31(part, 10**6, n_random=30, seed=1, tables=tables, sweep=True)
    bad = [r.row() for r in reps if not r.holds]
    assert not bad and reps


def test_grid_points():
    xs = grid_points(563, 10**5, 10, np.random.default_rng(0))
    assert xs[0] == 563 and 10**5 in xs and len(xs) == 8 + 1 + 10
    assert all(563 <= x <= 10**5 for x in xs)


def test_displayed_constant_margin(big_tables):
    assert displayed_constant_margin(10**7, big_tables) < 0
    assert displayed_constant_margin(10**7, big_tables, displayed=0.77316) > 0


def test_bt(tables):
    r = verify_bt(0, 10**6, tables=tables, fixed=((6, 1, 10**4),))
    assert r == []
    r = verify_bt(1, 10**6, tables=tables)[0]
    assert r.params == {"x": 10**4, "q": 6, "a": 1}
    assert r.lhs == sum(1 for p in brute_primes(10**4) if p % 6 == 1)
    assert r.rhs == pytest.approx(2e4 / (2 * math.log(1e4 / 6)))
    reps = verify_bt(300, 10**6, seed=3, tables=tables)
    assert all(r.holds for r in reps)
    assert any(r.params["q"] > 3 and len(brute_factor(r.params["q"])) > 1 for r in reps)


@pytest.mark.parametrize("x", [1, 10**4, 10**6])
def test_phi_harmonic(tables, ledger, x):
    r = verify_phi_harmonic(x, tables)
    assert r.holds
    if x == 1:
        assert r.lhs == 1 and r.rhs == pytest.approx(ledger.E0.upper)


def test_ap_prime_sum(tables):
    x = 10**6
    assert verify_lemma51(x, 0.5, 1000, tables).lhs == 0
    r = verify_lemma51(x, 0.5, 563, tables)
    assert r.holds
    ps = brute_primes(10**5)
    want = math.fsum(math.log(p) * sum(1 for r_ in ps if r_ % p == 1) for p in ps if 563 < p <= 10**3)
    assert ap_sum_lhs(10**5, 0.6, 563, tables) == pytest.approx(want)
    assert verify_lemma51(x, 0.6, 1000, tables).holds
    assert AP_SUM_THETA_MAX == pytest.approx(0.86363, abs=1e-5)
    for args in ((x, 0.4, 600), (x, 0.9, 600), (x, 0.5, 100), (x, 0.5, 2000)):
        with pytest.raises(DomainError):
            verify_lemma51(*args, tables=tables)
    assert ap_sum_lhs(x, 0.5, 10**3, tables) == 0


def test_lifting(tables):
    assert all(r.holds for r in verify_lifting(40, 10**4, samples=3, tables=tables))


def test_sq_partial_summation(tables):
    assert verify_sq_partial_summation(10**4, 20, 3, tables).holds
    assert verify_sq_partial_summation(10**4, 17.5, 2.5, tables).holds


def test_s_recombination(tables):
    reps = verify_s_recombination(10**4, 10, tables)
    assert all(r.holds for r in reps)
    assert {r.ineq for r in reps} >= {"S1", "S2", "S4", "S-recombination"}


def test_bridge_small(tables):
    reps = verify_bridge(10**3, 6, tables)
    assert all(r.holds for r in reps)
    assert len(reps) == 1 + 4 * 6
