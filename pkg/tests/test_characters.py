import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from explicit_bv.characters import (
    character_group,
    conductor,
    evaluate,
    induced_from,
    interval_sum_maxima,
    primitive_characters,
    primitive_count_formula,
    primitive_inducing,
)
from explicit_bv.errors import DomainError

moduli = st.integers(1, 300)


def brute_conductor(chi):
    """Least d | q with chi(n) = 1 for every unit n = 1 mod d."""
    q = chi.modulus
    for d in range(1, q + 1):
        if q % d:
            continue
        if all(abs(chi(n) - 1) < 1e-9 for n in range(1, q + 1) if math.gcd(n, q) == 1 and n % d == 1 % d):
            return d
    return q


def test_small_groups():
    g1 = character_group(1)
    assert len(g1) == 1 and g1[0](5) == 1
    g3 = character_group(3)
    assert len(g3) == 2
    nonprin = [c for c in g3 if not c.is_principal][0]
    assert nonprin(2) == pytest.approx(-1)
    g8 = character_group(8)
    assert len(g8) == 4 and len(g8.primitive_indices()) == 2


def test_values_and_conductors():
    g6 = character_group(6)
    chi0 = g6.principal
    assert chi0(5) == 1 and chi0(4) == 0
    assert conductor(chi0) == 1
    assert [c.conductor for c in g6 if not c.is_principal] == [3]
    assert [c.conductor for c in character_group(4) if not c.is_principal] == [4]
    g5 = character_group(5)
    quartic = [c for c in g5 if abs(c(2) - 1j) < 1e-12][0]
    assert quartic(4) == pytest.approx(-1)


def test_mod7_matches_discrete_logs():
    g = character_group(7)
    gen = g.generators[0][0]
    log = {pow(gen, k, 7): k for k in range(6)}
    chi = g.character([1])
    for n in range(1, 7):
        assert chi(n) == pytest.approx(cmath.exp(2j * math.pi * log[n] / 6), abs=1e-12)


def test_domain():
    with pytest.raises(DomainError):
        character_group(0)


@given(moduli)
def test_group_structure(q):
    g = character_group(q)
    assert len(g) == g.phi == int(np.prod(g.orders))
    assert len(g.primitive_indices()) == primitive_count_formula(q)


@given(moduli, st.integers(0, 10**6), st.integers(0, 10**6))
def test_multiplicative_and_support(q, m, n):
    for chi in list(character_group(q))[:8]:
        a, b = chi(m), chi(n)
        assert chi(m * n) == pytest.approx(a * b, abs=1e-9)
        assert (abs(a) < 1e-12) == (math.gcd(m, q) != 1)
        assert abs(a) in (0.0, pytest.approx(1.0, abs=1e-12))


@given(st.integers(1, 60))
def test_orthogonality(q):
    g = character_group(q)
    V = g.value_matrix()
    units = [a for a in range(q) if math.gcd(a, q) == 1]
    G = V[:, units].conj().T @ V[:, units]
    assert np.allclose(G, g.phi * np.eye(len(units)), atol=1e-9 * g.phi)


@given(st.integers(1, 80))
def test_conductor_and_lifting(q):
    for chi in character_group(q):
        assert chi.conductor == brute_conductor(chi)
        assert chi.is_primitive == (chi.conductor == q)
        star = primitive_inducing(chi)
        assert star.is_primitive and star.modulus == chi.conductor
        for n in range(1, 2 * q):
            if math.gcd(n, q) == 1:
                assert star(n) == pytest.approx(chi(n), abs=1e-9)


def test_primitive_counts():
    assert len(list(primitive_characters(1))) == 1
    assert len(list(primitive_characters(2))) == 0
    g = character_group(12)
    assert len(list(primitive_characters(12))) == sum(brute_conductor(c) == 12 for c in g)


def test_induced_from_roundtrip():
    star = list(primitive_characters(5))[1]
    chi = induced_from(star, 15)
    assert chi.conductor == 5
    assert primitive_inducing(chi).index == star.index


def test_evaluate_matches_call():
    chi = character_group(20)[3]
    assert evaluate(chi, 7) == chi(7)
    assert np.allclose(chi.at(np.arange(40)), [chi(n) for n in range(40)])


@given(st.integers(3, 60), st.data())
def test_interval_maxima_brute(q, data):
    g = character_group(q)
    idx = g.primitive_indices()
    if idx.size == 0:
        return
    lo = data.draw(st.lists(st.integers(1, q * q), min_size=1, max_size=5))
    hi = [data.draw(st.integers(a, q * q)) for a in lo]
    got = interval_sum_maxima(g, idx, lo, hi)
    for k, i in enumerate(idx):
        chi = g[i]
        want = max(abs(sum(chi(n) for n in range(a, b + 1))) for a, b in zip(lo, hi))
        assert got[k] == pytest.approx(want, abs=1e-9)
