"""Dirichlet character groups.

A character mod q is stored as an exponent vector relative to fixed CRT
generators of (Z/qZ)^*.  Its value at n is the root of unity
zeta_e^k(n) with e the group exponent and

    k(n) = sum_j a_j * (e / ord_j) * log_j(n)  (mod e),

so values are exact integers k (or -1 for zero) until converted to complex.
Discrete logs are kept per prime-power component, which costs O(q) memory.
"""

import functools
import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .arith import divisors_from_factorization, trial_factorize
from .errors import CapacityError, DomainError

MAX_MODULUS = 10**7
# q * rank above which the dense (q x rank) log matrix is not materialised
LOG_MATRIX_CAP = 1 << 24


def _primitive_root_mod_prime(p):
    if p == 2:
        return 1
    fac = trial_factorize(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in fac):
            return g
    raise AssertionError("unreachable")


def _component_generators(p, k):
    """Generators and their discrete-log tables for (Z/p^k)^*.

    Returns a list of (generator, order, log_table) where log_table has
    length p^k and holds -1 at non-units.
    """
    m = p**k
    if p == 2:
        if k == 1:
            # trivial group; an order-1 generator keeps the unit mask
            return [(1, 1, np.array([-1, 0], dtype=np.int64))]
        if k == 2:
            table = np.full(4, -1, dtype=np.int64)
            table[1] = 0
            table[3] = 1
            return [(3, 2, table)]
        half = 1 << (k - 2)
        sign = np.full(m, -1, dtype=np.int64)
        five = np.full(m, -1, dtype=np.int64)
        v = 1
        for j in range(half):
            sign[v] = 0
            five[v] = j
            sign[m - v] = 1
            five[m - v] = j
            v = v * 5 % m
        return [(m - 1, 2, sign), (5, half, five)]
    g = _primitive_root_mod_prime(p)
    if k >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    order = m - m // p
    table = np.full(m, -1, dtype=np.int64)
    v = 1
    for j in range(order):
        table[v] = j
        v = v * g % m
    return [(g, order, table)]


@numba.njit(cache=True)
def _kvalues(exps, weights, e, logs):
    """k-values of every character (rows of exps) at every residue row of logs."""
    m = exps.shape[0]
    n = logs.shape[0]
    r = logs.shape[1]
    out = np.empty((m, n), dtype=np.int64)
    for i in range(n):
        if logs[i, 0] < 0:
            for c in range(m):
                out[c, i] = -1
            continue
        for c in range(m):
            s = 0
            for j in range(r):
                s += exps[c, j] * weights[j] * logs[i, j]
            out[c, i] = s % e
    return out


@numba.njit(cache=True)
def _trivial_on(exps, weights, e, kernel_logs, active):
    m = exps.shape[0]
    r = kernel_logs.shape[1]
    out = np.zeros(m, dtype=np.bool_)
    for c in range(m):
        if not active[c]:
            continue
        ok = True
        for i in range(kernel_logs.shape[0]):
            s = 0
            for j in range(r):
                s += exps[c, j] * weights[j] * kernel_logs[i, j]
            if s % e != 0:
                ok = False
                break
        out[c] = ok
    return out


class CharacterGroup:
    """The full group of Dirichlet characters modulo ``q``."""

    def __init__(self, q):
        q = int(q)
        if q < 1:
            raise DomainError("modulus must be >= 1")
        if q > MAX_MODULUS:
            raise CapacityError(f"modulus {q} above cap {MAX_MODULUS}", requested=q, limit=MAX_MODULUS)
        self.modulus = q
        self.factorization = trial_factorize(q)
        gens = []
        comp_moduli = []
        comp_tables = []
        for p, k in sorted(self.factorization.items()):
            m = p**k
            rest = q // m
            for g, order, table in _component_generators(p, k):
                # CRT lift: element = g mod m, = 1 mod rest
                lifted = g if rest == 1 else (g * rest * pow(rest, -1, m) + m * pow(m, -1, rest)) % q
                gens.append((lifted, order))
                comp_moduli.append(m)
                comp_tables.append(table)
        if not gens:
            gens.append((1 % q, 1))
            comp_moduli.append(1)
            comp_tables.append(np.zeros(1, dtype=np.int64))
        self.generators = gens
        self.orders = np.array([o for _, o in gens], dtype=np.int64)
        self.exponent = int(np.lcm.reduce(self.orders)) if gens else 1
        self.weights = np.array([self.exponent // o for o in self.orders], dtype=np.int64)
        self._comp_moduli = comp_moduli
        self._comp_tables = comp_tables
        self._unit_mask = None
        self._logs = None
        self._conductors = None

    @property
    def rank(self):
        return len(self.generators)

    def __len__(self):
        return int(np.prod(self.orders))

    @functools.cached_property
    def phi(self):
        return len(self)

    @functools.cached_property
    def roots(self):
        """The e-th roots of unity, indexed by k."""
        k = np.arange(self.exponent)
        return np.exp(2j * np.pi * k / self.exponent)

    def logs_of(self, n):
        """Discrete logs (len(n) x rank); rows are -1 where gcd(n, q) > 1."""
        n = np.asarray(n, dtype=np.int64) % self.modulus
        cols = [table[n % m] for m, table in zip(self._comp_moduli, self._comp_tables)]
        logs = np.stack(cols, axis=1)
        bad = (logs < 0).any(axis=1)
        logs[bad] = -1
        return logs

    @property
    def logs(self):
        """Dense discrete-log matrix over residues 0..q-1 (cached when small)."""
        if self._logs is not None:
            return self._logs
        logs = self.logs_of(np.arange(self.modulus))
        if self.modulus * max(self.rank, 1) <= LOG_MATRIX_CAP:
            self._logs = logs
        return logs

    @property
    def units(self):
        if self._unit_mask is None:
            r = np.arange(self.modulus)
            self._unit_mask = np.gcd(r, self.modulus) == 1
        return np.flatnonzero(self._unit_mask)

    def exponent_vectors(self, indices=None):
        """Mixed-radix decode of character indices into exponent vectors."""
        if indices is None:
            indices = np.arange(len(self))
        indices = np.asarray(indices, dtype=np.int64)
        out = np.zeros((indices.shape[0], self.rank), dtype=np.int64)
        rem = indices.copy()
        for j in range(self.rank - 1, -1, -1):
            out[:, j] = rem % self.orders[j]
            rem //= self.orders[j]
        return out

    def index_of(self, exps):
        idx = 0
        for a, o in zip(exps, self.orders):
            idx = idx * int(o) + int(a) % int(o)
        return idx

    def __getitem__(self, index):
        index = int(index)
        if not 0 <= index < len(self):
            raise IndexError(index)
        exps = tuple(int(a) for a in self.exponent_vectors([index])[0])
        return DirichletCharacter(self, exps, index)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def character(self, exps):
        exps = tuple(int(a) % int(o) for a, o in zip(exps, self.orders))
        return DirichletCharacter(self, exps, self.index_of(exps))

    @property
    def principal(self):
        return self[0]

    def kvalue_matrix(self, indices=None, residues=None):
        """Exact k-values (chars x residues); -1 marks chi(n) = 0."""
        exps = self.exponent_vectors(indices)
        logs = self.logs if residues is None else self.logs_of(residues)
        return _kvalues(exps, self.weights, self.exponent, logs)

    def value_matrix(self, indices=None, residues=None):
        k = self.kvalue_matrix(indices, residues)
        vals = self.roots[np.where(k < 0, 0, k)]
        vals[k < 0] = 0
        return vals

    def _kernel_logs(self, d):
        """Logs of units n with n = 1 mod d."""
        n = np.arange(1, self.modulus + 1, d) % self.modulus
        logs = self.logs_of(n)
        return logs[logs[:, 0] >= 0]

    def conductors(self):
        """Conductor of every character, by direct induction test over divisors."""
        if self._conductors is not None:
            return self._conductors
        count = len(self)
        cond = np.zeros(count, dtype=np.int64)
        exps = self.exponent_vectors()
        active = np.ones(count, dtype=np.bool_)
        for d in divisors_from_factorization(self.factorization):
            hit = _trivial_on(exps, self.weights, self.exponent, self._kernel_logs(d), active)
            cond[hit] = d
            active &= ~hit
            if not active.any():
                break
        self._conductors = cond
        return cond

    def primitive_indices(self):
        return np.flatnonzero(self.conductors() == self.modulus)


@dataclass(frozen=True)
class DirichletCharacter:
    group: CharacterGroup = field(repr=False, compare=False)
    exponents: tuple
    index: int

    @property
    def modulus(self):
        return self.group.modulus

    @property
    def is_principal(self):
        return all(a == 0 for a in self.exponents)

    @property
    def order(self):
        o = 1
        for a, m in zip(self.exponents, self.group.orders):
            o = math.lcm(o, int(m) // math.gcd(int(a), int(m)))
        return o

    @functools.cached_property
    def kvalues(self):
        """k-values over residues 0..q-1."""
        return self.group.kvalue_matrix([self.index])[0]

    @functools.cached_property
    def values(self):
        k = self.kvalues
        v = self.group.roots[np.where(k < 0, 0, k)]
        v[k < 0] = 0
        return v

    @functools.cached_property
    def conductor(self):
        return conductor(self)

    @property
    def is_primitive(self):
        return self.conductor == self.modulus

    def __call__(self, n):
        return evaluate(self, n)

    def at(self, n):
        """Vectorised values at an integer array."""
        n = np.asarray(n, dtype=np.int64)
        return self.values[n % self.modulus]


@functools.lru_cache(maxsize=512)
def character_group(q):
    """Shared, cached group for modulus q (groups are immutable)."""
    return CharacterGroup(q)


def evaluate(chi, n):
    """chi(n) as a complex double (exact root of unity or 0)."""
    k = int(chi.kvalues[int(n) % chi.modulus])
    if k < 0:
        return 0j
    return complex(chi.group.roots[k])


def conductor(chi):
    """Least d | q such that chi is induced from a character mod d."""
    group = chi.group
    kv = chi.kvalues
    q = group.modulus
    for d in divisors_from_factorization(group.factorization):
        n = np.arange(1, q + 1, d) % q
        k = kv[n]
        if np.all(k[k >= 0] == 0):
            return d
    return q


def primitive_characters(q):
    group = character_group(q)
    for i in group.primitive_indices():
        yield group[i]


def primitive_count_formula(q):
    """Number of primitive characters mod q: sum_{d|q} mu(d) phi(q/d)."""
    fac = trial_factorize(q)
    total = 0
    for d in divisors_from_factorization(fac):
        fd = trial_factorize(d)
        if any(k > 1 for k in fd.values()):
            continue
        mu = (-1) ** len(fd)
        m = q // d
        phi = m
        for p in trial_factorize(m):
            phi = phi // p * (p - 1)
        total += mu * phi
    return total


def induced_from(chi_star, q):
    """The character mod q (a multiple of chi_star's modulus) induced by chi_star."""
    if q % chi_star.modulus:
        raise DomainError("target modulus must be a multiple of the source modulus")
    group = character_group(q)
    # match values on the generators of the target group
    exps = []
    e = group.exponent
    for (g, order), w in zip(group.generators, group.weights):
        k = int(chi_star.kvalues[g % chi_star.modulus])
        # chi_star(g) = zeta_{e*}^k ; need a with zeta_order^a equal to it
        frac = k * order
        e_star = chi_star.group.exponent
        if frac % e_star:
            raise AssertionError("generator image outside target order")
        exps.append(frac // e_star)
    return group.character(exps)


def primitive_inducing(chi):
    """The primitive character chi* mod the conductor of chi that induces it."""
    d = chi.conductor
    group = character_group(d)
    for i in group.primitive_indices():
        cand = group[i]
        if induced_from(cand, chi.modulus).index == chi.index:
            return cand
    raise AssertionError("no primitive character induces chi")


# ---------------------------------------------------------------------------
# bulk Polya-Vinogradov sweep


@numba.njit(cache=True)
def _pv_max(exps, weights, e, logs, roots, lo, hi):
    m = exps.shape[0]
    q = logs.shape[0]
    r = logs.shape[1]
    out = np.zeros(m, dtype=np.float64)
    prefix = np.zeros(q + 1, dtype=np.complex128)
    for c in range(m):
        s = 0j
        prefix[0] = 0j
        # prefix[t] = sum_{n=1}^{t} chi(n); residue q == 0
        for t in range(1, q + 1):
            res = t % q
            if logs[res, 0] >= 0:
                k = 0
                for j in range(r):
                    k += exps[c, j] * weights[j] * logs[res, j]
                s += roots[k % e]
            prefix[t] = s
        full = prefix[q]
        best = 0.0
        for i in range(lo.shape[0]):
            a = lo[i] - 1
            b = hi[i]
            fb = (b // q) * full + prefix[b % q]
            fa = (a // q) * full + prefix[a % q]
            v = abs(fb - fa)
            if v > best:
                best = v
        out[c] = best
    return out


def interval_sum_maxima(group, indices, lo, hi):
    """max over the given intervals [lo_i, hi_i] of |sum chi(n)|, per character."""
    exps = group.exponent_vectors(indices)
    logs = group.logs
    return _pv_max(exps, group.weights, group.exponent, logs, group.roots,
                   np.asarray(lo, dtype=np.int64), np.asarray(hi, dtype=np.int64))
