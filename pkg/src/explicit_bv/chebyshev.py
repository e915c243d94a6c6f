"""Chebyshev functions, their progression and twisted variants, and the
running maxima that appear on the left of the mean value and
Bombieri-Vinogradov inequalities.

Every function of y here is a right-continuous step function that jumps only
at prime powers, so suprema over real y are taken over jump points (plus the
value just below each jump where that matters) rather than over all y.
"""

import math
from dataclasses import dataclass

import numba
import numpy as np

from .arith import resolve_tables, trial_factorize
from .characters import character_group
from .errors import CapacityError
from .parallel import parallel_map
from .summation import compensated_cumsum, compensated_cumsum_complex_rows, ordered_sum

# complex entries (characters x jump points) allowed in one mvt_lhs call
DEFAULT_MVT_BUDGET = 5 * 10**8


def _floor(x):
    return int(math.floor(x))


def psi(x, tables=None):
    x = _floor(x)
    if x < 2:
        return 0.0
    t = resolve_tables(x, tables)
    i = np.searchsorted(t.prime_powers, x, side="right")
    return float(t.psi_at_prime_powers[i - 1])


def theta(x, tables=None):
    x = _floor(x)
    if x < 2:
        return 0.0
    t = resolve_tables(x, tables)
    i = np.searchsorted(t.primes, x, side="right")
    return float(t.theta_at_primes[i - 1])


def pi(x, tables=None):
    x = _floor(x)
    if x < 2:
        return 0
    t = resolve_tables(x, tables)
    return int(np.searchsorted(t.primes, x, side="right"))


def _pp_upto(x, t):
    i = np.searchsorted(t.prime_powers, x, side="right")
    return t.prime_powers[:i], t.prime_power_logs[:i]


def _primes_upto(x, t):
    return t.primes[: np.searchsorted(t.primes, x, side="right")]


def psi_progression(x, q, a, tables=None):
    x = _floor(x)
    if x < 2:
        return 0.0
    t = resolve_tables(x, tables)
    n, lam = _pp_upto(x, t)
    return math.fsum(lam[n % q == a % q])


def theta_progression(x, q, a, tables=None):
    x = _floor(x)
    if x < 2:
        return 0.0
    t = resolve_tables(x, tables)
    p = _primes_upto(x, t)
    return math.fsum(np.log(p[p % q == a % q].astype(np.float64)))


def pi_progression(x, q, a, tables=None):
    x = _floor(x)
    if x < 2:
        return 0
    t = resolve_tables(x, tables)
    p = _primes_upto(x, t)
    return int(np.count_nonzero(p % q == a % q))


def _pp_exponents(n, base):
    return np.rint(np.log(n.astype(np.float64)) / np.log(base.astype(np.float64))).astype(np.int64)


def pi1(x, tables=None):
    """sum over prime powers p^k <= x of 1/k."""
    x = _floor(x)
    if x < 2:
        return 0.0
    t = resolve_tables(x, tables)
    n, _ = _pp_upto(x, t)
    k = _pp_exponents(n, t.prime_power_base[n])
    return math.fsum(1.0 / k)


def pi1_progression(x, q, a, tables=None):
    x = _floor(x)
    if x < 2:
        return 0.0
    t = resolve_tables(x, tables)
    n, _ = _pp_upto(x, t)
    sel = n[n % q == a % q]
    k = _pp_exponents(sel, t.prime_power_base[sel])
    return math.fsum(1.0 / k)


# ---------------------------------------------------------------------------
# twisted sums


@dataclass
class TwistedMaxReport:
    modulus: int
    character: int
    x: float
    max: float
    argmax: int


def twisted_prefix(x, chi, tables=None):
    """Jump points n <= x and psi(n, chi) there (compensated)."""
    x = _floor(x)
    t = resolve_tables(max(x, 2), tables)
    n, lam = _pp_upto(x, t)
    vals = chi.values[n % chi.modulus] * lam
    cum = compensated_cumsum_complex_rows(vals[None, :])[0]
    return n, cum


def psi_twisted(y, chi, tables=None):
    n, cum = twisted_prefix(y, chi, tables)
    return complex(cum[-1]) if n.size else 0j


def psi_prime(y, chi, tables=None):
    """psi(y, chi) with psi(y) removed when chi is principal."""
    v = psi_twisted(y, chi, tables)
    return v - psi(y, tables) if chi.is_principal else v


def psi_twisted_prefix_max(x, chi, tables=None):
    """max over y <= x of |psi(y, chi)|, evaluated at the jump points."""
    n, cum = twisted_prefix(x, chi, tables)
    if n.size == 0:
        return TwistedMaxReport(chi.modulus, chi.index, x, 0.0, 0)
    mags = np.abs(cum)
    i = int(np.argmax(mags))
    return TwistedMaxReport(chi.modulus, chi.index, x, float(mags[i]), int(n[i]))


def twisted_maxima(x, q, indices=None, tables=None):
    """max_y |psi(y, chi)| for each character index of the group mod q.

    Defaults to the primitive characters.  Returns (indices, maxima).
    """
    x = _floor(x)
    group = character_group(q)
    if indices is None:
        indices = group.primitive_indices()
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0 or x < 2:
        return indices, np.zeros(indices.size)
    t = resolve_tables(x, tables)
    n, lam = _pp_upto(x, t)
    vals = group.value_matrix(indices, residues=n % q) * lam[None, :]
    cum = compensated_cumsum_complex_rows(vals)
    return indices, np.abs(cum).max(axis=1)


def mvt_cost(x, Q):
    """Entries touched by mvt_lhs: sum_{q<=Q} phi(q) times #prime powers <= x."""
    x = _floor(x)
    Qi = _floor(Q)
    if Qi < 1 or x < 2:
        return 0
    n_pp = int(1.3 * x / max(math.log(x), 1.0)) + 2 * math.isqrt(x) + 10
    phisum = 0
    for q in range(1, Qi + 1):
        ph = q
        for p in trial_factorize(q):
            ph = ph // p * (p - 1)
        phisum += ph
    return phisum * n_pp


def mvt_lhs(x, Q, tables=None, *, budget=DEFAULT_MVT_BUDGET, threads=None):
    """sum_{q<=Q} q/phi(q) sum*_chi max_{y<=x} |psi(y, chi)|."""
    Qi = _floor(Q) if Q >= 1 else 0
    if Qi < 1:
        return 0.0
    cost = mvt_cost(x, Q)
    if cost > budget:
        raise CapacityError(
            f"mvt_lhs(x={x}, Q={Q}) needs ~{cost:.3g} entries (budget {budget:.3g})",
            requested=cost,
            limit=budget,
            estimate=cost,
        )
    t = resolve_tables(max(_floor(x), 2), tables)

    def one(q):
        _, m = twisted_maxima(x, q, tables=t)
        if m.size == 0:
            return 0.0
        phi = character_group(q).phi
        return q / phi * math.fsum(m)

    return ordered_sum(parallel_map(one, range(1, Qi + 1), threads))


# ---------------------------------------------------------------------------
# deviation maxima


@dataclass
class DeviationMaxReport:
    modulus: int
    x: float
    residues: np.ndarray
    per_residue: np.ndarray
    max: float
    argmax_a: int
    argmax_y: int


@numba.njit(cache=True)
def _deviation_scan(jumps, weights, cls, nclass, phi, x):
    n = jumps.shape[0]
    hi = np.full(nclass, -np.inf)
    lo = np.full(nclass, np.inf)
    hi_y = np.zeros(nclass, dtype=np.int64)
    lo_y = np.zeros(nclass, dtype=np.int64)
    C = np.zeros(nclass)
    Cc = np.zeros(nclass)
    G = 0.0
    Gc = 0.0
    for i in range(n):
        a = cls[i]
        lam = weights[i]
        gprev = G + Gc
        t = G + lam
        if abs(G) >= abs(lam):
            Gc += (G - t) + lam
        else:
            Gc += (lam - t) + G
        G = t
        g = G + Gc
        if a >= 0:
            if jumps[i] > 2:
                v = C[a] + Cc[a] - gprev / phi
                if v < lo[a]:
                    lo[a] = v
                    lo_y[a] = jumps[i] - 1
                if v > hi[a]:
                    hi[a] = v
                    hi_y[a] = jumps[i] - 1
            s = C[a]
            t = s + lam
            if abs(s) >= abs(lam):
                Cc[a] += (s - t) + lam
            else:
                Cc[a] += (lam - t) + s
            C[a] = t
            v = C[a] + Cc[a] - g / phi
            if v > hi[a]:
                hi[a] = v
                hi_y[a] = jumps[i]
            if v < lo[a]:
                lo[a] = v
                lo_y[a] = jumps[i]
        if i == 0:
            for b in range(nclass):
                v = C[b] + Cc[b] - g / phi
                if v > hi[b]:
                    hi[b] = v
                    hi_y[b] = jumps[0]
                if v < lo[b]:
                    lo[b] = v
                    lo_y[b] = jumps[0]
    g = G + Gc
    for b in range(nclass):
        v = C[b] + Cc[b] - g / phi
        if v > hi[b]:
            hi[b] = v
            hi_y[b] = x
        if v < lo[b]:
            lo[b] = v
            lo_y[b] = x
    best = np.zeros(nclass)
    best_y = np.zeros(nclass, dtype=np.int64)
    for b in range(nclass):
        if hi[b] >= -lo[b]:
            best[b] = abs(hi[b])
            best_y[b] = hi_y[b]
        else:
            best[b] = -lo[b]
            best_y[b] = lo_y[b]
    return best, best_y


def coprime_residues(q):
    r = np.arange(q, dtype=np.int64)
    return r[np.gcd(r, q) == 1]


def deviation_max(x, q, tables=None, *, kind="psi"):
    """Per-residue max over 2 <= y <= x of |f(y;q,a) - f(y)/phi(q)|.

    ``kind`` is "psi" (weights Lambda at prime powers) or "pi" (weight 1
    at primes).  Only residues coprime to q are reported.
    """
    x = _floor(x)
    q = int(q)
    residues = coprime_residues(q)
    phi = residues.size
    if x < 2:
        z = np.zeros(phi)
        return DeviationMaxReport(q, x, residues, z, 0.0, int(residues[0]), 2)
    t = resolve_tables(x, tables)
    if kind == "psi":
        jumps, weights = _pp_upto(x, t)
    elif kind == "pi":
        jumps = _primes_upto(x, t)
        weights = np.ones(jumps.size)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    index = np.full(q, -1, dtype=np.int64)
    index[residues] = np.arange(phi)
    cls = index[jumps % q]
    best, best_y = _deviation_scan(jumps, weights, cls, phi, float(phi), x)
    j = int(np.argmax(best))
    return DeviationMaxReport(q, x, residues, best, float(best[j]), int(residues[j]), int(best_y[j]))


def least_prime_factor(q):
    """l(q); l(1) is +inf so the q = 1 term passes every l(q) > Q1 filter."""
    if q == 1:
        return math.inf
    return min(trial_factorize(q))


def bv_moduli(Q, Q1):
    return [q for q in range(1, _floor(Q) + 1) if least_prime_factor(q) > Q1]


def _bv_lhs(x, Q, Q1, kind, tables, threads):
    if Q < 1:
        return 0.0
    t = resolve_tables(max(_floor(x), 2), tables)
    qs = bv_moduli(Q, Q1)
    parts = parallel_map(lambda q: deviation_max(x, q, t, kind=kind).max, qs, threads)
    return ordered_sum(parts)


def bv_lhs_psi(x, Q, Q1, tables=None, *, threads=None):
    return _bv_lhs(x, Q, Q1, "psi", tables, threads)


def bv_lhs_pi(x, Q, Q1, tables=None, *, threads=None):
    return _bv_lhs(x, Q, Q1, "pi", tables, threads)


def class_step_values(x, q, tables=None, *, kind="psi"):
    """Dense view for bridge checks: jump points and f(y;q,a) - f(y)/phi(q)
    after each jump, one row per coprime residue."""
    x = _floor(x)
    t = resolve_tables(x, tables)
    if kind == "psi":
        jumps, weights = _pp_upto(x, t)
    elif kind == "pi1":
        jumps, _ = _pp_upto(x, t)
        weights = 1.0 / _pp_exponents(jumps, t.prime_power_base[jumps])
    else:
        jumps = _primes_upto(x, t)
        weights = np.ones(jumps.size)
    residues = coprime_residues(q)
    phi = residues.size
    total = compensated_cumsum(weights)
    rows = np.empty((phi, jumps.size))
    r = jumps % q
    for i, a in enumerate(residues):
        rows[i] = compensated_cumsum(np.where(r == a, weights, 0.0)) - total / phi
    return jumps, residues, rows
