"""Vaughan's decomposition of Lambda, the S-sums built from it, and the large
sieve machinery used to bound them.

Integer cutoffs n <= U are taken against ``snap_floor(U)`` so that values like
(10^6)^(1/3) = 99.99999999999997 still admit n = 100.
"""

import math
from dataclasses import dataclass

import numba
import numpy as np

from .arith import resolve_tables, trial_factorize
from .characters import character_group
from .errors import CapacityError, DomainError
from .reports import BoundCheckReport
from .summation import compensated_cumsum_complex_rows

MAX_COMPONENT_N = 10**7
DEFAULT_S_BUDGET = 2 * 10**9


def snap_floor(v, rel=1e-9):
    k = round(v)
    if abs(v - k) <= rel * max(1.0, abs(v)):
        return int(k)
    return math.floor(v)


@dataclass(frozen=True)
class VaughanParams:
    U: float
    V: float

    def __post_init__(self):
        if not (self.U >= 1 and self.V >= 1):
            raise DomainError(f"need U, V >= 1, got U={self.U}, V={self.V}")

    @property
    def Uf(self):
        return snap_floor(self.U)

    @property
    def Vf(self):
        return snap_floor(self.V)

    @property
    def UVf(self):
        return snap_floor(self.U * self.V)

    @classmethod
    def for_mvt(cls, x, Q):
        """U = V = x^(1/3) for Q <= x^(1/3), U = V = x^(2/3)/Q up to x^(1/2)."""
        c = x ** (1 / 3)
        if Q <= c * (1 + 1e-12):
            return cls(c, c)
        if Q <= math.sqrt(x) * (1 + 1e-12):
            u = x ** (2 / 3) / Q
            return cls(u, u)
        raise DomainError(f"no U, V choice for Q={Q} > x^(1/2)")


# ---------------------------------------------------------------------------
# single-n components by divisor enumeration


def _divisors(fac):
    divs = [1]
    for p, k in fac.items():
        divs = [d * p**e for d in divs for e in range(k + 1)]
    return sorted(divs)


def _mu(fac):
    if any(k > 1 for k in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def _lam(fac):
    return math.log(next(iter(fac))) if len(fac) == 1 else 0.0


def lambda_components(n, params, tables=None):
    """(lambda1, lambda2, lambda3, lambda4) at n by enumerating divisors."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    if n > MAX_COMPONENT_N:
        raise CapacityError(f"n={n} above divisor budget", requested=n, limit=MAX_COMPONENT_N)
    U, V = params.Uf, params.Vf
    fac_of = {}

    def fac(m):
        f = fac_of.get(m)
        if f is None:
            f = trial_factorize(m) if tables is None else tables.factorize(m)
            fac_of[m] = f
        return f

    divs = _divisors(fac(n))
    l1 = _lam(fac(n)) if n <= U else 0.0
    l2 = math.fsum(_mu(fac(d)) * math.log(n // d) for d in divs if d <= V)
    l3_terms = []
    l4_terms = []
    for m in divs:
        lm = _lam(fac(m))
        if lm == 0.0:
            continue
        rest = n // m
        if m <= U:
            # t = m d divides n, with r = n / t free
            for d in _divisors(fac(rest)):
                if d <= V:
                    mu = _mu(fac(d))
                    if mu:
                        l3_terms.append(-lm * mu)
        elif rest > V:
            bk = sum(_mu(fac(d)) for d in _divisors(fac(rest)) if d <= V)
            if bk:
                l4_terms.append(-lm * bk)
    return l1, l2, math.fsum(l3_terms), math.fsum(l4_terms)


# ---------------------------------------------------------------------------
# bulk tables


@numba.njit(cache=True)
def _coefficients(N, Uf, Vf, T, mu, lam):
    """a_t for t <= T and b_k for k <= N."""
    a = np.zeros(T + 1)
    for m in range(2, min(Uf, T) + 1):
        lm = lam[m]
        if lm == 0.0:
            continue
        for d in range(1, min(Vf, T // m) + 1):
            if mu[d] != 0:
                a[m * d] += lm * mu[d]
    b = np.zeros(N + 1)
    for d in range(1, min(Vf, N) + 1):
        if mu[d] != 0:
            for k in range(d, N + 1, d):
                b[k] += mu[d]
    return a, b


@numba.njit(cache=True)
def _lambda_arrays(N, Uf, Vf, mu, lam, a, b):
    logn = np.zeros(N + 1)
    for h in range(2, N + 1):
        logn[h] = math.log(h)
    l1 = np.zeros(N + 1)
    for n in range(2, min(Uf, N) + 1):
        l1[n] = lam[n]
    l2 = np.zeros(N + 1)
    for d in range(1, min(Vf, N) + 1):
        if mu[d] != 0:
            for h in range(2, N // d + 1):
                l2[d * h] += mu[d] * logn[h]
    l3a = np.zeros(N + 1)
    l3b = np.zeros(N + 1)
    T = a.shape[0] - 1
    for t in range(1, min(T, N) + 1):
        at = a[t]
        if at == 0.0:
            continue
        dst = l3a if t <= Uf else l3b
        for n in range(t, N + 1, t):
            dst[n] -= at
    l4 = np.zeros(N + 1)
    for m in range(Uf + 1, N // (Vf + 1) + 1):
        lm = lam[m]
        if lm == 0.0:
            continue
        for k in range(Vf + 1, N // m + 1):
            if b[k] != 0.0:
                l4[m * k] -= lm * b[k]
    return l1, l2, l3a, l3b, l4


@dataclass
class VaughanTables:
    """lambda_1..lambda_4 over 0..N with lambda_3 split at t = U.

    ``l3a`` and ``l3b`` are the t <= U and U < t <= UV parts of lambda_3,
    so l1 + l2 + l3a + l3b + l4 = Lambda.
    """

    N: int
    params: VaughanParams
    a: np.ndarray
    b: np.ndarray
    l1: np.ndarray
    l2: np.ndarray
    l3a: np.ndarray
    l3b: np.ndarray
    l4: np.ndarray

    @property
    def l3(self):
        return self.l3a + self.l3b

    def total(self):
        return self.l1 + self.l2 + self.l3a + self.l3b + self.l4


def coefficient_tables(N, params, tables=None):
    """(a, b): a_t for t <= min(N, UV), b_k for k <= N."""
    N = int(N)
    t = resolve_tables(max(N, 2), tables)
    T = min(N, params.UVf)
    return _coefficients(N, params.Uf, params.Vf, T, t.mobius, t.von_mangoldt)


def lambda_arrays(N, params, tables=None):
    N = int(N)
    t = resolve_tables(max(N, 2), tables)
    a, b = coefficient_tables(N, params, t)
    parts = _lambda_arrays(N, params.Uf, params.Vf, t.mobius, t.von_mangoldt, a, b)
    return VaughanTables(N, params, a, b, *parts)


# ---------------------------------------------------------------------------
# S-sums for one character


@dataclass
class SSplit:
    """S1..S4 at one (chi, y).

    S3p and S3pp are the t <= U and U < t <= UV parts of S3 itself, so
    S1 + S2 + S3p + S3pp + S4 = psi(y, chi).
    """

    modulus: int
    character: int
    y: int
    S1: complex
    S2: complex
    S3p: complex
    S3pp: complex
    S4: complex
    psi: complex

    @property
    def reconstruction(self):
        return self.S1 + self.S2 + self.S3p + self.S3pp + self.S4

    @property
    def relative_error(self):
        return abs(self.reconstruction - self.psi) / max(abs(self.psi), 1.0)


def _csum(z):
    z = np.asarray(z, dtype=np.complex128)
    return complex(math.fsum(z.real), math.fsum(z.imag))


def _prefix(vals):
    out = np.zeros(vals.size + 1, dtype=np.complex128)
    out[1:] = compensated_cumsum_complex_rows(vals[None, :])[0]
    return out


def s_split(x, y, chi, params, tables=None, coeffs=None):
    """Evaluate each S_i in its own form: S2 as a double sum over d and h, S3
    through a_t against character partial sums, S4 through b_k."""
    Y = int(math.floor(y))
    if Y > x:
        raise DomainError("need y <= x")
    t = resolve_tables(max(int(x), 2), tables)
    if coeffs is None:
        coeffs = coefficient_tables(int(x), params, t)
    a, b = coeffs
    q = chi.modulus
    n = np.arange(Y + 1)
    vals = chi.values[n % q].astype(np.complex128)
    vals[0] = 0
    lam = t.von_mangoldt[: Y + 1]
    U, V, UV = params.Uf, params.Vf, params.UVf

    S1 = _csum(lam[: min(U, Y) + 1] * vals[: min(U, Y) + 1])

    logs = np.zeros(Y + 1)
    logs[1:] = np.log(n[1:].astype(np.float64))
    H = _prefix(vals[1:] * logs[1:])
    d = np.arange(1, min(V, Y) + 1)
    S2 = _csum(t.mobius[d] * vals[d] * H[Y // d])

    C = _prefix(vals[1:])
    tt = np.arange(1, min(UV, Y, a.size - 1) + 1)
    terms = -a[tt] * vals[tt] * C[Y // tt]
    small = tt <= U
    S3p = _csum(terms[small])
    S3pp = _csum(terms[~small])

    B = _prefix(b[1: Y + 1] * vals[1:])
    m = np.arange(U + 1, Y // (V + 1) + 1)
    m = m[lam[m] != 0] if m.size else m
    S4 = _csum(-lam[m] * vals[m] * (B[Y // m] - B[min(V, Y)])) if m.size else 0j

    psi = _csum(lam[1:] * vals[1:])
    return SSplit(q, chi.index, Y, S1, S2, S3p, S3pp, S4, psi)


def at_bound_holds(a):
    """|a_t| <= log t for every t in the table."""
    t = np.arange(1, a.size)
    return bool(np.all(np.abs(a[1:]) <= np.log(t) + 1e-12))


def s2_pathway(y, chi, params):
    """(|S2|, (log y) * sum_{d<=V} max_w |sum_{w<=h<=y/d} chi(h)|)."""
    Y = int(math.floor(y))
    split = s_split(Y, Y, chi, params)
    C = _prefix(chi.values[np.arange(1, Y + 1) % chi.modulus].astype(np.complex128))
    total = []
    for d in range(1, min(params.Vf, Y) + 1):
        K = Y // d
        total.append(float(np.abs(C[K] - C[:K]).max()))
    bound = math.log(Y) * math.fsum(total) if Y > 1 else 0.0
    return abs(split.S2), bound


@numba.njit(cache=True)
def _piece_maxima(kv, roots, q, lam_rows):
    """max_y |sum_{n<=y} lam_rows[i, n] chi(n)| for each character and row."""
    nchar = kv.shape[0]
    nrow, N1 = lam_rows.shape
    out = np.zeros((nchar, nrow))
    for c in range(nchar):
        for r in range(nrow):
            sr = 0.0
            si = 0.0
            cr = 0.0
            ci = 0.0
            best = 0.0
            for n in range(1, N1):
                w = lam_rows[r, n]
                if w == 0.0:
                    continue
                k = kv[c, n % q]
                if k < 0:
                    continue
                z = roots[k]
                vr = w * z.real
                vi = w * z.imag
                t = sr + vr
                if abs(sr) >= abs(vr):
                    cr += (sr - t) + vr
                else:
                    cr += (vr - t) + sr
                sr = t
                t = si + vi
                if abs(si) >= abs(vi):
                    ci += (si - t) + vi
                else:
                    ci += (vi - t) + si
                si = t
                m = math.hypot(sr + cr, si + ci)
                if m > best:
                    best = m
            out[c, r] = best
    return out


PIECES = ("S1", "S2", "S3p", "S3pp", "S4", "psi")


def s_maxima(x, Q, params, tables=None, *, budget=DEFAULT_S_BUDGET):
    """sum_{q<=Q} q/phi(q) sum*_chi max_{y<=x} |S_i(y)| for each piece and psi."""
    x = int(math.floor(x))
    Qi = int(math.floor(Q))
    t = resolve_tables(max(x, 2), tables)
    cost = 6 * x * sum(character_group(q).phi for q in range(1, Qi + 1))
    if cost > budget:
        raise CapacityError(f"s_maxima needs ~{cost:.3g} steps", requested=cost, limit=budget, estimate=cost)
    vt = lambda_arrays(x, params, t)
    rows = np.stack([vt.l1, vt.l2, vt.l3a, vt.l3b, vt.l4, t.von_mangoldt[: x + 1]])
    totals = {k: [] for k in PIECES}
    for q in range(1, Qi + 1):
        g = character_group(q)
        prim = g.primitive_indices()
        if prim.size == 0:
            continue
        mx = _piece_maxima(g.kvalue_matrix(prim), g.roots, q, rows)
        w = q / g.phi
        for i, k in enumerate(PIECES):
            totals[k].append(w * math.fsum(mx[:, i]))
    return {k: math.fsum(v) for k, v in totals.items()}


def s_bounds(x, Q, params, A0, c3, c4):
    """The five aggregated S-bounds, keyed like ``s_maxima``."""
    U, V = params.U, params.V
    return {
        "S1": A0 * U * Q**2,
        "S2": (x + Q**2.5 * V) * math.log(x * V) ** 2,
        "S3p": (x + Q**2.5 * U) * math.log(x * U) ** 2,
        "S3pp": c3 / math.log(2) * (x + Q * math.sqrt(x * U * V) + math.sqrt(2) * Q * x / math.sqrt(U)
                                    + Q**2 * math.sqrt(x)) * math.log(2 * U * V) ** 2 * math.log(4 * x),
        "S4": c4 * (x + Q * x / math.sqrt(V) + math.sqrt(2) * Q * x / math.sqrt(U) + Q**2 * math.sqrt(x))
        * math.log(2 * x / V) ** 1.5 * (3 + math.log(V)) * math.log(4 * x),
    }


# ---------------------------------------------------------------------------
# large sieve and bilinear forms


def _primitive_moduli(Q):
    for q in range(1, int(math.floor(Q)) + 1):
        g = character_group(q)
        prim = g.primitive_indices()
        if prim.size:
            yield q, g, prim


def large_sieve_check(m0, M, Q, coefficients):
    """sum_{q<=Q} q/phi(q) sum*_chi |sum_{m0<m<=m0+M} a_m chi(m)|^2 vs (M + Q^2) sum |a_m|^2."""
    a = np.asarray(coefficients, dtype=np.complex128)
    if a.size != M:
        raise ValueError("need exactly M coefficients")
    m = np.arange(m0 + 1, m0 + M + 1)
    parts = []
    for q, g, prim in _primitive_moduli(Q):
        s = g.value_matrix(prim, residues=m % q) @ a
        parts.append(q / g.phi * math.fsum(np.abs(s) ** 2))
    lhs = math.fsum(parts)
    rhs = (M + Q**2) * math.fsum(np.abs(a) ** 2)
    return BoundCheckReport("LSI", {"Q": Q, "n": M}, lhs, rhs, strict=False, note=f"m0={m0}")


def bilinear_max_check(am, bn, m0, n0, Q, c3):
    """Bilinear large-sieve bound on sum_q q/phi(q) sum*_chi max_y |sum_{mn<=y} a_m b_n chi(mn)|.

    The max over y is exact: the partial sum is evaluated after every
    distinct product value mn.
    """
    am = np.asarray(am, dtype=np.complex128)
    bn = np.asarray(bn, dtype=np.complex128)
    M = m0 + am.size - 1
    N = n0 + bn.size - 1
    ms = np.arange(m0, M + 1)
    ns = np.arange(n0, N + 1)
    prod = np.multiply.outer(ms, ns).ravel()
    coef = np.multiply.outer(am, bn).ravel()
    order = np.argsort(prod, kind="stable")
    prod = prod[order]
    coef = coef[order]
    last = np.r_[prod[1:] != prod[:-1], True]
    parts = []
    for q, g, prim in _primitive_moduli(Q):
        vals = g.value_matrix(prim, residues=prod % q) * coef[None, :]
        cum = compensated_cumsum_complex_rows(vals)[:, last]
        mx = np.abs(cum).max(axis=1) if cum.shape[1] else np.zeros(prim.size)
        parts.append(q / g.phi * math.fsum(mx))
    lhs = math.fsum(parts)
    rhs = (c3 * math.sqrt(am.size + Q**2) * math.sqrt(bn.size + Q**2)
           * math.sqrt(math.fsum(np.abs(am) ** 2)) * math.sqrt(math.fsum(np.abs(bn) ** 2))
           * math.log(2 * M * N))
    return BoundCheckReport("LSLeq", {"Q": Q}, lhs, rhs, strict=False,
                            note=f"m in [{m0},{M}], n in [{n0},{N}]")


def mobius_square_sum(x, V, tables=None):
    """sum_{k<=x} (sum_{d|k, d<=V} mu(d))^2 vs (4/3) x (log e^3 V)^2."""
    X = int(math.floor(x))
    t = resolve_tables(max(X, 2), tables)
    _, b = _coefficients(X, 1, snap_floor(V), 0, t.mobius, t.von_mangoldt)
    lhs = float(np.sum(b[1:] ** 2))
    rhs = 4 / 3 * x * (3 + math.log(V)) ** 2
    return BoundCheckReport("L3.1g", {"x": x, "V": V}, lhs, rhs, strict=False)


def dyadic_blocks(lo, hi):
    """Blocks (M, 2M], M = 2^alpha, meeting (lo, hi]; empty when lo >= hi."""
    if not lo > 0:
        raise DomainError("need lo > 0")
    if hi <= lo:
        return []
    alpha = math.floor(math.log2(lo)) - 1
    out = []
    while 2.0**alpha < hi:
        M = 2.0**alpha
        if 2 * M > lo:
            out.append((M, 2 * M))
        alpha += 1
    return out


def dyadic_count_bound(lo, hi):
    return math.log(2 * hi / lo) / math.log(2)
