"""Prime-shift statistics: omega(p-1), large prime factors of p-1, orders.

Every quantity here is computed by direct enumeration over p <= x using
sieve tables.  The upper bounds are evaluated separately so that the
exact value and its bound can be compared row by row.
"""

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

import numba
import numpy as np

from .arith import (
    bulk_multiplicative_orders,
    is_prime,
    least_prime_in_ap,
    progression_one_counts,
    resolve_tables,
)
from .constants import default_ledger
from .errors import DomainError
from .reports import BoundCheckReport
from .vaughan import snap_floor

LEAST_PRIME_THETA = (0.5, 0.6105)


# ---------------------------------------------------------------------------
# exact thresholds


def _rational(theta, max_den=10**4):
    """theta as a fraction with a small denominator, or None if it has none."""
    f = Fraction(theta).limit_denominator(max_den)
    return f if abs(float(f) - theta) <= 4e-16 * max(1.0, abs(theta)) else None


def _decimal_power(x, theta):
    with localcontext() as ctx:
        ctx.prec = 50
        X = Decimal(x) if isinstance(x, int) else Decimal(str(x))
        return (X.ln() * Decimal(str(theta))).exp()


def floor_power(x, theta):
    """Largest integer n with n <= x^theta.

    A float estimate decides unless it lies within a guard band of an
    integer; then the comparison is exact, by integer powers when theta is a
    small-denominator rational and by 50-digit arithmetic otherwise.
    """
    if x < 1:
        raise DomainError("need x >= 1")
    v = float(x) ** float(theta)
    k = round(v)
    if abs(v - k) > 1e-9 * max(1.0, v):
        return math.floor(v)
    th = _rational(theta)
    if th is not None:
        X = Fraction(x) if isinstance(x, int) else Fraction(str(x))
        return k if Fraction(k) ** th.denominator <= X**th.numerator else k - 1
    return int(_decimal_power(x, theta).to_integral_value(rounding="ROUND_FLOOR"))


def iroot(n, k):
    """Largest integer r with r^k <= n, by integer Newton steps from above."""
    if n < 0 or k < 1:
        raise DomainError("need n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    r = 1 << -(-n.bit_length() // k)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            return r
        r = s


def floor_power_log(x, theta):
    """floor(x^theta log x).  The product is transcendental for x > 1, so 50
    digits settle the floor."""
    with localcontext() as ctx:
        ctx.prec = 50
        X = Decimal(x) if isinstance(x, int) else Decimal(str(x))
        v = _decimal_power(x, theta) * X.ln()
        return int(v.to_integral_value(rounding="ROUND_FLOOR"))


def below_root(L, p, theta):
    """L < p^(1/theta), exactly."""
    th = _rational(theta)
    if th is None:
        with localcontext() as ctx:
            ctx.prec = 50
            return Decimal(L).ln() * Decimal(str(theta)) < Decimal(p).ln()
    return L**th.numerator < p**th.denominator


# ---------------------------------------------------------------------------
# factor lists of p - 1


@numba.njit(cache=True)
def _shift_factors(primes, lpf):
    offsets = np.zeros(primes.shape[0] + 1, dtype=np.int64)
    buf = np.zeros(primes.shape[0] * 10, dtype=np.int64)
    k = 0
    for i in range(primes.shape[0]):
        m = primes[i] - 1
        while m > 1:
            q = lpf[m]
            buf[k] = q
            k += 1
            while m % q == 0:
                m //= q
        offsets[i + 1] = k
    return offsets, buf[:k]


@dataclass
class ShiftFactors:
    """Distinct prime factors of p - 1 for every prime p <= x, in CSR form."""

    x: int
    primes: np.ndarray
    offsets: np.ndarray
    factors: np.ndarray

    def of(self, i):
        return self.factors[self.offsets[i]: self.offsets[i + 1]]

    @property
    def omega(self):
        return np.diff(self.offsets)


def shift_factors(x, tables=None):
    X = int(math.floor(x))
    t = resolve_tables(max(X, 2), tables)
    p = t.primes[: np.searchsorted(t.primes, X, side="right")]
    off, fac = _shift_factors(p, t.least_prime_factor)
    return ShiftFactors(X, p, off, fac)


def _identity_report(name, params, a, b, rel_tol=0.0, note=""):
    """|a - b| against an allowance (0 for exact identities)."""
    allow = rel_tol * max(abs(a), abs(b), 1.0)
    return BoundCheckReport(name, params, abs(a - b), allow, strict=False,
                            note=note or f"{a!r} vs {b!r}")


# ---------------------------------------------------------------------------
# omega(p - 1)


@dataclass
class TuranReport:
    x: int
    prime_count: int
    sum_omega: int
    sum_omega_sq: int
    variance_sum: float
    variance: float
    progression_sum: int
    pair_progression_sum: int
    checks: list = field(default_factory=list)


def _pair_moduli(primes, X):
    """All products l1*l2 < X of primes l1 < l2 (only those can divide p - 1 <= X - 1)."""
    out = []
    for i, l1 in enumerate(primes):
        if l1 * primes[min(i + 1, primes.size - 1)] >= X:
            break
        j = np.searchsorted(primes, (X - 1) // l1, side="right")
        out.append(l1 * primes[i + 1: j])
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def turan_sums(x, tables=None):
    """Sum of omega(p-1) and omega(p-1)^2 over p <= x, directly from p - 1 and
    through progression counts; both ways must agree exactly."""
    sf = shift_factors(x, tables)
    X = sf.x
    t = resolve_tables(max(X, 2), tables)
    w = sf.omega.astype(np.int64)
    s1, s2 = int(w.sum()), int((w * w).sum())
    n = sf.primes.size
    ll = math.log(math.log(X)) if X >= 3 else 0.0
    var_sum = math.fsum((w - ll) ** 2) if n else 0.0
    prog = int(progression_one_counts(X, sf.primes, t).sum())
    pairs = _pair_moduli(sf.primes, X)
    prog2 = 2 * int(progression_one_counts(X, pairs, t).sum()) + prog
    rep = TuranReport(X, n, s1, s2, var_sum, var_sum / n if n else 0.0, prog, prog2)
    rep.checks = [
        _identity_report("turan-omega", {"x": X}, s1, prog),
        _identity_report("turan-omega-sq", {"x": X}, s2, prog2),
        BoundCheckReport("turan-cauchy-schwarz", {"x": X}, s1 * s1 / n if n else 0.0, s2, strict=False),
    ]
    return rep


def turan_params(x, B, T):
    """U = (log x)^B and V = x^(1/T)/U."""
    U = math.log(x) ** B
    return U, x ** (1 / T) / U


def _inv_pm1(primes):
    return math.fsum(1.0 / (primes.astype(np.float64) - 1.0))


def _abs_deviations(X, qmax, lmin, t, pi_x):
    """sum over q <= qmax with l(q) > lmin of |pi(X; q, 1) - pi(X)/phi(q)|."""
    q = np.arange(1, qmax + 1, dtype=np.int64)
    q = q[(q == 1) | (t.least_prime_factor[q] > lmin)]
    counts = progression_one_counts(X, q, t).astype(np.float64)
    return math.fsum(np.abs(counts - pi_x / t.euler_phi[q]))


@dataclass
class TuranLedger:
    x: int
    U: float
    V: float
    T: float
    pieces: dict
    bounds: dict
    checks: list = field(default_factory=list)


def turan_rhs_ledger(x, U, V, T, tables=None, ledger=None):
    """Exact (I), (II), (III) split of the off-diagonal omega^2 sum with each
    piece's bound, and the full second-moment inequality."""
    if U < 1 or V < 1 or T <= 0:
        raise DomainError("need U, V >= 1 and T > 0")
    if V ** (T + 1) < x:
        raise DomainError(f"need V^(T+1) >= x, got V={V}, T={T}, x={x}")
    if U * V >= x:
        raise DomainError("need U V < x")
    L = default_ledger() if ledger is None else ledger
    X = int(math.floor(x))
    Ui, Vi = snap_floor(U), snap_floor(V)
    t = resolve_tables(max(X, Vi * Vi, 2), tables)
    sf = shift_factors(X, t)
    one, two, three = _turan_pieces(sf.offsets, sf.factors, Ui, Vi)
    p_all = sf.primes
    pi_x = float(p_all.size)
    ell = t.primes[: np.searchsorted(t.primes, X, side="right")]
    ell_U = ell[ell <= Ui]
    ell_V = ell[ell <= Vi]
    ell_UV = ell[(ell > Ui) & (ell <= Vi)]
    sum_U, sum_V, sum_UV = _inv_pm1(ell_U), _inv_pm1(ell_V), _inv_pm1(ell_UV)

    # (I): Brun-Titchmarsh termwise, then the product form
    bt = []
    for l1 in ell_V:
        l2 = ell_U[ell_U < l1]
        if l2.size:
            bt.append(4 * x / ((l1 - 1) * (l2 - 1.0) * np.log(x / (l1 * l2.astype(np.float64)))))
    one_bt = math.fsum(np.concatenate(bt)) if bt else 0.0
    one_prod = 4 * x / math.log(x / (U * V)) * sum_V * sum_U
    w = sf.omega.astype(np.int64)
    s_omega = int(w.sum())
    D2 = _abs_deviations(X, snap_floor(V * V), Ui, t, pi_x)
    two_bnd = pi_x * sum_UV**2 + 2 * D2
    three_bnd = 2 * T * s_omega

    params = {"x": X, "U": U, "V": V, "T": T}
    checks = [
        _identity_report("turan-split", params, one + two + three, int((w * w).sum()) - s_omega),
        BoundCheckReport("turan-I-BT", params, one, one_bt, strict=False),
        BoundCheckReport("turan-I-product", params, one, one_prod, strict=False),
    ]
    bounds = {"I_bt": one_bt, "I_product": one_prod, "II": two_bnd, "III": three_bnd}
    if U >= 10372 and V >= 10372:
        g = lambda y: (L.M.upper + 0.1 / math.log(y) + 4 / (15 * math.log(y) ** 2)
                       + L.sum_inv_p_pm1.upper)
        closed = (4 * x / math.log(x) / (1 - 1 / T) * (math.log(math.log(V)) + g(V))
                  * (math.log(math.log(U)) + g(U)))
        bounds["I_closed"] = closed
        checks.append(BoundCheckReport("turan-I-closed", params, one, closed, strict=False))
    checks += [
        BoundCheckReport("turan-II", params, two, two_bnd, strict=False),
        BoundCheckReport("turan-III", params, three, three_bnd, strict=False),
    ]

    ll = math.log(math.log(x))
    c = 1 + 2 * T - 2 * ll
    D1 = _abs_deviations(X, Vi, Ui, t, pi_x)
    rhs = (one + pi_x * (sum_UV - ll) ** 2 + 2 * D2 + (1 + 2 * T) * pi_x * sum_UV + abs(c) * D1
           + max(c, 0.0) * 2 * x / math.log(x / U) * sum_U + max(c, 0.0) * T * pi_x)
    lhs = math.fsum((w - ll) ** 2)
    checks.append(BoundCheckReport("turan-second-moment", params, lhs, rhs, strict=False))
    bounds["second_moment"] = rhs
    return TuranLedger(X, U, V, T, {"I": one, "II": two, "III": three}, bounds, checks)


@numba.njit(cache=True)
def _turan_pieces(offsets, factors, U, V):
    one = 0
    two = 0
    three = 0
    for i in range(offsets.shape[0] - 1):
        lo, hi = offsets[i], offsets[i + 1]
        for a in range(lo, hi):
            for b in range(a + 1, hi):
                l1 = min(factors[a], factors[b])
                l2 = max(factors[a], factors[b])
                if l2 > V:
                    three += 2
                elif l1 <= U:
                    one += 2
                else:
                    two += 2
    return one, two, three


# ---------------------------------------------------------------------------
# log-weighted large prime factors of p - 1


@dataclass
class GoldfeldReport:
    x: int
    theta: float
    S: float
    small: float
    full: float
    theta_x: float
    E1: float
    E2: float
    checks: list = field(default_factory=list)

    @property
    def identity_rhs(self):
        return self.theta_x - self.E1 - self.E2

    @property
    def ratio(self):
        return self.S / self.x


def _prime_power_moduli(primes, X):
    """(p, p^k) for k >= 2 and p^k <= X - 1, as int64 arrays."""
    ps, qs = [], []
    for p in primes:
        p = int(p)
        q = p * p
        if q > X - 1:
            break
        while q <= X - 1:
            ps.append(p)
            qs.append(q)
            q *= p
    return np.array(ps, dtype=np.int64), np.array(qs, dtype=np.int64)


def e1_bound(x):
    return math.log(math.log(x)) + 0.577215664901532860606512090082 - math.log1p(-0.2 / math.log(x) ** 2)


def e2_bounds(x, tables=None, ledger=None):
    """Three successively coarser upper bounds for E2 = sum_{k>=2, p} (log p) pi(x; p^k, 1)."""
    L = default_ledger() if ledger is None else ledger
    X = int(math.floor(x))
    t = resolve_tables(max(X, 2), tables)
    lx = math.log(x)
    p = t.primes[: np.searchsorted(t.primes, X, side="right")]
    pf = p.astype(np.float64)
    logp = np.log(pf)
    line1, line2a, line2b, line2c = [], [], [], []
    kmax = int(math.floor(lx / math.log(2)))
    for k in range(2, kmax + 1):
        # p <= x^(1/2k)  <=>  p^(2k) <= X, and x^(1/2k) < p <= x^(1/k)  <=>  p^k <= X < p^(2k)
        small = p <= iroot(X, 2 * k)
        mid = (p <= iroot(X, k)) & ~small
        phi = pf[small] ** (k - 1) * (pf[small] - 1)
        pk = pf[small] ** k
        line1.append(2 * x * logp[small] / (phi * np.log(x / pk)))
        line1.append(x * logp[mid] / pf[mid] ** k)
        line2a.append(logp[small] / phi)
        if k == 2:
            line2b.append(x**0.75 * logp[mid] / pf[mid])
        else:
            line2c.append(x ** (2 / 3) * logp[mid] / pf[mid])
    cat = lambda parts: math.fsum(np.concatenate(parts)) if parts else 0.0
    b1 = cat(line1)
    b2 = 4 * x / lx * cat(line2a) + cat(line2b) + cat(line2c)
    sq = p[p <= iroot(X, 2)]
    cu = p[p <= iroot(X, 3)]
    b3 = (4 * x / lx * L.sum_logp_pm1_sq.upper
          + x**0.75 * math.fsum(np.log(sq.astype(np.float64)) / sq)
          + x ** (2 / 3) * lx / 2 * math.fsum(1.0 / cu.astype(np.float64)))
    return b1, b2, b3


def goldfeld_sum(x, theta, tables=None, ledger=None, rel_tol=1e-8):
    """S(theta) = sum_{p1 <= x} sum_{x^theta < p2 | p1 - 1} log p2, and the
    decomposition of the unrestricted sum into theta(x) - E1 - E2."""
    if not 0 < theta < 1:
        raise DomainError("need 0 < theta < 1")
    sf = shift_factors(x, tables)
    X = sf.x
    t = resolve_tables(max(X, 2), tables)
    cut = floor_power(X, theta)
    fac = sf.factors.astype(np.float64)
    logs = np.log(fac)
    big = sf.factors > cut
    S = math.fsum(logs[big])
    small = math.fsum(logs[~big])
    full = math.fsum(logs)
    pf = sf.primes.astype(np.float64)
    theta_x = math.fsum(np.log(pf))
    E1 = -math.fsum(np.log1p(-1.0 / pf))
    pp, qq = _prime_power_moduli(sf.primes, X)
    E2 = math.fsum(np.log(pp.astype(np.float64)) * progression_one_counts(X, qq, t))
    rep = GoldfeldReport(X, theta, S, small, full, theta_x, E1, E2)
    params = {"x": X, "theta": theta}
    rep.checks = [
        _identity_report("goldfeld-split", params, S + small, full, rel_tol),
        _identity_report("goldfeld-identity", params, full, theta_x - E1 - E2, rel_tol),
    ]
    if X >= 2973:
        rep.checks.append(BoundCheckReport("goldfeld-E1", params, E1, e1_bound(X)))
    if X >= 10**4:
        for i, b in enumerate(e2_bounds(X, t, ledger), 1):
            rep.checks.append(BoundCheckReport(f"goldfeld-E2-line{i}", params, E2, b, strict=False))
    return rep


def large_factor_count(x, theta, tables=None):
    """#{p <= x : P(p - 1) > x^theta}."""
    X = int(math.floor(x))
    t = resolve_tables(max(X, 2), tables)
    p = t.primes[: np.searchsorted(t.primes, X, side="right")]
    cut = floor_power(X, theta) if theta > 0 else 0
    return int(np.count_nonzero(t.greatest_prime_factor[p - 1] > cut))


# ---------------------------------------------------------------------------
# multiplicative orders


@dataclass
class OrderReport:
    x: int
    theta: float
    b: int
    count: int
    M2: int
    M2_weighted: float
    checks: list = field(default_factory=list)


def m2_bounds(x, theta, b):
    """Counting and log-weighted bounds for M2, scaled by log2(b) for b != 2."""
    X = x ** (1 - theta) / math.log(x)
    s = math.log2(b)
    f2 = 0.5 * (x ** (2 * (1 - theta)) / math.log(x) + x ** (1 - theta))
    return s * X * (X + 1) / 2, s * f2


def order_count(x, theta, b=2, tables=None):
    """#{p <= x, p not dividing b : e_b(p) > x^theta}, with the M2 pair count."""
    if abs(int(b)) < 2:
        raise DomainError("need |b| >= 2")
    b = int(b)
    sf = shift_factors(x, tables)
    X = sf.x
    t = resolve_tables(max(X, 2), tables)
    orders = bulk_multiplicative_orders(sf.primes, b, t)
    ok = orders > 0
    count = int(np.count_nonzero(orders > floor_power(X, theta)))
    cut = floor_power_log(X, theta)
    M2, weighted = _m2(sf.offsets, sf.factors, orders, cut)
    rep = OrderReport(X, theta, b, count, int(M2), float(weighted))
    params = {"x": X, "theta": theta, "b": b}
    cnt_b, w_b = m2_bounds(X, theta, abs(b))
    long_shift = int(np.count_nonzero(ok & (sf.primes - 1 > floor_power(X, theta))))
    rep.checks = [
        BoundCheckReport("M2-count", params, rep.M2, cnt_b, strict=False),
        BoundCheckReport("M2-weighted", params, rep.M2_weighted, w_b, strict=False),
        BoundCheckReport("order-vs-shift", params, count, long_shift, strict=False),
    ]
    return rep


@numba.njit(cache=True)
def _m2(offsets, factors, orders, cut):
    n = 0
    w = 0.0
    for i in range(offsets.shape[0] - 1):
        e = orders[i]
        if e == 0:
            continue
        for j in range(offsets[i], offsets[i + 1]):
            q = factors[j]
            if q > cut and e % q != 0:
                n += 1
                w += np.log(q)
    return n, w


# ---------------------------------------------------------------------------
# least prime in 1 mod p


@dataclass
class LeastPrimeScan:
    x: float
    theta: float
    scanned: int
    witnesses: list
    least: dict

    @property
    def first(self):
        return self.witnesses[0] if self.witnesses else None


def least_prime_scan(x, theta, tables=None):
    """Primes p in (x^theta, x] with L(p, 1) < p^(1/theta)."""
    lo, hi = LEAST_PRIME_THETA
    if not lo <= theta <= hi:
        raise DomainError(f"theta={theta} outside [{lo}, {hi}]")
    if x < 2:
        return LeastPrimeScan(x, theta, 0, [], {})
    X = int(math.floor(x))
    t = resolve_tables(max(X, 2), tables)
    cut = floor_power(X, theta)
    p = t.primes[(t.primes > cut) & (t.primes <= X)]
    least = {}
    wit = []
    for v in p.tolist():
        L = least_prime_in_ap(v, 1)
        least[v] = L
        if below_root(L, v, theta):
            wit.append(v)
    return LeastPrimeScan(x, theta, len(least), wit, least)


def is_least_prime_witness(p, theta):
    """Whether the prime p satisfies L(p, 1) < p^(1/theta)."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return below_root(least_prime_in_ap(p, 1), p, theta)
