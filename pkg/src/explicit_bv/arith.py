"""Elementary arithmetic-function tables built from a least-prime-factor sieve.

One linear sieve produces ``least_prime_factor``; a second O(N) pass derives
mu, omega, phi, the greatest prime factor and the prime-power base from it.
Lambda is materialised lazily from the prime-power base since it is the only
float64 table and doubles memory at large N.
"""

import functools
import hashlib
import math
import os
import struct
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import CapacityError, DomainError, SearchLimitError
from .summation import compensated_cumsum

# Entries (N + 1) above which build_tables refuses; ~1.9 GB of tables at 10^8.
DEFAULT_MAX_ENTRIES = int(float(os.environ.get("EXPLICIT_BV_MAX_ENTRIES", 1.2e8)))
# Resident block size for segmented scans.
SEGMENT_ENTRIES = 1 << 26

CACHE_MAGIC = b"EBVTAB\x00\x01"
CACHE_VERSION = 1


@numba.njit(cache=True)
def _linear_sieve(n):
    lpf = np.zeros(n + 1, dtype=np.int32)
    primes = np.empty(max(16, int(1.3 * n / max(1.0, math.log(max(n, 2)))) + 16), dtype=np.int32)
    count = 0
    for i in range(2, n + 1):
        if lpf[i] == 0:
            lpf[i] = i
            primes[count] = i
            count += 1
        li = lpf[i]
        for j in range(count):
            p = primes[j]
            if p > li or p * i > n:
                break
            lpf[p * i] = p
    return lpf, primes[:count].copy()


@numba.njit(cache=True)
def _derive(lpf):
    n = lpf.shape[0] - 1
    mu = np.zeros(n + 1, dtype=np.int8)
    omega = np.zeros(n + 1, dtype=np.int8)
    phi = np.zeros(n + 1, dtype=np.int32)
    gpf = np.zeros(n + 1, dtype=np.int32)
    base = np.zeros(n + 1, dtype=np.int32)
    if n >= 1:
        mu[1] = 1
        phi[1] = 1
    for i in range(2, n + 1):
        p = lpf[i]
        m = i // p
        if m % p == 0:
            mu[i] = 0
            omega[i] = omega[m]
            phi[i] = phi[m] * p
            base[i] = p if base[m] == p else 0
        else:
            mu[i] = -mu[m]
            omega[i] = omega[m] + 1
            phi[i] = phi[m] * (p - 1)
            base[i] = p if m == 1 else 0
        gpf[i] = gpf[m] if gpf[m] > p else p
    return mu, omega, phi, gpf, base


@dataclass(eq=False)
class SieveTables:
    """Per-integer arithmetic data for 0 <= n <= limit.

    Index 0 is unused padding.  ``greatest_prime_factor[1]`` is 0 and
    ``prime_power_base[n]`` is p when n = p^k, else 0.
    """

    limit: int
    least_prime_factor: np.ndarray
    mobius: np.ndarray
    omega: np.ndarray
    euler_phi: np.ndarray
    greatest_prime_factor: np.ndarray
    prime_power_base: np.ndarray
    primes: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False)

    def require(self, x):
        if x > self.limit:
            raise CapacityError(
                f"argument {x} exceeds sieve limit {self.limit}",
                requested=x,
                limit=self.limit,
            )

    @property
    def von_mangoldt(self):
        lam = self._cache.get("lam")
        if lam is None:
            base = self.prime_power_base
            lam = np.zeros(self.limit + 1, dtype=np.float64)
            nz = base > 0
            lam[nz] = np.log(base[nz].astype(np.float64))
            self._cache["lam"] = lam
        return lam

    @property
    def prime_powers(self):
        """Sorted prime powers n <= limit (the jump points of psi)."""
        pp = self._cache.get("pp")
        if pp is None:
            pp = np.flatnonzero(self.prime_power_base).astype(np.int64)
            self._cache["pp"] = pp
        return pp

    @property
    def prime_power_logs(self):
        """Lambda(n) at each entry of ``prime_powers``."""
        v = self._cache.get("pplog")
        if v is None:
            v = np.log(self.prime_power_base[self.prime_powers].astype(np.float64))
            self._cache["pplog"] = v
        return v

    @property
    def psi_at_prime_powers(self):
        """psi(n) for n in ``prime_powers``, compensated."""
        v = self._cache.get("psi_pp")
        if v is None:
            v = compensated_cumsum(self.prime_power_logs)
            self._cache["psi_pp"] = v
        return v

    @property
    def theta_at_primes(self):
        v = self._cache.get("theta_p")
        if v is None:
            v = compensated_cumsum(np.log(self.primes.astype(np.float64)))
            self._cache["theta_p"] = v
        return v

    def is_prime(self, n):
        return 2 <= n <= self.limit and self.least_prime_factor[n] == n

    def factorize(self, n):
        """Return ``{p: k}`` for 1 <= n <= limit."""
        self.require(n)
        out = {}
        lpf = self.least_prime_factor
        while n > 1:
            p = int(lpf[n])
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out[p] = k
        return out


def build_tables(N, *, max_entries=None):
    """Sieve all tables up to ``N``.  Cost is O(N)."""
    if max_entries is None:
        max_entries = DEFAULT_MAX_ENTRIES
    N = int(N)
    if N < 1:
        raise CapacityError("sieve limit must be >= 1", requested=N, limit=max_entries)
    if N + 1 > max_entries:
        raise CapacityError(
            f"sieve limit {N} exceeds memory cap of {max_entries} entries",
            requested=N,
            limit=max_entries,
        )
    lpf, primes = _linear_sieve(N)
    mu, omega, phi, gpf, base = _derive(lpf)
    return SieveTables(N, lpf, mu, omega, phi, gpf, base, primes.astype(np.int64))


_shared = {"tables": None}


def get_tables(N, *, max_entries=None):
    """Shared read-only tables covering at least ``N``; rebuilt on growth."""
    N = max(int(math.floor(N)), 1)
    t = _shared["tables"]
    if t is None or t.limit < N:
        t = build_tables(max(N, 10_000), max_entries=max_entries)
        _shared["tables"] = t
    return t


def resolve_tables(x, tables=None):
    """Tables able to answer queries up to ``x``, raising CapacityError if not."""
    x = max(int(math.floor(x)), 1)
    if tables is None:
        return get_tables(x)
    tables.require(x)
    return tables


_ARRAY_FIELDS = (
    ("least_prime_factor", "<i4"),
    ("mobius", "<i1"),
    ("omega", "<i1"),
    ("euler_phi", "<i4"),
    ("greatest_prime_factor", "<i4"),
    ("prime_power_base", "<i4"),
)


def save_tables(tables, path):
    """Write the binary cache: header (magic, version, N, sha256) then arrays."""
    blobs = [np.ascontiguousarray(getattr(tables, name), dtype=dt).tobytes() for name, dt in _ARRAY_FIELDS]
    digest = hashlib.sha256()
    for b in blobs:
        digest.update(b)
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<IQ", CACHE_VERSION, tables.limit))
        fh.write(digest.digest())
        for b in blobs:
            fh.write(b)


def load_tables(path, *, expected_limit=None):
    with open(path, "rb") as fh:
        magic = fh.read(len(CACHE_MAGIC))
        if magic != CACHE_MAGIC:
            raise ValueError(f"{path}: not a table cache")
        version, limit = struct.unpack("<IQ", fh.read(12))
        if version != CACHE_VERSION:
            raise ValueError(f"{path}: unsupported cache version {version}")
        if expected_limit is not None and limit != expected_limit:
            raise ValueError(f"{path}: cache holds N={limit}, expected {expected_limit}")
        stored = fh.read(32)
        digest = hashlib.sha256()
        arrays = {}
        for name, dt in _ARRAY_FIELDS:
            nbytes = (limit + 1) * np.dtype(dt).itemsize
            raw = fh.read(nbytes)
            if len(raw) != nbytes:
                raise ValueError(f"{path}: truncated at {name}")
            digest.update(raw)
            arrays[name] = np.frombuffer(raw, dtype=dt).astype(np.dtype(dt).newbyteorder("="))
    if digest.digest() != stored:
        raise ValueError(f"{path}: checksum mismatch")
    lpf = arrays["least_prime_factor"]
    primes = np.flatnonzero(lpf == np.arange(limit + 1)).astype(np.int64)
    primes = primes[primes >= 2]
    return SieveTables(limit, primes=primes, **arrays)


# ---------------------------------------------------------------------------
# primality and factorisation beyond the tables

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin for n < 3.3 * 10^24."""
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def trial_factorize(n):
    """Factor by trial division; fine for the n <= 10^12 used here."""
    n = int(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def factorize(n, tables=None):
    if tables is not None and n <= tables.limit:
        return tables.factorize(n)
    return trial_factorize(n)


def divisors_from_factorization(fac):
    divs = [1]
    for p, k in fac.items():
        divs = [d * p**j for d in divs for j in range(k + 1)]
    return sorted(divs)


def multiplicative_order(b, p, tables=None):
    """Least k >= 1 with b^k = 1 (mod p), by descending through divisors of p-1."""
    p = int(p)
    b = int(b)
    if p < 2 or not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if b % p == 0:
        raise DomainError(f"{p} divides {b}")
    order = p - 1
    for q in factorize(p - 1, tables):
        while order % q == 0 and pow(b, order // q, p) == 1:
            order //= q
    return order


@numba.njit(cache=True)
def _powmod(b, e, m):
    r = 1
    b %= m
    while e > 0:
        if e & 1:
            r = r * b % m
        b = b * b % m
        e >>= 1
    return r


@numba.njit(cache=True)
def _bulk_orders(primes, b, lpf):
    out = np.zeros(primes.shape[0], dtype=np.int64)
    for i in range(primes.shape[0]):
        p = primes[i]
        if b % p == 0:
            out[i] = 0
            continue
        order = p - 1
        m = p - 1
        while m > 1:
            q = lpf[m]
            while m % q == 0:
                m //= q
            while order % q == 0 and _powmod(b, order // q, p) == 1:
                order //= q
        out[i] = order
    return out


def bulk_multiplicative_orders(primes, b, tables):
    """e_b(p) for each p in ``primes``; 0 where p | b.  Needs p <= 3.03e9."""
    primes = np.asarray(primes, dtype=np.int64)
    if primes.size:
        tables.require(int(primes.max()))
    return _bulk_orders(primes, int(b), tables.least_prime_factor)


def least_prime_in_ap(q, a, *, ceiling=10**12):
    """Smallest prime congruent to a mod q, searched up to ``ceiling``."""
    q = int(q)
    a = int(a)
    if q < 1:
        raise DomainError("modulus must be >= 1")
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) != 1")
    n = a % q
    if n == 0:
        n = q
    while n <= ceiling:
        if is_prime(n):
            return n
        n += q
    raise SearchLimitError(f"no prime = {a} mod {q} below {ceiling}", ceiling=ceiling)


# ---------------------------------------------------------------------------
# segmented prime generation for large ranges


@functools.lru_cache(maxsize=8)
def _base_primes(limit):
    lpf, primes = _linear_sieve(max(limit, 2))
    return primes.astype(np.int64)


@numba.njit(cache=True)
def _sieve_segment(lo, hi, base):
    size = hi - lo
    mark = np.ones(size, dtype=np.bool_)
    for p in base:
        if p * p >= hi:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        for j in range(start - lo, size, p):
            mark[j] = False
    if lo <= 1:
        for j in range(0, min(2 - lo, size)):
            mark[j] = False
    return mark


def primes_in_segments(lo, hi, segment=SEGMENT_ENTRIES):
    """Yield sorted int64 arrays of the primes in [lo, hi), one block at a time."""
    lo = max(int(lo), 0)
    hi = int(hi)
    if hi <= lo:
        return
    base = _base_primes(math.isqrt(hi) + 1)
    start = lo
    while start < hi:
        stop = min(start + segment, hi)
        mark = _sieve_segment(start, stop, base)
        yield np.flatnonzero(mark).astype(np.int64) + start
        start = stop


def chebyshev_segmented(x, segment=SEGMENT_ENTRIES):
    """(psi(x), theta(x), pi(x)) without resident tables; practical to ~10^9."""
    x = int(math.floor(x))
    if x < 2:
        return 0.0, 0.0, 0
    theta_parts = []
    count = 0
    for block in primes_in_segments(2, x + 1, segment):
        count += block.size
        theta_parts.append(float(compensated_cumsum(np.log(block.astype(np.float64)))[-1]) if block.size else 0.0)
    theta = math.fsum(theta_parts)
    # prime powers p^k <= x with k >= 2 need p <= sqrt(x)
    small = _base_primes(math.isqrt(x) + 1)
    extra = []
    for p in small:
        p = int(p)
        if p * p > x:
            break
        k = 2
        pk = p * p
        lp = math.log(p)
        while pk <= x:
            extra.append(lp)
            pk *= p
            k += 1
    psi = math.fsum([theta] + extra)
    return psi, theta, count


@numba.njit(cache=True)
def _one_mod_counts(x, moduli, lpf):
    out = np.zeros(moduli.shape[0], dtype=np.int64)
    for i in range(moduli.shape[0]):
        m = moduli[i]
        c = 0
        for n in range(1 + m, x + 1, m):
            if lpf[n] == n:
                c += 1
        out[i] = c
    return out


def progression_one_counts(x, moduli, tables=None):
    """pi(x; m, 1) for each m in ``moduli`` (m >= 1), by stepping through 1 + km."""
    x = int(x)
    t = resolve_tables(max(x, 2), tables)
    moduli = np.asarray(moduli, dtype=np.int64)
    if moduli.size and moduli.min() < 1:
        raise DomainError("moduli must be >= 1")
    # m = 1 counts every prime (1 + k for k >= 1 covers 2..x)
    return _one_mod_counts(x, moduli, t.least_prime_factor)
