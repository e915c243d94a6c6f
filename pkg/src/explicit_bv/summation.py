"""Compensated floating-point accumulation.

Long sums of logarithms (psi at 10^9 has ~5*10^7 terms) lose several digits
with naive left-to-right addition.  Everything here uses Neumaier's variant of
Kahan summation, which stays accurate when a summand exceeds the running total.
"""

import math

import numba
import numpy as np

EPS = np.finfo(np.float64).eps


@numba.njit(cache=True)
def neumaier_sum(values):
    s = 0.0
    c = 0.0
    for v in values:
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


@numba.njit(cache=True)
def compensated_cumsum(values):
    """Running sums with Neumaier compensation; out[i] = sum(values[:i+1])."""
    n = values.shape[0]
    out = np.empty(n, dtype=np.float64)
    s = 0.0
    c = 0.0
    for i in range(n):
        v = values[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i] = s + c
    return out


@numba.njit(cache=True)
def compensated_cumsum_complex_rows(values):
    """Row-wise compensated running sums of a 2-D complex array."""
    rows, cols = values.shape
    out = np.empty((rows, cols), dtype=np.complex128)
    for r in range(rows):
        sr = 0.0
        cr = 0.0
        si = 0.0
        ci = 0.0
        for j in range(cols):
            vr = values[r, j].real
            vi = values[r, j].imag
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
            out[r, j] = complex(sr + cr, si + ci)
    return out


def rounding_radius(abs_total, n_terms=1):
    """Generous bound on accumulated rounding error of a compensated sum.

    Covers one-ulp error in each evaluated term plus the compensated
    summation error itself.
    """
    return 4.0 * EPS * abs_total + n_terms * EPS * EPS * abs_total


def fsum(values):
    """Exactly rounded sum of a Python iterable (stdlib ``math.fsum``)."""
    return math.fsum(values)


def ordered_sum(parts):
    """Reduce per-task partial results in the given (deterministic) order."""
    return math.fsum(parts)
