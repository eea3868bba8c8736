"""Theta-series kernels.

Everything downstream (sigma, zeta, wp, wp') is assembled from the first
Jacobi theta function and its first three derivatives in the reduced
variable u.  The series

    theta1(u)    =  sum_n  a_n sin(k_n u)
    theta1'(u)   =  sum_n  a_n k_n cos(k_n u)
    theta1''(u)  = -sum_n  a_n k_n^2 sin(k_n u)
    theta1'''(u) = -sum_n  a_n k_n^3 cos(k_n u)

with a_n = 2 (-1)^n q^((n+1/2)^2) and k_n = 2n+1 converges like q^(n^2),
so after argument reduction to the fundamental cell a few dozen terms give
double precision for every nome this package accepts.

This is the hot inner loop of the whole package (boundary traces, contour
quadrature and verification grids all funnel through it), hence the numba
variant; the numpy variant is the portable fallback and the reference for
the benchmark in ``benchmarks/bench_kernels.py``.
"""

from __future__ import annotations

import cmath

import numpy as np

from ._backend import HAVE_NUMBA


def theta1_bundle_numpy(u, coef, kodd):
    """Evaluate theta1 and its first three u-derivatives on an array.

    Parameters
    ----------
    u : complex128 ndarray, reduced arguments (|Im u| bounded by the cell).
    coef : float64 ndarray, signed series coefficients a_n.
    kodd : float64 ndarray, odd integers k_n = 2n+1.

    Returns (t1, t1p, t1pp, t1ppp) as complex128 arrays shaped like u.
    """
    t1 = np.zeros_like(u, dtype=np.complex128)
    t1p = np.zeros_like(t1)
    t1pp = np.zeros_like(t1)
    t1ppp = np.zeros_like(t1)
    for a, k in zip(coef, kodd):
        e = np.exp(1j * k * u)
        inv = 1.0 / e
        sin_ = (e - inv) * -0.5j
        cos_ = (e + inv) * 0.5
        t1 += a * sin_
        t1p += (a * k) * cos_
        t1pp -= (a * k * k) * sin_
        t1ppp -= (a * k * k * k) * cos_
    return t1, t1p, t1pp, t1ppp


if HAVE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def theta1_bundle_numba(u, coef, kodd):  # pragma: no cover - numba path
        n = u.shape[0]
        t1 = np.empty(n, np.complex128)
        t1p = np.empty(n, np.complex128)
        t1pp = np.empty(n, np.complex128)
        t1ppp = np.empty(n, np.complex128)
        m = coef.shape[0]
        for i in range(n):
            s0 = 0.0j
            s1 = 0.0j
            s2 = 0.0j
            s3 = 0.0j
            ui = u[i]
            for j in range(m):
                a = coef[j]
                k = kodd[j]
                e = cmath.exp(1j * k * ui)
                inv = 1.0 / e
                sin_ = (e - inv) * -0.5j
                cos_ = (e + inv) * 0.5
                s0 += a * sin_
                s1 += a * k * cos_
                s2 -= a * k * k * sin_
                s3 -= a * k * k * k * cos_
            t1[i] = s0
            t1p[i] = s1
            t1pp[i] = s2
            t1ppp[i] = s3
        return t1, t1p, t1pp, t1ppp

    theta1_bundle = theta1_bundle_numba
else:
    theta1_bundle_numba = None
    theta1_bundle = theta1_bundle_numpy
