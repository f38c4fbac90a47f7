# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; same contracts as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, expm1

from .errors import PivotBreakdownError

cnp.import_array()

cdef double PIVOT_RTOL = 1e-14
cdef double SERIES_CUT = 1e-4


cdef inline double _bern(double z) noexcept nogil:
    if fabs(z) < SERIES_CUT:
        return 1.0 - z / 2.0 + z * z / 12.0
    return z / expm1(z)


def bernoulli(z):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] zz = np.ascontiguousarray(np.ravel(z), dtype=np.float64)
    cdef Py_ssize_t i, n = zz.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    with nogil:
        for i in range(n):
            out[i] = _bern(zz[i])
    return out.reshape(np.shape(z))


def sg_coefficients(dphi, g, double sign):
    cdef const double[::1] dp = np.ascontiguousarray(dphi, dtype=np.float64)
    cdef const double[::1] gg = np.ascontiguousarray(g, dtype=np.float64)
    cdef Py_ssize_t i, m = dp.shape[0]
    lower = np.empty(m)
    upper = np.empty(m)
    diag = np.zeros(m + 1)
    cdef double[::1] lo = lower
    cdef double[::1] up = upper
    cdef double[::1] di = diag
    cdef double bf, bb
    with nogil:
        for i in range(m):
            bf = _bern(sign * dp[i])
            bb = _bern(-sign * dp[i])
            di[i] += gg[i] * bf
            di[i + 1] += gg[i] * bb
            up[i] = -gg[i] * bb
            lo[i] = -gg[i] * bf
    return lower, diag, upper


def thomas(lower, diag, upper, rhs):
    cdef const double[::1] a = np.ascontiguousarray(lower, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(diag, dtype=np.float64)
    cdef const double[::1] c = np.ascontiguousarray(upper, dtype=np.float64)
    cdef const double[::1] d = np.ascontiguousarray(rhs, dtype=np.float64)
    cdef Py_ssize_t n = b.shape[0]
    cdef Py_ssize_t i, bad = -1
    cdef double piv = 0.0, scale, ai, ci
    cp_arr = np.zeros(n)
    x_arr = np.empty(n)
    cdef double[::1] cp = cp_arr
    cdef double[::1] x = x_arr
    with nogil:
        piv = b[0]
        scale = fabs(b[0]) + (fabs(c[0]) if n > 1 else 0.0)
        if fabs(piv) <= PIVOT_RTOL * scale or piv == 0.0:
            bad = 0
        else:
            cp[0] = c[0] / piv if n > 1 else 0.0
            x[0] = d[0] / piv
            for i in range(1, n):
                ai = a[i - 1]
                piv = b[i] - ai * cp[i - 1]
                ci = c[i] if i < n - 1 else 0.0
                scale = fabs(ai) + fabs(b[i]) + fabs(ci)
                if fabs(piv) <= PIVOT_RTOL * scale or piv == 0.0:
                    bad = i
                    break
                cp[i] = ci / piv
                x[i] = (d[i] - ai * x[i - 1]) / piv
            if bad < 0:
                for i in range(n - 2, -1, -1):
                    x[i] = x[i] - cp[i] * x[i + 1]
    if bad >= 0:
        raise PivotBreakdownError(bad, piv)
    return x_arr
