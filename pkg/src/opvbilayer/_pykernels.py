"""Reference implementations of the hot kernels (numpy and plain Python)."""

from __future__ import annotations

import numpy as np

from .errors import PivotBreakdownError

PIVOT_RTOL = 1e-14
SERIES_CUT = 1e-4


def bernoulli(z):
    """B(z) = z/(exp(z) - 1), with a series branch near zero."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < SERIES_CUT
    zs = z[small]
    out[small] = 1.0 - zs / 2 + zs * zs / 12
    zb = z[~small]
    with np.errstate(over="ignore"):
        out[~small] = zb / np.expm1(zb)
    return out


def sg_coefficients(dphi, g, sign):
    """Tridiagonal coefficients of the exponentially fitted flux divergence.

    Row i of the returned system reads
    ``lower[i-1] u[i-1] + diag[i] u[i] + upper[i] u[i+1]`` and equals
    ``sign * (J[i+1/2] - J[i-1/2])`` where ``J`` is the carrier flux and
    ``g = mu/h`` per face.  Boundary rows contain only their single face.
    """
    dphi = np.asarray(dphi, dtype=float)
    g = np.asarray(g, dtype=float)
    s = float(sign)
    bf = bernoulli(s * dphi)
    bb = bernoulli(-s * dphi)
    n = dphi.size + 1
    diag = np.zeros(n)
    diag[:-1] += g * bf
    diag[1:] += g * bb
    upper = -g * bb
    lower = -g * bf
    return lower, diag, upper


def thomas(lower, diag, upper, rhs):
    """Solve a tridiagonal system by forward elimination and back substitution.

    Raises
    ------
    PivotBreakdownError
        When a pivot is negligible relative to its row.
    """
    a = [float(v) for v in lower]
    b = [float(v) for v in diag]
    c = [float(v) for v in upper]
    d = [float(v) for v in rhs]
    n = len(b)
    cp = [0.0] * n
    dp = [0.0] * n
    piv = b[0]
    scale = abs(b[0]) + (abs(c[0]) if n > 1 else 0.0)
    if abs(piv) <= PIVOT_RTOL * scale or piv == 0.0:
        raise PivotBreakdownError(0, piv)
    cp[0] = c[0] / piv if n > 1 else 0.0
    dp[0] = d[0] / piv
    for i in range(1, n):
        ai = a[i - 1]
        piv = b[i] - ai * cp[i - 1]
        ci = c[i] if i < n - 1 else 0.0
        scale = abs(ai) + abs(b[i]) + abs(ci)
        if abs(piv) <= PIVOT_RTOL * scale or piv == 0.0:
            raise PivotBreakdownError(i, piv)
        cp[i] = ci / piv
        dp[i] = (d[i] - ai * dp[i - 1]) / piv
    x = [0.0] * n
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return np.array(x)
