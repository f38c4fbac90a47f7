"""Real Airy functions Ai, Ai', Bi, Bi'.

Inside ``|z| <= ZMAX`` values come from Taylor expansions about a table of
anchor points.  The table is generated once from the exact values at the
origin: Bi everywhere and Ai on the negative axis are continued outward from
zero, while Ai on the positive axis, where it decays, is continued backward
from the asymptotic region so that every step runs in a stable direction.
Outside the table the standard asymptotic expansions are summed up to their
smallest term.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["airy", "airy_scaled", "AIRY_AT_ZERO"]

ZMAX = 9.0
_STEP = 0.25
_ORDER = 40

_G13 = math.gamma(1.0 / 3.0)
_G23 = math.gamma(2.0 / 3.0)
AIRY_AT_ZERO = (
    1.0 / (3.0 ** (2.0 / 3.0) * _G23),
    -1.0 / (3.0 ** (1.0 / 3.0) * _G13),
    1.0 / (3.0 ** (1.0 / 6.0) * _G23),
    3.0 ** (1.0 / 6.0) / _G13,
)


def _taylor(y0, dy0, z0, t, order=_ORDER):
    """Value and slope at ``z0 + t`` of the solution of y'' = z y.

    Uses a_{k+2} = (z0 a_k + a_{k-1}) / ((k+2)(k+1)) for y = sum a_k t^k.
    """
    a_km1, a_k, a_k1 = 0.0, y0, dy0
    y = y0 + dy0 * t
    dy = dy0
    tpow = t
    for k in range(order):
        a_k2 = (z0 * a_k + a_km1) / ((k + 2) * (k + 1))
        dy += (k + 2) * a_k2 * tpow
        tpow *= t
        y += a_k2 * tpow
        a_km1, a_k, a_k1 = a_k, a_k1, a_k2
    return y, dy


def _taylor_vec(y0, dy0, z0, t, order=_ORDER):
    a_km1 = np.zeros_like(t)
    a_k = np.asarray(y0, dtype=float).copy()
    a_k1 = np.asarray(dy0, dtype=float).copy()
    y = a_k + a_k1 * t
    dy = a_k1.copy()
    tpow = t.copy()
    for k in range(order):
        a_k2 = (z0 * a_k + a_km1) / ((k + 2) * (k + 1))
        dy = dy + (k + 2) * a_k2 * tpow
        tpow = tpow * t
        y = y + a_k2 * tpow
        a_km1, a_k, a_k1 = a_k, a_k1, a_k2
    return y, dy


def _u_coefficients(n):
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k))
    u = np.array(u)
    k = np.arange(n)
    v = -(6 * k + 1) / (6 * k - 1) * u
    return u, v


_U, _V = _u_coefficients(60)


def _series(zeta, coeffs, alternate):
    """Sum coeffs_k (+-1)^k zeta^-k up to the smallest term."""
    zeta = np.asarray(zeta, dtype=float)
    total = np.zeros_like(zeta)
    term_prev = np.full_like(zeta, np.inf)
    active = np.ones(zeta.shape, dtype=bool)
    inv = 1.0 / zeta
    p = np.ones_like(zeta)
    for k, c in enumerate(coeffs):
        term = c * p * ((-1.0) ** k if alternate else 1.0)
        mag = np.abs(term)
        active &= mag < np.abs(term_prev)
        total = np.where(active, total + term, total)
        term_prev = np.where(active, term, term_prev)
        p = p * inv
        if not active.any():
            break
    return total


def _oscillatory_sums(zeta, coeffs):
    """Even/odd alternating sums used on the negative axis."""
    even = coeffs[0::2] * (-1.0) ** np.arange(coeffs[0::2].size)
    odd = coeffs[1::2] * (-1.0) ** np.arange(coeffs[1::2].size)
    inv2 = 1.0 / zeta**2
    se = np.zeros_like(zeta)
    so = np.zeros_like(zeta)
    p = np.ones_like(zeta)
    prev = np.full_like(zeta, np.inf)
    active = np.ones(zeta.shape, dtype=bool)
    for ce, co in zip(even, odd):
        te = ce * p
        to = co * p / zeta
        mag = np.maximum(np.abs(te), np.abs(to))
        active &= mag < prev
        se = np.where(active, se + te, se)
        so = np.where(active, so + to, so)
        prev = np.where(active, mag, prev)
        p = p * inv2
        if not active.any():
            break
    return se, so


def _asym_positive(z):
    """Scaled values e^{z3} Ai, e^{z3} Ai', e^{-z3} Bi, e^{-z3} Bi' for large z."""
    zeta = 2.0 / 3.0 * z**1.5
    q = z**0.25
    sp = math.sqrt(math.pi)
    ai = _series(zeta, _U, True) / (2 * sp * q)
    aip = -q * _series(zeta, _V, True) / (2 * sp)
    bi = _series(zeta, _U, False) / (sp * q)
    bip = q * _series(zeta, _V, False) / sp
    return ai, aip, bi, bip


def _asym_negative(z):
    x = -z
    zeta = 2.0 / 3.0 * x**1.5
    q = x**0.25
    sp = math.sqrt(math.pi)
    ue, uo = _oscillatory_sums(zeta, _U)
    ve, vo = _oscillatory_sums(zeta, _V)
    th = zeta - math.pi / 4
    c, s = np.cos(th), np.sin(th)
    ai = (c * ue + s * uo) / (sp * q)
    bi = (-s * ue + c * uo) / (sp * q)
    aip = q * (s * ve - c * vo) / sp
    bip = q * (c * ve + s * vo) / sp
    return ai, aip, bi, bip


def _build_table():
    nodes = np.arange(-ZMAX, ZMAX + 0.5 * _STEP, _STEP)
    i0 = int(np.argmin(np.abs(nodes)))
    nodes[i0] = 0.0
    tab = np.zeros((nodes.size, 4))
    a0, ap0, b0, bp0 = AIRY_AT_ZERO
    tab[i0] = AIRY_AT_ZERO
    # outward from 0: Bi both ways, Ai to the left
    for direction in (1, -1):
        ya, dya, yb, dyb = a0, ap0, b0, bp0
        i = i0
        while 0 <= i + direction < nodes.size:
            z0, z1 = nodes[i], nodes[i + direction]
            yb, dyb = _taylor(yb, dyb, z0, z1 - z0)
            if direction < 0:
                ya, dya = _taylor(ya, dya, z0, z1 - z0)
                tab[i + direction, 0:2] = ya, dya
            tab[i + direction, 2:4] = yb, dyb
            i += direction
    # Ai on the positive side: start at ZMAX + margin, step back to 0
    zs = ZMAX + 3.0
    ai, aip, _, _ = _asym_positive(np.array([zs]))
    scale = math.exp(-2.0 / 3.0 * zs**1.5)
    ya, dya = float(ai[0]) * scale, float(aip[0]) * scale
    z = zs
    for i in range(nodes.size - 1, i0, -1):
        target = nodes[i]
        while z - target > 1e-14:
            h = max(target - z, -_STEP)
            ya, dya = _taylor(ya, dya, z, h)
            z = z + h
        tab[i, 0:2] = ya, dya
    return nodes, tab


_NODES, _TABLE = _build_table()


def _interior(z):
    idx = np.clip(np.rint((z + ZMAX) / _STEP).astype(int), 0, _NODES.size - 1)
    z0 = _NODES[idx]
    t = z - z0
    ai, aip = _taylor_vec(_TABLE[idx, 0], _TABLE[idx, 1], z0, t)
    bi, bip = _taylor_vec(_TABLE[idx, 2], _TABLE[idx, 3], z0, t)
    return ai, aip, bi, bip


def airy_scaled(z):
    """Exponentially scaled Airy functions for real ``z``.

    Returns ``(Ai, Ai', Bi, Bi')`` multiplied by ``exp(zeta)`` for the Ai
    pair and ``exp(-zeta)`` for the Bi pair, where ``zeta = 2/3 z^(3/2)`` for
    ``z > 0`` and zero otherwise.
    """
    z = np.asarray(z, dtype=float)
    flat = np.atleast_1d(z).ravel()
    out = np.empty((4, flat.size))
    mid = np.abs(flat) <= ZMAX
    if mid.any():
        zm = flat[mid]
        vals = np.array(_interior(zm))
        zeta = np.where(zm > 0, 2.0 / 3.0 * np.abs(zm) ** 1.5, 0.0)
        vals[0:2] *= np.exp(zeta)
        vals[2:4] *= np.exp(-zeta)
        out[:, mid] = vals
    hi = flat > ZMAX
    if hi.any():
        out[:, hi] = np.array(_asym_positive(flat[hi]))
    lo = flat < -ZMAX
    if lo.any():
        out[:, lo] = np.array(_asym_negative(flat[lo]))
    nan = ~np.isfinite(flat)
    out[:, nan] = np.nan
    shaped = out.reshape((4,) + z.shape)
    return tuple(shaped[i] if z.ndim else float(shaped[i]) for i in range(4))


def airy(z):
    """Airy functions ``(Ai, Ai', Bi, Bi')`` for real ``z``.

    Large positive arguments underflow (Ai) or overflow (Bi) as the true
    values do; use :func:`airy_scaled` there.
    """
    z = np.asarray(z, dtype=float)
    ai, aip, bi, bip = (np.asarray(v, dtype=float) for v in airy_scaled(z))
    zeta = np.where(z > 0, 2.0 / 3.0 * np.abs(z) ** 1.5, 0.0)
    with np.errstate(over="ignore"):
        e = np.exp(-zeta)
        f = np.exp(zeta)
    res = (ai * e, aip * e, bi * f, bip * f)
    if z.ndim == 0:
        return tuple(float(v) for v in res)
    return res
