"""Large-field asymptotics: zeroth-order profiles, currents and the first-order field.

At zeroth order the potential is linear, ``V0 = V_diff - E0 (x - x0)``, and
the work-function profile is taken piecewise linear so that every exponential
integral has a closed form in each region.  Mobilities are frozen at
``|E0|`` and absorbed into rescaled densities ``n_hat = mu_n n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import AsymptoticsError
from .iv import IVCurve, IVPoint, V_INT_DEFAULT
from .materials import UProfile, interface_dissociation_rate, mobility_n, mobility_p, u_and_slope
from .scaling import ScaledParams
from .unipolar import UnipolarProfile, UnipolarSolution, riccati_field, unipolar_solve

__all__ = [
    "ExcitonProfile",
    "ZerothOrderContext",
    "ZerothCurrents",
    "AsymptoticProfile",
    "zeroth_field",
    "exciton_zeroth",
    "exciton_outer",
    "zeroth_order_context",
    "F_integral",
    "phi_integrals",
    "phi_endpoint_values",
    "calF_integrals",
    "zeroth_currents",
    "zeroth_densities",
    "first_order_field",
    "asymptotic_profile",
    "asymptotic_iv",
    "write_asymptotic_csv",
    "format_currents",
    "UnipolarSolution",
    "UnipolarProfile",
    "unipolar_solve",
    "riccati_field",
]

_GAUSS_ORDER = 20
_GX, _GW = np.polynomial.legendre.leggauss(_GAUSS_ORDER)


def zeroth_field(V_diff: float, params: ScaledParams) -> float:
    """Constant zeroth-order field ``V_diff / (xL - x0)``."""
    length = params.xL - params.x0
    if not length > 0:
        raise AsymptoticsError("device length must be positive")
    return V_diff / length


@dataclass(frozen=True)
class ExcitonProfile:
    """Piecewise exciton density with constant rates per region.

    In each region ``[a, b]`` the profile is
    ``G/k + A exp(-m (x - a)) + B exp(-m (b - x))`` with ``m = sqrt(k/D)``.
    The outer (diffusion-free) limit keeps only the plateaus ``G/k``.
    """

    model: str
    edges: tuple[float, float, float, float]
    G: float
    k_total: tuple[float, float, float]
    kd: tuple[float, float, float]
    m: tuple[float, float, float]
    coef: tuple[tuple[float, float], ...]

    def _region(self, x):
        _, xl, xr, _ = self.edges
        return np.where(x < xl, 0, np.where(x <= xr, 1, 2))

    def _parts(self, x):
        x = np.asarray(x, dtype=float)
        reg = self._region(x)
        bounds = ((self.edges[0], self.edges[1]), (self.edges[1], self.edges[2]),
                  (self.edges[2], self.edges[3]))
        val = np.zeros_like(x)
        der = np.zeros_like(x)
        for i, (a, b) in enumerate(bounds):
            sel = reg == i
            if not sel.any():
                continue
            xs = x[sel]
            v = np.full_like(xs, self.G / self.k_total[i])
            d = np.zeros_like(xs)
            if self.model == "resolved":
                A, B = self.coef[i]
                m = self.m[i]
                ea = np.exp(-m * (xs - a))
                eb = np.exp(-m * (b - xs))
                v += A * ea + B * eb
                d += -m * A * ea + m * B * eb
            val[sel] = v
            der[sel] = d
        return val, der

    def __call__(self, x):
        v = self._parts(x)[0]
        return float(v) if np.ndim(x) == 0 else v

    def derivative(self, x):
        d = self._parts(x)[1]
        return float(d) if np.ndim(x) == 0 else d

    def kd_at(self, x):
        reg = self._region(np.asarray(x, dtype=float))
        return np.choose(reg, self.kd)

    @property
    def plateaus(self) -> tuple[float, float, float]:
        return tuple(self.G / k for k in self.k_total)


def _region_rates(params: ScaledParams, E0: float):
    kd_in = float(interface_dissociation_rate(E0, params))
    kd = (params.kd_out, kd_in, params.kd_out)
    kt = (params.kd_out + params.kr_out, kd_in + params.kr_in, params.kd_out + params.kr_out)
    return kd, kt


def exciton_outer(params: ScaledParams, E0: float) -> ExcitonProfile:
    """Local-equilibrium exciton density ``G/(k_d + k_r)`` per region."""
    kd, kt = _region_rates(params, E0)
    edges = (params.x0, params.xl, params.xr, params.xL)
    return ExcitonProfile("outer", edges, params.GT, kt, kd, (np.inf,) * 3, ((0.0, 0.0),) * 3)


def exciton_zeroth(params: ScaledParams, E0: float) -> ExcitonProfile:
    """Exciton profile resolving diffusion across the region boundaries.

    Solves ``-D X'' = G - (k_d + k_r) X`` in the three regions with Neumann
    ends and continuity of X and X' at the interface ends (a 6x6 system with
    decaying-exponential bases, which stays well conditioned for thin
    layers).
    """
    kd, kt = _region_rates(params, E0)
    if params.D_X <= 0 or min(kt) <= 0:
        raise AsymptoticsError("exciton rates and diffusion must be positive")
    edges = (params.x0, params.xl, params.xr, params.xL)
    bounds = [(edges[0], edges[1]), (edges[1], edges[2]), (edges[2], edges[3])]
    m = [float(np.sqrt(k / params.D_X)) for k in kt]
    G = params.GT

    def basis(i, x, der):
        a, b = bounds[i]
        ea, eb = np.exp(-m[i] * (x - a)), np.exp(-m[i] * (b - x))
        return (ea, eb) if not der else (-m[i] * ea, m[i] * eb)

    A = np.zeros((6, 6))
    rhs = np.zeros(6)
    A[0, 0:2] = basis(0, edges[0], True)
    r = 1
    for i, xi in ((0, edges[1]), (1, edges[2])):
        A[r, 2 * i:2 * i + 2] = basis(i, xi, False)
        A[r, 2 * i + 2:2 * i + 4] = [-v for v in basis(i + 1, xi, False)]
        rhs[r] = G / kt[i + 1] - G / kt[i]
        A[r + 1, 2 * i:2 * i + 2] = basis(i, xi, True)
        A[r + 1, 2 * i + 2:2 * i + 4] = [-v for v in basis(i + 1, xi, True)]
        r += 2
    A[5, 4:6] = basis(2, edges[3], True)
    c = np.linalg.solve(A, rhs)
    coef = tuple((float(c[2 * i]), float(c[2 * i + 1])) for i in range(3))
    return ExcitonProfile("resolved", edges, G, kt, kd, tuple(m), coef)


class _Panels:
    """Composite Gauss-Legendre panels adapted to the exponential scales."""

    def __init__(self, breaks: np.ndarray):
        self.breaks = breaks
        a, b = breaks[:-1], breaks[1:]
        half = 0.5 * (b - a)
        self.nodes = (0.5 * (a + b))[:, None] + half[:, None] * _GX[None, :]
        self.weights = half[:, None] * _GW[None, :]

    def locate(self, x):
        k = np.searchsorted(self.breaks, x, side="right") - 1
        return np.clip(k, 0, self.breaks.size - 2)


def _sub_nodes(a, b):
    """Gauss nodes and weights on ``[a_i, b_i]`` for each pair, shape (N, order)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[..., None] + half[..., None] * _GX
    return nodes, half[..., None] * _GW


def _region_breaks(a, b, max_width, layer):
    n = max(1, int(np.ceil((b - a) / max_width)))
    pts = list(np.linspace(a, b, n + 1))
    if layer is not None and np.isfinite(layer):
        w = layer / 8.0
        while w < 0.5 * (b - a) and w < max_width:
            pts += [a + w, b - w]
            w *= 2.0
    return pts


@dataclass(frozen=True, eq=False)
class ZerothOrderContext:
    """Everything needed to evaluate zeroth-order quantities at one bias.

    ``delta_r`` is ``exp(E0 (xL - xr))``; it equals ``delta**2`` only when
    ``xL - xr = 2 (xl - x0)``.  ``boundary`` holds the un-rescaled Dirichlet
    densities ``(n0, nL, p0, pL)``.
    """

    params: ScaledParams
    V_diff: float
    E0: float
    U_x: float
    delta: float
    eta: float
    delta_r: float
    mu_n: float
    mu_p: float
    boundary: tuple[float, float, float, float]
    exciton: ExcitonProfile
    refine: int = 1
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def geometry(self):
        p = self.params
        return p.x0, p.xl, p.xr, p.xL

    @property
    def rescaled_boundary(self):
        n0, nL, p0, pL = self.boundary
        return n0 * self.mu_n, nL * self.mu_n, p0 * self.mu_p, pL * self.mu_p

    @property
    def exp_phiL_minus_phi0(self) -> float:
        """``exp(phi(xL) - phi(x0)) = 1/(eta delta delta_r)``."""
        return float(np.exp(-self.E0 * (self.params.xL - self.params.x0) + self.params.dU))

    def phi(self, x):
        """``phi = V0 + U`` with the piecewise-linear work-function profile."""
        p = self.params
        U, _ = u_and_slope(x, UProfile.from_params(p, "linear"))
        return self.V_diff - self.E0 * (np.asarray(x, dtype=float) - p.x0) + U

    def phi_rel(self, x):
        """``phi(x) - phi(x0)``."""
        return self.phi(x) - self.V_diff

    @cached_property
    def panels(self) -> _Panels:
        x0, xl, xr, xL = self.geometry
        slopes = (abs(self.E0), abs(self.U_x - self.E0), abs(self.E0))
        pts = []
        for (a, b), s, mm in zip(((x0, xl), (xl, xr), (xr, xL)), slopes, self.exciton.m):
            width = min(b - a, 4.0 / max(s, 1e-12)) / self.refine
            layer = 1.0 / mm if self.exciton.model == "resolved" else None
            pts += _region_breaks(a, b, width, layer)
        return _Panels(np.unique(np.array(pts)))

    @cached_property
    def _F_breaks(self) -> np.ndarray:
        pan = self.panels
        f = self.exciton.kd_at(pan.nodes) * self.exciton(pan.nodes)
        return np.concatenate([[0.0], np.cumsum((f * pan.weights).sum(axis=1))])

    def F(self, x):
        x = np.asarray(x, dtype=float)
        k = self.panels.locate(x)
        a = self.panels.breaks[k]
        nodes, w = _sub_nodes(a, x)
        f = self.exciton.kd_at(nodes) * self.exciton(nodes)
        return self._F_breaks[k] + (f * w).sum(axis=-1)

    @cached_property
    def _calF_breaks(self):
        # exponent-shifted recursion: only local differences of phi appear
        pan = self.panels
        b = pan.breaks
        phib = self.phi_rel(b)
        Fn = np.zeros(b.size)
        Fp = np.zeros(b.size)
        Fy = self.F(pan.nodes.ravel()).reshape(pan.nodes.shape)
        phiy = self.phi_rel(pan.nodes)
        In = (Fy * np.exp(phib[1:, None] - phiy) * pan.weights).sum(axis=1)
        Ip = (Fy * np.exp(phiy - phib[1:, None]) * pan.weights).sum(axis=1)
        step = np.diff(phib)
        for i in range(b.size - 1):
            Fn[i + 1] = Fn[i] * np.exp(step[i]) + In[i]
            Fp[i + 1] = Fp[i] * np.exp(-step[i]) + Ip[i]
        return Fn, Fp

    def calF(self, x):
        x = np.asarray(x, dtype=float)
        pan = self.panels
        k = pan.locate(x)
        a = pan.breaks[k]
        Fn_b, Fp_b = self._calF_breaks
        nodes, w = _sub_nodes(a, x)
        Fy = self.F(nodes.ravel()).reshape(nodes.shape)
        phix = self.phi_rel(x)
        phia = self.phi_rel(a)
        dphi = phix[..., None] - self.phi_rel(nodes)
        Fn = Fn_b[k] * np.exp(phix - phia) + (Fy * np.exp(dphi) * w).sum(axis=-1)
        Fp = Fp_b[k] * np.exp(phia - phix) + (Fy * np.exp(-dphi) * w).sum(axis=-1)
        return Fn, Fp


    def _tail_breaks(self, s: float):
        key = ("tail", s)
        if key not in self._cache:
            pan = self.panels
            b = pan.breaks
            phib = self.phi_rel(b)
            phiy = self.phi_rel(pan.nodes)
            Fy = self.F(pan.nodes.ravel()).reshape(pan.nodes.shape)
            wexp = np.exp(s * (phib[:-1, None] - phiy)) * pan.weights
            Ia = wexp.sum(axis=1)
            Ib = (Fy * wexp).sum(axis=1)
            a = np.zeros(b.size)
            bb = np.zeros(b.size)
            step = np.exp(s * (phib[:-1] - phib[1:]))
            for i in range(b.size - 2, -1, -1):
                a[i] = a[i + 1] * step[i] + Ia[i]
                bb[i] = bb[i + 1] * step[i] + Ib[i]
            self._cache[key] = (a, bb)
        return self._cache[key]

    def tail(self, x, s: float):
        """``int_x^xL w(y) exp(s (phi(x) - phi(y))) dy`` for ``w = 1`` and ``w = F``."""
        x = np.asarray(x, dtype=float)
        pan = self.panels
        k = pan.locate(x)
        right = pan.breaks[k + 1]
        a_b, b_b = self._tail_breaks(s)
        nodes, w = _sub_nodes(x, right)
        phix = self.phi_rel(x)
        ew = np.exp(s * (phix[..., None] - self.phi_rel(nodes))) * w
        Fy = self.F(nodes.ravel()).reshape(nodes.shape)
        shift = np.exp(s * (phix - self.phi_rel(right)))
        return a_b[k + 1] * shift + ew.sum(axis=-1), b_b[k + 1] * shift + (Fy * ew).sum(axis=-1)


def zeroth_order_context(params: ScaledParams, V_diff: float, *, exciton: str = "outer",
                         boundary: Sequence[float] | None = None, refine: int = 1) -> ZerothOrderContext:
    """Build the zeroth-order context at ``V_diff``.

    Parameters
    ----------
    exciton : {'outer', 'resolved'}
        ``outer`` uses the diffusion-free plateaus, the leading-order limit
        when exciton diffusion is small; ``resolved`` keeps the diffusive
        boundary layers of :func:`exciton_zeroth`.
    boundary : sequence of float, optional
        Boundary densities ``(n0, nL, p0, pL)``; defaults to the parameters.
    refine : int
        Uniform subdivision factor of the quadrature panels.

    Raises
    ------
    AsymptoticsError
        At the removable singularities ``E0 = 0`` and ``E0 = U_x``.
    """
    E0 = zeroth_field(V_diff, params)
    U_x = params.dU / (params.xr - params.xl)
    if E0 == 0.0:
        raise AsymptoticsError("zeroth-order field vanishes (V_diff = 0)")
    if E0 == U_x:
        raise AsymptoticsError("zeroth-order field equals the interface slope of U")
    if exciton == "outer":
        X0 = exciton_outer(params, E0)
    elif exciton == "resolved":
        X0 = exciton_zeroth(params, E0)
    else:
        raise ValueError("exciton must be 'outer' or 'resolved'")
    bc = (params.n0, params.nL, params.p0, params.pL) if boundary is None else tuple(
        float(b) for b in boundary)
    return ZerothOrderContext(
        params=params, V_diff=float(V_diff), E0=E0, U_x=U_x,
        delta=float(np.exp(E0 * (params.xl - params.x0))),
        eta=float(np.exp(E0 * (params.xr - params.xl) - params.dU)),
        delta_r=float(np.exp(E0 * (params.xL - params.xr))),
        mu_n=float(mobility_n(E0, params)), mu_p=float(mobility_p(E0, params)),
        boundary=bc, exciton=X0, refine=int(refine))


def F_integral(x, ctx: ZerothOrderContext):
    """``F(x) = int_{x0}^{x} k_d X0 dy`` by composite Gauss quadrature."""
    out = ctx.F(np.atleast_1d(x))
    return float(out[0]) if np.ndim(x) == 0 else out


def phi_integrals(x, ctx: ZerothOrderContext):
    """Closed forms of ``Phi_n(x) = int e^{phi(x)-phi(y)}`` and ``Phi_p``.

    Returns
    -------
    Phi_n, Phi_p : ndarray or float
    """
    x0, xl, xr, xL = ctx.geometry
    E0, s = ctx.E0, ctx.U_x - ctx.E0  # s is phi_x inside the interface
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa < x0 - 1e-12) or np.any(xa > xL + 1e-12):
        raise AsymptoticsError("position outside the device")

    def bulk(d, start_n, start_p):
        return (start_n * np.exp(-E0 * d) - np.expm1(-E0 * d) / E0,
                start_p * np.exp(E0 * d) + np.expm1(E0 * d) / E0)

    def interface(d, start_n, start_p):
        return (start_n * np.exp(s * d) + np.expm1(s * d) / s,
                start_p * np.exp(-s * d) - np.expm1(-s * d) / s)

    nl, pl = bulk(xl - x0, 0.0, 0.0)
    nr, pr = interface(xr - xl, nl, pl)
    Pn = np.empty_like(xa)
    Pp = np.empty_like(xa)
    r1 = xa <= xl
    r2 = (xa > xl) & (xa <= xr)
    r3 = xa > xr
    Pn[r1], Pp[r1] = bulk(xa[r1] - x0, 0.0, 0.0)
    Pn[r2], Pp[r2] = interface(xa[r2] - xl, nl, pl)
    Pn[r3], Pp[r3] = bulk(xa[r3] - xr, nr, pr)
    if np.ndim(x) == 0:
        return float(Pn[0]), float(Pp[0])
    return Pn, Pp


def phi_endpoint_values(ctx: ZerothOrderContext):
    """``Phi_n(xL)``, ``Phi_p(xL)`` written through delta, eta and delta_r."""
    E0, Ux = ctx.E0, ctx.U_x
    d, e, dr = ctx.delta, ctx.eta, ctx.delta_r
    Pn = (1 / E0) / (e * dr) * (1 - 1 / d) + (1 / (E0 - Ux)) / dr * (1 - 1 / e) + (1 / E0) * (1 - 1 / dr)
    Pp = (-1 / E0) * e * dr * (1 - d) - (1 / (E0 - Ux)) * dr * (1 - e) - (1 / E0) * (1 - dr)
    return Pn, Pp


def calF_integrals(x, ctx: ZerothOrderContext):
    """``calF_n(x) = int F(y) e^{phi(x)-phi(y)} dy`` and its mirror ``calF_p``."""
    Fn, Fp = ctx.calF(np.atleast_1d(x))
    if np.ndim(x) == 0:
        return float(Fn[0]), float(Fp[0])
    return Fn, Fp


@dataclass(frozen=True)
class ZerothCurrents:
    J_n0: float
    J_p0: float
    J_tot: float
    J_approx: float
    shunt_left: float
    shunt_right: float

    def as_dict(self) -> dict:
        return {"J0_n0": self.J_n0, "J0_p0": self.J_p0, "J0_tot": self.J_tot,
                "J0_approx": self.J_approx, "shunt_E0_n0_pL": self.shunt_left,
                "shunt_small_nL_p0": self.shunt_right}


def zeroth_currents(ctx: ZerothOrderContext) -> ZerothCurrents:
    """Zeroth-order currents, the interface approximation and shunt terms."""
    x0, xl, xr, xL = ctx.geometry
    n0, nL, p0, pL = ctx.rescaled_boundary
    PnL, PpL = phi_integrals(xL, ctx)
    FnL, FpL = calF_integrals(xL, ctx)
    g = ctx.exp_phiL_minus_phi0
    Jn = (nL - n0 * g + FnL) / PnL
    Jp = (-pL + p0 / g - FpL) / PpL
    Fl, Fr = ctx.F(np.array([xl, xr]))
    return ZerothCurrents(float(Jn), float(Jp), float(Jn + Jp), float(Fl - Fr), float(ctx.E0 * (n0 + pL)),
                          float(ctx.E0 * (nL + p0) / g))


def zeroth_densities(x, ctx: ZerothOrderContext):
    """Zeroth-order ``n0(x)``, ``p0(x)`` in un-rescaled units.

    The explicit Slotboom solution is evaluated in the equivalent form
    ``[u0 a(x) + uL e^{s(phi(x)-phi(xL))} A(x) + A(x) b(x) - B(x) a(x)] / A(xL)``
    where ``A, B`` are the forward integrals of ``e^{-s phi}`` and ``F e^{-s phi}``
    and ``a, b`` the matching tail integrals scaled by ``e^{s phi(x)}``; no
    large terms cancel and the contact values are reproduced exactly.
    """
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    n0, nL, p0, pL = ctx.rescaled_boundary
    xL = ctx.params.xL
    phix = ctx.phi_rel(xa)
    phiL = float(ctx.phi_rel(xL))
    Pn, Pp = phi_integrals(xa, ctx)
    Fn, Fp = calF_integrals(xa, ctx)
    PnL, PpL = phi_integrals(xL, ctx)
    out = []
    for s, u0, uL, P, Fc, PL in ((1.0, n0, nL, Pn, Fn, PnL), (-1.0, p0, pL, Pp, Fp, PpL)):
        A = P * np.exp(-s * phix)
        B = Fc * np.exp(-s * phix)
        AL = PL * np.exp(-s * phiL)
        a, b = ctx.tail(xa, s)
        out.append((u0 * a + uL * np.exp(s * (phix - phiL)) * A + A * b - B * a) / AL)
    n, p = out[0] / ctx.mu_n, out[1] / ctx.mu_p
    if np.ndim(x) == 0:
        return float(n[0]), float(p[0])
    return n, p


def _dipole_slope(ctx: ZerothOrderContext, x):
    # the outer plateaus are flat inside the interface
    xl, xr = ctx.params.xl, ctx.params.xr
    inside = (x >= xl) & (x <= xr)
    return np.where(inside, ctx.exciton.derivative(x), 0.0)


def first_order_field(ctx: ZerothOrderContext, x=None):
    """First-order field ``E1`` on the points ``x`` (sorted).

    Integrates ``E_x = -(n0 - p0 - (h/L) chi_I X0_x)/lambda_D^2`` from
    zeroth-order profiles and fixes the constant by ``int E1 = V_diff``.
    The integral is taken on the quadrature nodes merged with ``x``.
    """
    p = ctx.params
    pan = ctx.panels
    grid = np.unique(np.concatenate([pan.breaks, pan.nodes.ravel(),
                                     [] if x is None else np.asarray(x, dtype=float)]))
    n0, p0 = zeroth_densities(grid, ctx)
    src = -(n0 - p0 - p.h_over_L * _dipole_slope(ctx, grid)) / p.lambda_D2
    G = cumulative_trapezoid(src, grid, initial=0.0)
    mean = np.trapezoid(G, grid) / (p.xL - p.x0)
    E1 = ctx.E0 + G - mean
    if x is None:
        return grid, E1
    return np.interp(np.asarray(x, dtype=float), grid, E1)


@dataclass(frozen=True)
class AsymptoticProfile:
    x: np.ndarray
    X0: np.ndarray
    n0: np.ndarray
    p0: np.ndarray
    E0: float
    E1: np.ndarray
    currents: ZerothCurrents
    n_at_xr: float
    p_at_xl: float


def asymptotic_profile(ctx: ZerothOrderContext, x) -> AsymptoticProfile:
    """Evaluate all zeroth-order profiles and the first-order field on ``x``."""
    x = np.asarray(x, dtype=float)
    n0, p0 = zeroth_densities(x, ctx)
    nr, _ = zeroth_densities(ctx.params.xr, ctx)
    _, pl = zeroth_densities(ctx.params.xl, ctx)
    return AsymptoticProfile(x, ctx.exciton(x), n0, p0, ctx.E0, first_order_field(ctx, x),
                             zeroth_currents(ctx), nr, pl)


def asymptotic_iv(params: ScaledParams, V_list, *, exciton: str = "outer",
                  V_int: float = V_INT_DEFAULT, boundary=None) -> IVCurve:
    """Zeroth-order total current over a list of biases.

    Biases at the removable singularities are skipped and listed in
    ``curve.skipped``.
    """
    pts, skipped = [], []
    for V in V_list:
        try:
            ctx = zeroth_order_context(params, float(V), exciton=exciton, boundary=boundary)
            J = zeroth_currents(ctx).J_tot
        except AsymptoticsError as exc:
            skipped.append((float(V), str(exc)))
            continue
        pts.append(IVPoint(float(V), float(J), V_int))
    return IVCurve(pts, V_int, label=f"asymptotic-{exciton}", skipped=skipped)


def write_asymptotic_csv(profile: AsymptoticProfile, path) -> None:
    """Write ``x,n0,p0,X0,E1`` per point."""
    data = np.column_stack([profile.x, profile.n0, profile.p0, profile.X0, profile.E1])
    np.savetxt(Path(path), data, delimiter=",", header="x,n0,p0,X0,E1", comments="",
               fmt="%.10e", newline="\n")


def format_currents(cur: ZerothCurrents, ctx: ZerothOrderContext | None = None) -> str:
    lines = [f"{k} = {v:.10g}" for k, v in cur.as_dict().items()]
    if ctx is not None:
        lines += [f"E0 = {ctx.E0:.10g}", f"delta = {ctx.delta:.6e}", f"eta = {ctx.eta:.6e}",
                  f"exciton_model = {ctx.exciton.model}"]
    return "\n".join(lines) + "\n"
