"""Unipolar (majority-carrier) approximation in a bulk layer.

With a single carrier and constant current the field obeys a Riccati first
integral.  On the hole side ``E_x - E^2/2 = -J x/(lambda_D^2 mu) + C`` with
``p = lambda_D^2 E_x``; on the electron side ``E_x + E^2/2 = -J x/(lambda_D^2
mu) + C`` with ``n = -lambda_D^2 E_x``.  Writing ``E = y_u / y`` with
``x = -2u`` (holes) or ``x = 2u`` (electrons) gives ``y_uu = (kappa u + c) y``,
an Airy equation after an affine change of variable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .airy import airy_scaled
from .errors import AsymptoticsError
from .materials import mobility_n, mobility_p
from .scaling import ScaledParams

__all__ = ["UnipolarSolution", "UnipolarProfile", "unipolar_solve", "riccati_field"]

_FLAT = 1e-10


def _zeta(z):
    return np.where(z > 0, 2.0 / 3.0 * np.abs(z) ** 1.5, 0.0)


@dataclass(frozen=True)
class UnipolarProfile:
    x: np.ndarray
    E: np.ndarray
    V: np.ndarray
    density: np.ndarray
    pole_at: float | None


@dataclass(frozen=True)
class UnipolarSolution:
    """Airy-combination solution for one bulk layer.

    ``y`` is normalised to ``y(u_b) = 1`` so that ``V`` vanishes at the
    boundary point.  ``alpha`` and ``beta`` are the Airy coefficients with
    the exponential scale of the boundary point factored out.
    """

    side: str
    boundary_density: float
    boundary_field: float
    J: float
    x_b: float
    mu: float
    lambda_D2: float
    C: float
    kappa: float
    alpha: float
    beta: float

    @property
    def _sign(self) -> float:
        return -1.0 if self.side == "hole" else 1.0

    @property
    def c(self) -> float:
        return -2.0 * self.C if self.side == "hole" else 2.0 * self.C

    def _u(self, x):
        return 0.5 * self._sign * np.asarray(x, dtype=float)

    @property
    def constant_coefficient(self) -> bool:
        return self.alpha != self.alpha  # NaN marks the flat branch

    def _y_and_yu(self, x):
        """Return ``(log|y|, sign(y), y_u/y)`` at ``x``."""
        u = self._u(x)
        ub = float(self._u(self.x_b))
        Eb = self.boundary_field
        if self.constant_coefficient:
            d = u - ub
            c = self.c
            if c > 0:
                r = np.sqrt(c)
                # y = cosh(rd) + (Eb/r) sinh(rd), written with one exponential factored out
                ep = 0.5 * (1 + Eb / r)
                em = 0.5 * (1 - Eb / r)
                big = np.abs(r * d)
                sgn = np.where(d >= 0, 1.0, -1.0)
                a = np.where(sgn >= 0, ep, em)
                b = np.where(sgn >= 0, em, ep)
                mant = a + b * np.exp(-2 * big)
                dmant = sgn * r * (a - b * np.exp(-2 * big))
                return big + np.log(np.abs(mant)), np.sign(mant), dmant / mant
            if c < 0:
                r = np.sqrt(-c)
                y = np.cos(r * d) + Eb / r * np.sin(r * d)
                yu = -r * np.sin(r * d) + Eb * np.cos(r * d)
            else:
                y = 1.0 + Eb * d
                yu = np.full_like(d, Eb)
            with np.errstate(divide="ignore"):
                return np.log(np.abs(y)), np.sign(y), yu / y
        k = np.cbrt(self.kappa)
        shift = self.c / self.kappa
        z = k * (u + shift)
        zb = k * (ub + shift)
        ai, aip, bi, bip = (np.asarray(v) for v in airy_scaled(z))
        ea = _zeta(zb) - _zeta(z)
        m = np.abs(ea)
        wa = np.exp(ea - m)
        wb = np.exp(-ea - m)
        mant = self.alpha * ai * wa + self.beta * bi * wb
        dmant = k * (self.alpha * aip * wa + self.beta * bip * wb)
        with np.errstate(divide="ignore", invalid="ignore"):
            return m + np.log(np.abs(mant)), np.sign(mant), dmant / mant

    def E(self, x):
        return self._y_and_yu(x)[2]

    def V(self, x):
        """Potential relative to the boundary point,  ``V = -/+ 2 log|y|``."""
        logy = self._y_and_yu(x)[0]
        return -2.0 * self._sign * logy

    def density(self, x):
        x = np.asarray(x, dtype=float)
        E = self.E(x)
        drive = -self.J * x / (self.lambda_D2 * self.mu)
        if self.side == "hole":
            return self.lambda_D2 * (0.5 * E**2 + drive + self.C)
        return -self.lambda_D2 * (self.C - 0.5 * E**2 + drive)

    def evaluate(self, x, *, strict: bool = False) -> UnipolarProfile:
        """Evaluate on sorted points and locate a pole of E (zero of y).

        Raises
        ------
        AsymptoticsError
            If ``strict`` and ``y`` changes sign inside ``x``.
        """
        x = np.asarray(x, dtype=float)
        logy, sgn, E = self._y_and_yu(x)
        pole = None
        flips = np.nonzero(sgn[1:] * sgn[:-1] <= 0)[0]
        if flips.size:
            i = int(flips[0])
            pole = float(0.5 * (x[i] + x[i + 1]))
            if strict:
                raise AsymptoticsError(f"unipolar field has a pole near x = {pole:.6g}")
        V = -2.0 * self._sign * logy
        return UnipolarProfile(x, E, V, self.density(x), pole)


def unipolar_solve(side: str, boundary_density: float, boundary_field: float, J: float,
                   params: ScaledParams, *, x_b: float | None = None, mu: float | None = None,
                   E0: float | None = None) -> UnipolarSolution:
    """Build the unipolar solution from data at one point of a bulk layer.

    Parameters
    ----------
    side : {'hole', 'electron'}
        Hole side is the left bulk, electron side the right bulk.
    boundary_density, boundary_field : float
        Majority density and field at ``x_b``.
    J : float
        Carrier current, taken constant over the layer.
    x_b : float, optional
        Data location; defaults to the outer contact of the layer. Interface
        side data may be passed instead.
    mu : float, optional
        Constant mobility. Otherwise the Poole-Frenkel value at ``|E0|`` (or at
        the boundary field when ``E0`` is not given).
    """
    if side not in ("hole", "electron"):
        raise ValueError("side must be 'hole' or 'electron'")
    if x_b is None:
        x_b = params.x0 if side == "hole" else params.xL
    if mu is None:
        Eref = boundary_field if E0 is None else E0
        mu = float(mobility_p(abs(Eref), params) if side == "hole" else mobility_n(abs(Eref), params))
    if not mu > 0:
        raise AsymptoticsError("mobility must be positive")
    lam = params.lambda_D2
    drive_b = J * x_b / (lam * mu)
    if side == "hole":
        C = boundary_density / lam - 0.5 * boundary_field**2 + drive_b
        c = -2.0 * C
        u_span = 0.5 * max(abs(params.x0), abs(params.xl), abs(x_b))
    else:
        C = -boundary_density / lam + 0.5 * boundary_field**2 + drive_b
        c = 2.0 * C
        u_span = 0.5 * max(abs(params.xr), abs(params.xL), abs(x_b))
    kappa = -4.0 * J / (lam * mu)
    base = dict(side=side, boundary_density=float(boundary_density),
                boundary_field=float(boundary_field), J=float(J), x_b=float(x_b), mu=mu,
                lambda_D2=lam, C=float(C), kappa=float(kappa))
    if J == 0 or abs(kappa) * u_span <= _FLAT * abs(c):
        return UnipolarSolution(alpha=float("nan"), beta=float("nan"), **base)
    k = np.cbrt(kappa)
    sign = -1.0 if side == "hole" else 1.0
    zb = k * (0.5 * sign * x_b + c / kappa)
    ai, aip, bi, bip = airy_scaled(zb)
    e = boundary_field / k
    # y(zb) = 1 by the Wronskian Ai Bi' - Ai' Bi = 1/pi
    alpha = np.pi * (bip - e * bi)
    beta = np.pi * (e * ai - aip)
    return UnipolarSolution(alpha=float(alpha), beta=float(beta), **base)


def riccati_field(sol: UnipolarSolution, x, *, rtol: float = 1e-11, atol: float = 1e-12):
    """Integrate the Riccati first integral directly from ``x_b`` with solve_ivp.

    Independent of the Airy path; ``x`` must lie on one side of ``x_b``.
    """
    x = np.asarray(x, dtype=float)
    lam, mu, J, C = sol.lambda_D2, sol.mu, sol.J, sol.C
    if sol.side == "hole":
        def rhs(t, E):
            return 0.5 * E**2 - J * t / (lam * mu) + C
    else:
        def rhs(t, E):
            return -0.5 * E**2 - J * t / (lam * mu) + C
    end = x[np.argmax(np.abs(x - sol.x_b))]
    res = solve_ivp(rhs, (sol.x_b, end), [sol.boundary_field], t_eval=None, dense_output=True,
                    method="DOP853", rtol=rtol, atol=atol)
    if not res.success:
        raise AsymptoticsError(f"Riccati integration failed: {res.message}")
    return res.sol(x)[0]
