"""Constitutive laws: work-function profile, mobilities and rates."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .scaling import ScaledParams

__all__ = [
    "Region",
    "UProfile",
    "classify",
    "in_interface",
    "u_and_slope",
    "mobility_n",
    "mobility_p",
    "dissociation_M",
    "dissociation_rate",
    "interface_dissociation_rate",
    "recombination_coefficient",
    "geminate_rate",
]

# below this M the closed forms lose digits to cancellation
SERIES_THRESHOLD = 1e-3


class Region(IntEnum):
    LEFT_BULK = 0
    INTERFACE = 1
    RIGHT_BULK = 2


def classify(x, params: ScaledParams):
    """Region tag of ``x``; the interface endpoints belong to the interface.

    Returns a :class:`Region` for scalar input and an integer array of tags
    otherwise.
    """
    xa = np.asarray(x, dtype=float)
    tag = np.where(xa < params.xl, Region.LEFT_BULK,
                   np.where(xa > params.xr, Region.RIGHT_BULK, Region.INTERFACE))
    if tag.ndim == 0:
        return Region(int(tag))
    return tag.astype(np.int8)


def in_interface(x, params: ScaledParams):
    xa = np.asarray(x, dtype=float)
    return (xa >= params.xl) & (xa <= params.xr)


@dataclass(frozen=True)
class UProfile:
    """Work-function potential rising by ``dU`` across ``[xl, xr]``.

    ``kind`` is ``"quadratic"`` (C1, two parabolas with zero slope at the
    interface ends meeting at the midpoint) or ``"linear"``.
    """

    kind: str
    dU: float
    xl: float
    xr: float
    x0: float
    xL: float

    def __post_init__(self):
        if self.kind not in ("quadratic", "linear"):
            raise ValueError(f"unknown U profile kind {self.kind!r}")

    @classmethod
    def from_params(cls, params: ScaledParams, kind: str | None = None) -> "UProfile":
        return cls(kind or params.u_profile, params.dU, params.xl, params.xr,
                   params.x0, params.xL)


def u_and_slope(x, profile: UProfile):
    """Evaluate U and dU/dx.

    Parameters
    ----------
    x : float or array_like
        Scaled positions in ``[x0, xL]``.
    profile : UProfile

    Returns
    -------
    U, U_x : ndarray or float

    Raises
    ------
    ValueError
        If any position lies outside the device.
    """
    xa = np.asarray(x, dtype=float)
    tol = 1e-12 * max(1.0, abs(profile.xL - profile.x0))
    if np.any(xa < profile.x0 - tol) or np.any(xa > profile.xL + tol):
        raise ValueError("position outside the device")
    xl, xr, dU = profile.xl, profile.xr, profile.dU
    w = xr - xl
    U = np.where(xa >= xr, dU, 0.0)
    Ux = np.zeros_like(xa)
    inside = (xa >= xl) & (xa <= xr)
    s = (xa - xl) / w
    if profile.kind == "linear":
        U = np.where(inside, dU * s, U)
        Ux = np.where(inside, dU / w, Ux)
    else:
        left = inside & (s <= 0.5)
        right = inside & (s > 0.5)
        U = np.where(left, 2 * dU * s**2, U)
        U = np.where(right, dU - 2 * dU * (1 - s) ** 2, U)
        Ux = np.where(left, 4 * dU * s / w, Ux)
        Ux = np.where(right, 4 * dU * (1 - s) / w, Ux)
    if U.ndim == 0:
        return float(U), float(Ux)
    return U, Ux


def mobility_n(E, params: ScaledParams):
    """Poole-Frenkel electron mobility mu_n(0) exp(gamma_n sqrt|E|)."""
    return params.mu_n0 * np.exp(params.gamma_n * np.sqrt(np.abs(E)))


def mobility_p(E, params: ScaledParams):
    """Poole-Frenkel hole mobility mu_p(0) exp(gamma_p sqrt|E|)."""
    return params.mu_p0 * np.exp(params.gamma_p * np.sqrt(np.abs(E)))


def dissociation_M(E, params: ScaledParams):
    """Scaled square-root field M = A_M sqrt|E|."""
    return params.A_M * np.sqrt(np.abs(E))


def interface_dissociation_rate(E, params: ScaledParams):
    """Field-dependent dissociation rate inside the interface.

    Positive fields use ``4 k0/M^2 (1 - exp(-M^2/4))``, negative fields
    ``2 k0/M (exp(M)(1 - 1/M) + 1/M)``.  Both tend to ``k0`` as M -> 0 and
    are replaced by their Taylor expansions for small M.
    """
    Ea = np.asarray(E, dtype=float)
    if params.kd_in_const is not None:
        out = np.full_like(Ea, params.kd_in_const)
        return float(out) if out.ndim == 0 else out
    k0 = params.kd_in0
    M = np.atleast_1d(dissociation_M(Ea, params))
    Ef = np.atleast_1d(Ea)
    out = np.empty_like(M)
    small = M < SERIES_THRESHOLD
    neg = (Ef < 0) & ~small
    pos = (Ef >= 0) & ~small
    m = M[pos]
    out[pos] = 4 * k0 / m**2 * (-np.expm1(-(m**2) / 4))
    m = M[neg]
    out[neg] = 2 * k0 / m * (np.exp(m) * (1 - 1 / m) + 1 / m)
    m = M[small]
    out[small] = np.where(Ef[small] < 0, k0 * (1 + 2 * m / 3 + m**2 / 4),
                          k0 * (1 - m**2 / 8))
    if Ea.ndim == 0:
        return float(out[0])
    return out


def dissociation_rate(E, region, params: ScaledParams):
    """Dissociation rate k_d T for a signed normal field and region.

    ``region`` may be a :class:`Region`, an array of tags, or a boolean
    interface mask.
    """
    reg = np.asarray(region)
    mask = reg if reg.dtype == bool else (reg == Region.INTERFACE)
    k_in = interface_dissociation_rate(E, params)
    out = np.where(mask, k_in, params.kd_out)
    return float(out) if out.ndim == 0 else out


def recombination_coefficient(params: ScaledParams) -> float:
    """Langevin coefficient, held at its zero-field value."""
    return params.c_r


def geminate_rate(region, params: ScaledParams):
    """Geminate recombination rate k_r T for a region (tag or mask)."""
    reg = np.asarray(region)
    mask = reg if reg.dtype == bool else (reg == Region.INTERFACE)
    out = np.where(mask, params.kr_in, params.kr_out)
    return float(out) if out.ndim == 0 else out
