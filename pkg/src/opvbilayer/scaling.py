"""Nondimensionalisation of the bilayer device model.

Potentials are measured in units of the thermal voltage, lengths in units of
the device length, densities in units of a reference density and mobilities
in units of a reference mobility.  Rates enter the scaled system already
multiplied by the reference time ``T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Optional

from scipy.constants import elementary_charge, epsilon_0

__all__ = [
    "PhysicalParams",
    "ScaledParams",
    "build_scaled_params",
    "default_params",
    "default_physical_params",
    "validate",
    "ParameterError",
]


class ParameterError(ValueError):
    """Raised when physical or scaled parameters are inconsistent."""


@dataclass(frozen=True)
class PhysicalParams:
    """Device parameters in SI units (mobilities relative to ``mu_ref``).

    Attributes
    ----------
    thermal_voltage : float
        U_T in volts.
    device_length : float
        L in metres.
    reference_density : float
        N_r in 1/m^3.
    reference_mobility : float
        mu_0 in m^2/(V s).
    relative_permittivity : float
        eps_r, dimensionless.
    pair_separation : float
        Polaron pair separation h in metres.
    interface_half_width : float
        Half width d of the interface region in metres.
    photo_generation : float
        Exciton generation rate G in 1/(m^3 s).
    kd_in0, kd_out, kr_in, kr_out : float
        Dissociation (zero field) and geminate recombination rates in 1/s.
    mu_n0, mu_p0 : float
        Zero-field mobilities in units of ``reference_mobility``.
    gamma_n, gamma_p : float
        Poole-Frenkel coefficients, applied to the scaled field.
    exciton_mobility_ratio : float
        mu_1/mu_0.
    workfunction_gap : float
        Delta U in units of U_T.
    recombination_fraction : float
        Fraction c of free-carrier recombination that forms excitons.
    """

    thermal_voltage: float = 0.0258
    device_length: float = 1e-7
    reference_density: float = 1e20
    reference_mobility: float = 1e-10
    relative_permittivity: float = 4.0
    pair_separation: float = 1e-9
    interface_half_width: float = 1e-9
    photo_generation: float = 4.383e26
    kd_in0: float = 1e5
    kd_out: float = 258.0
    kr_in: float = 1e3
    kr_out: float = 1e6
    mu_n0: float = 3.0
    mu_p0: float = 1.0
    gamma_n: float = 0.788
    gamma_p: float = 0.153
    exciton_mobility_ratio: float = 0.01
    workfunction_gap: float = 12.0
    recombination_fraction: float = 1.0


@dataclass(frozen=True)
class ScaledParams:
    """Dimensionless model constants.

    Rates carry the reference time already (``kd_in0`` is k_{d,in}(0) T and
    so on).  ``kd_in_const`` replaces the field-dependent interface
    dissociation rate by a constant when set.  ``u_profile`` selects the
    work-function profile used by the numerical solver.
    """

    lambda2: float
    eps_r: float
    T: float
    GT: float
    kd_in0: float
    kd_out: float
    kr_in: float
    kr_out: float
    c_r: float
    c_r_prime: float
    mu_n0: float
    gamma_n: float
    mu_p0: float
    gamma_p: float
    D_X: float
    x0: float
    xl: float
    xm: float
    xr: float
    xL: float
    h_over_L: float
    dU: float
    A_M: float
    n0: float
    nL: float
    p0: float
    pL: float
    u_profile: str = "quadratic"
    kd_in_const: Optional[float] = None

    @property
    def lambda_D2(self) -> float:
        """Squared Debye parameter lambda^2 eps_r."""
        return self.lambda2 * self.eps_r

    @property
    def length(self) -> float:
        return self.xL - self.x0

    @property
    def interface_width(self) -> float:
        return self.xr - self.xl

    def with_updates(self, **changes) -> "ScaledParams":
        """Return a copy with the given fields replaced."""
        return replace(self, **changes)


def _m_prefactor(lambda2: float, eps_r: float, cube_density: float) -> float:
    # mixed convention: scaled field, L^3 N_r in SI units
    return 1.0 / (math.sqrt(lambda2) * math.sqrt(cube_density * math.pi * eps_r))


def build_scaled_params(
    phys: PhysicalParams,
    *,
    geometry: tuple[float, float] = (0.0, 1.5),
    interface_centre: float = 0.5,
    boundary_densities: tuple[float, float, float, float] = (4e-7, 0.04, 0.04, 4e-7),
) -> ScaledParams:
    """Convert physical inputs to the scaled system.

    Parameters
    ----------
    phys : PhysicalParams
        Physical inputs.
    geometry : tuple of float
        Scaled device ends ``(x0, xL)``.
    interface_centre : float
        Scaled position of the interface midpoint.
    boundary_densities : tuple of float
        Scaled ``(n0, nL, p0, pL)``.

    Returns
    -------
    ScaledParams

    Raises
    ------
    ParameterError
        For non-positive inputs or an interface that does not fit.
    """
    positive = {f.name: getattr(phys, f.name) for f in fields(phys)
                if f.name not in ("recombination_fraction", "workfunction_gap")}
    bad = [k for k, v in positive.items() if not (v > 0 and math.isfinite(v))]
    if bad:
        raise ParameterError(f"non-positive physical parameters: {', '.join(bad)}")
    if not 0.0 <= phys.recombination_fraction <= 1.0:
        raise ParameterError("recombination_fraction must lie in [0, 1]")
    if phys.workfunction_gap < 0:
        raise ParameterError("workfunction_gap must be non-negative")
    L = phys.device_length
    d = phys.interface_half_width
    if 2 * d >= L:
        raise ParameterError("interface width 2d must be smaller than L")

    lambda2 = epsilon_0 * phys.thermal_voltage / (
        elementary_charge * L**2 * phys.reference_density)
    T = L**2 / (phys.reference_mobility * phys.thermal_voltage)
    eps_r = phys.relative_permittivity
    c_r = (phys.mu_n0 + phys.mu_p0) / (lambda2 * eps_r)

    x0, xL = geometry
    half = d / L
    xm = interface_centre
    if not (x0 < xm - half and xm + half < xL):
        raise ParameterError("interface does not fit inside the device")
    n0, nL, p0, pL = boundary_densities
    rho = phys.reference_density
    return ScaledParams(
        lambda2=lambda2,
        eps_r=eps_r,
        T=T,
        GT=phys.photo_generation * T / rho,
        kd_in0=phys.kd_in0 * T,
        kd_out=phys.kd_out * T,
        kr_in=phys.kr_in * T,
        kr_out=phys.kr_out * T,
        c_r=c_r,
        c_r_prime=phys.recombination_fraction * c_r,
        mu_n0=phys.mu_n0,
        gamma_n=phys.gamma_n,
        mu_p0=phys.mu_p0,
        gamma_p=phys.gamma_p,
        D_X=phys.exciton_mobility_ratio,
        x0=x0, xl=xm - half, xm=xm, xr=xm + half, xL=xL,
        h_over_L=phys.pair_separation / L,
        dU=phys.workfunction_gap,
        A_M=_m_prefactor(lambda2, eps_r, L**3 * rho),
        n0=n0, nL=nL, p0=p0, pL=pL,
    )


def default_physical_params() -> PhysicalParams:
    """Physical inputs whose scaling reproduces the default set to ~1%."""
    return PhysicalParams()


def default_params() -> ScaledParams:
    """The canonical scaled parameter set.

    Values are taken as tabulated (rounded) rather than recomputed, so that
    e.g. ``c_r`` is exactly 0.6987.  ``A_M`` follows from ``lambda2``.
    """
    lambda2 = 1.43
    eps_r = 4.0
    return ScaledParams(
        lambda2=lambda2,
        eps_r=eps_r,
        T=0.00386,
        GT=16990.0,
        kd_in0=386.0,
        kd_out=1.0,
        kr_in=3.86,
        kr_out=3864.0,
        c_r=0.6987,
        c_r_prime=0.6987,
        mu_n0=3.0,
        gamma_n=0.788,
        mu_p0=1.0,
        gamma_p=0.153,
        D_X=0.01,
        x0=0.0, xl=0.49, xm=0.5, xr=0.51, xL=1.5,
        h_over_L=0.01,
        dU=12.0,
        A_M=_m_prefactor(lambda2, eps_r, 1e-21 * 1e20),
        n0=4e-7, nL=0.04, p0=0.04, pL=4e-7,
    )


_POSITIVE = ("lambda2", "eps_r", "T", "kd_in0", "kd_out", "kr_in", "kr_out",
             "c_r", "mu_n0", "mu_p0", "D_X", "A_M")
_NONNEGATIVE = ("GT", "c_r_prime", "gamma_n", "gamma_p", "h_over_L", "dU",
                "n0", "nL", "p0", "pL")


def validate(params: ScaledParams) -> list[str]:
    """List every violated invariant of ``params``.

    Returns
    -------
    list of str
        Empty when the parameter set is admissible.
    """
    out = []
    for name in _POSITIVE:
        v = getattr(params, name)
        if not (math.isfinite(v) and v > 0):
            out.append(f"{name}: must be positive and finite (got {v!r})")
    for name in _NONNEGATIVE:
        v = getattr(params, name)
        if not (math.isfinite(v) and v >= 0):
            out.append(f"{name}: must be non-negative and finite (got {v!r})")
    g = (params.x0, params.xl, params.xm, params.xr, params.xL)
    if not all(a < b for a, b in zip(g, g[1:])):
        out.append("geometry: requires x0 < xl < xm < xr < xL "
                   f"(got {', '.join(f'{v:g}' for v in g)})")
    elif not math.isclose(params.xm, 0.5 * (params.xl + params.xr),
                          rel_tol=1e-12, abs_tol=1e-12):
        out.append("geometry: xm must be the interface midpoint")
    if params.c_r_prime > params.c_r * (1 + 1e-12):
        out.append("c_r_prime: must not exceed c_r (fraction c <= 1)")
    if params.u_profile not in ("quadratic", "linear"):
        out.append(f"u_profile: must be 'quadratic' or 'linear' (got {params.u_profile!r})")
    if params.kd_in_const is not None and not params.kd_in_const > 0:
        out.append("kd_in_const: must be positive when set")
    return out
