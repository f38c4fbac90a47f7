"""One-dimensional vertex-centred finite volumes on a graded mesh.

Unknowns live on nodes.  Each node owns the control volume bounded by the
neighbouring face midpoints; because the interface ends are nodes, every half
cell lies in a single region, which lets region-dependent rates be integrated
exactly over each control volume.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .errors import PivotBreakdownError
from .materials import (Region, UProfile, geminate_rate, interface_dissociation_rate,
                        mobility_n, mobility_p, u_and_slope)
from .scaling import ScaledParams

__all__ = [
    "Mesh",
    "TridiagonalSystem",
    "build_mesh",
    "bernoulli",
    "sg_edge_flux",
    "face_fields",
    "nodal_field",
    "assemble_poisson",
    "assemble_continuity",
    "assemble_exciton",
    "solve_tridiagonal",
    "write_mesh_csv",
]

ELECTRON = -1
HOLE = 1


@dataclass(frozen=True, eq=False)
class Mesh:
    """Graded node set with region bookkeeping.

    Attributes
    ----------
    x : ndarray
        Strictly increasing node positions from x0 to xL.
    h : ndarray
        Cell widths, ``len(x) - 1`` entries.
    region : ndarray of int8
        Per-node :class:`~opvbilayer.materials.Region` tag.
    il, im, ir : int
        Node indices of xl, the node nearest xm, and xr.
    half_in, half_out : ndarray
        Per-node control-volume length inside and outside the interface.
    """

    x: np.ndarray
    h: np.ndarray
    region: np.ndarray
    il: int
    im: int
    ir: int
    half_in: np.ndarray
    half_out: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.x.size

    @property
    def n_cells(self) -> int:
        return self.h.size

    @property
    def volume(self) -> np.ndarray:
        return self.half_in + self.half_out

    @property
    def interface_mask(self) -> np.ndarray:
        return self.region == Region.INTERFACE

    @property
    def interface_faces(self) -> np.ndarray:
        """Boolean mask of cells lying inside the interface."""
        return (np.arange(self.n_cells) >= self.il) & (np.arange(self.n_cells) < self.ir)

    @classmethod
    def from_nodes(cls, x, params: ScaledParams) -> "Mesh":
        x = np.asarray(x, dtype=float)
        h = np.diff(x)
        if np.any(h <= 0):
            raise ValueError("mesh nodes must be strictly increasing")
        il = int(np.argmin(np.abs(x - params.xl)))
        ir = int(np.argmin(np.abs(x - params.xr)))
        if not (np.isclose(x[il], params.xl, rtol=0, atol=1e-13)
                and np.isclose(x[ir], params.xr, rtol=0, atol=1e-13)):
            raise ValueError("interface ends must be mesh nodes")
        im = int(np.argmin(np.abs(x - params.xm)))
        region = np.full(x.size, Region.INTERFACE, dtype=np.int8)
        region[:il] = Region.LEFT_BULK
        region[ir + 1:] = Region.RIGHT_BULK
        cell_in = np.zeros(h.size, dtype=bool)
        cell_in[il:ir] = True
        half_in = np.zeros(x.size)
        half_out = np.zeros(x.size)
        hh = 0.5 * h
        np.add.at(half_in, np.arange(h.size), np.where(cell_in, hh, 0.0))
        np.add.at(half_in, np.arange(1, x.size), np.where(cell_in, hh, 0.0))
        np.add.at(half_out, np.arange(h.size), np.where(cell_in, 0.0, hh))
        np.add.at(half_out, np.arange(1, x.size), np.where(cell_in, 0.0, hh))
        return cls(x, h, region, il, im, ir, half_in, half_out)


def _graded_side(length: float, n: int, h0: float, ratio: float) -> np.ndarray:
    # widths h0*r, h0*r^2, ... capped at hmax, the cap chosen to fill `length`
    k = np.arange(1, n + 1)
    geo = h0 * ratio ** np.minimum(k, 700 / np.log(ratio))
    if geo.sum() <= length:
        return geo * (length / geo.sum())
    if n * h0 >= length:
        return np.full(n, length / n)
    cap = brentq(lambda c: np.minimum(geo, c).sum() - length, h0, length, xtol=1e-15)
    w = np.minimum(geo, cap)
    return w * (length / w.sum())


def build_mesh(params: ScaledParams, n_cells: int = 2000, grading: float = 1.15,
               interface_cells: int | None = None) -> Mesh:
    """Build the solver mesh.

    Parameters
    ----------
    params : ScaledParams
        Supplies the geometry.
    n_cells : int
        Total number of cells, at least 100.
    grading : float
        Geometric growth ratio away from the interface, in ``(1, 2]``.
        ``1.0`` requests a uniform mesh with xl and xr inserted.
    interface_cells : int, optional
        Uniform cells across the interface; defaults to
        ``max(40, n_cells // 20)``.

    Returns
    -------
    Mesh
    """
    if int(n_cells) != n_cells or n_cells < 100:
        raise ValueError("n_cells must be an integer >= 100")
    n_cells = int(n_cells)
    x0, xl, xr, xL = params.x0, params.xl, params.xr, params.xL
    if grading == 1.0:
        x = np.linspace(x0, xL, n_cells + 1)
        hmin = (xL - x0) / n_cells
        x = x[(np.abs(x - xl) > 1e-3 * hmin) & (np.abs(x - xr) > 1e-3 * hmin)]
        x = np.sort(np.concatenate([x, [xl, xr]]))
        return Mesh.from_nodes(x, params)
    if not 1.0 < grading <= 2.0:
        raise ValueError("grading ratio must lie in (1, 2]")
    n_int = interface_cells or max(40, n_cells // 20)
    if n_int >= n_cells - 2:
        raise ValueError("too few cells for the bulk regions")
    h0 = (xr - xl) / n_int
    left, right = xl - x0, xL - xr
    n_left = max(1, int(round((n_cells - n_int) * left / (left + right))))
    n_right = n_cells - n_int - n_left
    hl = _graded_side(left, n_left, h0, grading)[::-1]
    hr = _graded_side(right, n_right, h0, grading)
    xs_left = x0 + np.concatenate([[0.0], np.cumsum(hl)])
    xs_left[-1] = xl
    xs_int = xl + h0 * np.arange(1, n_int + 1)
    xs_int[-1] = xr
    xs_right = xr + np.cumsum(hr)
    xs_right[-1] = xL
    return Mesh.from_nodes(np.concatenate([xs_left, xs_int, xs_right]), params)


def write_mesh_csv(mesh: Mesh, path) -> None:
    """Write node positions and region tags as CSV."""
    names = {int(r): r.name.lower() for r in Region}
    with open(Path(path), "w", newline="\n") as fh:
        fh.write("x,region\n")
        for xi, r in zip(mesh.x, mesh.region):
            fh.write(f"{xi:.17g},{names[int(r)]}\n")


@dataclass
class TridiagonalSystem:
    """``lower[i-1] u[i-1] + diag[i] u[i] + upper[i] u[i+1] = rhs[i]``."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray
    label: str = ""

    def matvec(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = self.diag * u
        out[:-1] += self.upper * u[1:]
        out[1:] += self.lower * u[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        return (np.diag(self.diag) + np.diag(self.upper, 1) + np.diag(self.lower, -1))

    def set_dirichlet(self, row: int, value: float) -> None:
        n = self.diag.size
        self.diag[row] = 1.0
        if row < n - 1:
            self.upper[row] = 0.0
        if row > 0:
            self.lower[row - 1] = 0.0
        self.rhs[row] = value


def bernoulli(z):
    """Bernoulli function B(z) = z/(e^z - 1), vectorised."""
    return _kernels.bernoulli(np.asarray(z, dtype=float))


def sg_edge_flux(u_left, u_right, phi_left, phi_right, mu_edge, h_edge, carrier_sign):
    """Scharfetter-Gummel flux across a face.

    Electrons (``carrier_sign=-1``) carry ``mu (u_x - u phi_x)``, holes
    (``+1``) carry ``-mu (u_x + u phi_x)``.  The flux vanishes on the
    respective Boltzmann profiles ``exp(-sign * phi)`` exactly.
    """
    s = float(carrier_sign)
    if s not in (-1.0, 1.0):
        raise ValueError("carrier_sign must be -1 or +1")
    dphi = np.asarray(phi_right, dtype=float) - np.asarray(phi_left, dtype=float)
    g = np.asarray(mu_edge, dtype=float) / np.asarray(h_edge, dtype=float)
    return -s * g * (bernoulli(-s * dphi) * u_right - bernoulli(s * dphi) * u_left)


def face_fields(V, mesh: Mesh) -> np.ndarray:
    """Field -V_x at cell midpoints."""
    return -np.diff(V) / mesh.h


def nodal_field(V, mesh: Mesh) -> np.ndarray:
    """Field -V_x at nodes, centred inside and one-sided at the ends."""
    V = np.asarray(V, dtype=float)
    E = np.empty_like(V)
    E[1:-1] = -(V[2:] - V[:-2]) / (mesh.x[2:] - mesh.x[:-2])
    E[0] = -(V[1] - V[0]) / mesh.h[0]
    E[-1] = -(V[-1] - V[-2]) / mesh.h[-1]
    return E


def _potential(V, mesh: Mesh, params: ScaledParams) -> np.ndarray:
    U, _ = u_and_slope(mesh.x, UProfile.from_params(params))
    return U + V


def dipole_source(X, mesh: Mesh, params: ScaledParams) -> np.ndarray:
    """Control-volume integral of (h/L) chi_I X_x for piecewise-linear X."""
    X = np.asarray(X, dtype=float)
    out = np.zeros(mesh.n_nodes)
    dX = np.diff(X)
    cells = mesh.interface_faces
    # each interface half cell contributes half its X increment
    half = np.where(cells, 0.5 * dX, 0.0)
    out[:-1] += half
    out[1:] += half
    return params.h_over_L * out


def cell_rates(E_nodes, mesh: Mesh, params: ScaledParams):
    """Control-volume integrated dissociation and geminate rates per node."""
    kd_in = interface_dissociation_rate(E_nodes, params)
    kd = kd_in * mesh.half_in + params.kd_out * mesh.half_out
    kr = params.kr_in * mesh.half_in + params.kr_out * mesh.half_out
    return kd, kr


def assemble_poisson(n, p, X, mesh: Mesh, params: ScaledParams, V_diff: float) -> TridiagonalSystem:
    """Assemble ``-lambda^2 eps_r V_xx = p - n + (h/L) chi_I X_x``.

    Dirichlet rows impose ``V(x0) = V_diff`` and ``V(xL) = 0``.
    """
    c = params.lambda2 * params.eps_r / mesh.h
    diag = np.zeros(mesh.n_nodes)
    diag[:-1] += c
    diag[1:] += c
    rhs = mesh.volume * (np.asarray(p) - np.asarray(n)) + dipole_source(X, mesh, params)
    sys = TridiagonalSystem(-c.copy(), diag, -c.copy(), rhs, "poisson")
    sys.set_dirichlet(0, V_diff)
    sys.set_dirichlet(mesh.n_nodes - 1, 0.0)
    return sys


def _carrier(carrier) -> tuple[int, str]:
    if carrier in ("n", ELECTRON):
        return ELECTRON, "n"
    if carrier in ("p", HOLE):
        return HOLE, "p"
    raise ValueError("carrier must be 'n' or 'p'")


def assemble_continuity(carrier, n, p, X, V, mesh: Mesh, params: ScaledParams,
                        boundary: tuple[float, float] | None = None) -> TridiagonalSystem:
    """Assemble the steady continuity equation for one carrier.

    The recombination term is linearised as ``c_r n p_prev`` (resp.
    ``c_r n_prev p``) with the previous iterate clamped at zero; the source
    is ``k_d(E) X_prev`` with ``E`` from the supplied (freshest) potential.

    Parameters
    ----------
    carrier : {'n', 'p'}
    n, p, X : array_like
        Previous iterate.
    V : array_like
        Updated potential.
    boundary : tuple of float, optional
        Dirichlet values at (x0, xL); defaults to the parameter set.
    """
    sign, name = _carrier(carrier)
    V = np.asarray(V, dtype=float)
    Ef = face_fields(V, mesh)
    mu = mobility_n(Ef, params) if name == "n" else mobility_p(Ef, params)
    dphi = np.diff(_potential(V, mesh, params))
    lower, diag, upper = _kernels.sg_coefficients(dphi, mu / mesh.h, float(sign))
    other = np.maximum(np.asarray(p if name == "n" else n, dtype=float), 0.0)
    diag = diag + mesh.volume * params.c_r * other
    kd, _ = cell_rates(nodal_field(V, mesh), mesh, params)
    rhs = kd * np.asarray(X, dtype=float)
    sys = TridiagonalSystem(lower, diag, upper, rhs, name)
    if boundary is None:
        boundary = (params.n0, params.nL) if name == "n" else (params.p0, params.pL)
    sys.set_dirichlet(0, boundary[0])
    sys.set_dirichlet(mesh.n_nodes - 1, boundary[1])
    return sys


def assemble_exciton(n, p, X, V, mesh: Mesh, params: ScaledParams) -> TridiagonalSystem:
    """Assemble ``-D_X X_xx + (k_d + k_r) X = c_r' n p + G`` with Neumann ends."""
    c = params.D_X / mesh.h
    diag = np.zeros(mesh.n_nodes)
    diag[:-1] += c
    diag[1:] += c
    kd, kr = cell_rates(nodal_field(V, mesh), mesh, params)
    diag += kd + kr
    npc = np.maximum(np.asarray(n, dtype=float), 0.0) * np.maximum(np.asarray(p, dtype=float), 0.0)
    rhs = mesh.volume * (params.c_r_prime * npc + params.GT)
    return TridiagonalSystem(-c.copy(), diag, -c.copy(), rhs, "X")


def solve_tridiagonal(sys: TridiagonalSystem) -> np.ndarray:
    """Direct banded elimination.

    Raises
    ------
    PivotBreakdownError
        With the failing row and the system label.
    """
    try:
        return _kernels.thomas(sys.lower, sys.diag, sys.upper, sys.rhs)
    except PivotBreakdownError as exc:
        raise PivotBreakdownError(exc.row, exc.pivot, sys.label or None) from None
