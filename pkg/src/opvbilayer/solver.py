"""Damped Gummel iteration for the steady bilayer system."""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .grid import (ELECTRON, HOLE, Mesh, assemble_continuity, assemble_exciton,
                   assemble_poisson, build_mesh, face_fields, nodal_field,
                   sg_edge_flux, solve_tridiagonal, _potential)
from .materials import mobility_n, mobility_p
from .scaling import ScaledParams

__all__ = [
    "DeviceState",
    "SolverOptions",
    "SolverDiagnostics",
    "CurrentProfile",
    "gummel_step",
    "apply_damping",
    "initial_state",
    "solve_steady_state",
    "compute_currents",
    "equation_residuals",
    "write_profile_csv",
    "format_diagnostics",
]

FIELDS = ("V", "n", "p", "X")


@dataclass(frozen=True, eq=False)
class DeviceState:
    """Nodal fields at one bias point.

    ``boundary`` holds the Dirichlet densities ``(n0, nL, p0, pL)`` used for
    this state, which may differ from the parameter set.
    """

    mesh: Mesh
    V: np.ndarray
    n: np.ndarray
    p: np.ndarray
    X: np.ndarray
    V_diff: float
    boundary: tuple[float, float, float, float]
    generation: bool = True
    converged: bool = False

    @property
    def E(self) -> np.ndarray:
        return nodal_field(self.V, self.mesh)

    def replace_fields(self, V, n, p, X, converged: bool = False) -> "DeviceState":
        return DeviceState(self.mesh, V, n, p, X, self.V_diff, self.boundary,
                           self.generation, converged)


@dataclass(frozen=True)
class SolverOptions:
    """Iteration controls.

    ``damping`` lists ``(alpha, n_steps)`` stages; the last stage repeats
    until the iteration stops.  When an attempt fails, the iteration is
    restarted from the same initial guess with each steady factor in
    ``fallback_alphas`` in turn.  A smaller factor shrinks every step, so the
    change tolerance of a fallback attempt is scaled by the ratio of its
    factor to the nominal one.  An attempt whose change grows by
    ``divergence_factor`` over its best value is abandoned early.
    """

    tol: float = 1e-7
    max_iter: int = 500
    damping: tuple[tuple[float, int], ...] = ((0.01, 3), (0.6, 1))
    fallback_alphas: tuple[float, ...] = (0.3, 0.1)
    divergence_factor: float = 1e4

    def schedule(self, k: int, steady: float | None = None) -> float:
        acc = 0
        for i, (alpha, steps) in enumerate(self.damping):
            last = i == len(self.damping) - 1
            if last:
                return steady if steady is not None else alpha
            if k < acc + steps:
                return alpha
            acc += steps
        raise AssertionError("empty damping schedule")

    @property
    def warmup_steps(self) -> int:
        return sum(s for _, s in self.damping[:-1])


@dataclass
class SolverDiagnostics:
    iterations: int = 0
    converged: bool = False
    history: dict = field(default_factory=lambda: {f: [] for f in FIELDS})
    combined: list = field(default_factory=list)
    final_change: float = float("nan")
    damping_used: list = field(default_factory=list)
    attempts: int = 0
    wall_time: float = 0.0
    message: str = ""


@dataclass(frozen=True)
class CurrentProfile:
    """Face currents and the device current (median of total face current)."""

    x_faces: np.ndarray
    Jn: np.ndarray
    Jp: np.ndarray
    J_total: np.ndarray
    J: float
    max_rel_variation: float


def _boundary_of(params: ScaledParams, boundary) -> tuple[float, float, float, float]:
    if boundary is None:
        return (params.n0, params.nL, params.p0, params.pL)
    return tuple(float(b) for b in boundary)


def initial_state(params: ScaledParams, mesh: Mesh, V_diff: float,
                  boundary=None, generation: bool | None = None) -> DeviceState:
    """Linear potential and densities between the contacts, no excitons."""
    bc = _boundary_of(params, boundary)
    s = (mesh.x - mesh.x[0]) / (mesh.x[-1] - mesh.x[0])
    V = V_diff * (1.0 - s)
    n = bc[0] + (bc[1] - bc[0]) * s
    p = bc[2] + (bc[3] - bc[2]) * s
    gen = params.GT > 0 if generation is None else generation
    return DeviceState(mesh, V, n, p, np.zeros_like(s), float(V_diff), bc, gen)


def gummel_step(state: DeviceState, params: ScaledParams):
    """One undamped decoupled update.

    Poisson is solved from the previous densities; the three continuity
    equations then use the new potential and previous densities, so they are
    mutually independent.

    Returns
    -------
    tuple of ndarray
        Candidate ``(V, n, p, X)``.
    """
    mesh = state.mesh
    n0, nL, p0, pL = state.boundary
    V = solve_tridiagonal(assemble_poisson(state.n, state.p, state.X, mesh, params, state.V_diff))
    n = solve_tridiagonal(assemble_continuity("n", state.n, state.p, state.X, V, mesh,
                                              params, boundary=(n0, nL)))
    p = solve_tridiagonal(assemble_continuity("p", state.n, state.p, state.X, V, mesh,
                                              params, boundary=(p0, pL)))
    X = solve_tridiagonal(assemble_exciton(state.n, state.p, state.X, V, mesh, params))
    return V, n, p, X


def apply_damping(state: DeviceState, candidate, alpha: float) -> DeviceState:
    """Convex combination ``alpha * candidate + (1 - alpha) * state``."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("damping factor must lie in (0, 1]")
    cur = (state.V, state.n, state.p, state.X)
    new = [alpha * np.asarray(c) + (1.0 - alpha) * u for c, u in zip(candidate, cur)]
    return state.replace_fields(*new)


def _combined_change(old: DeviceState, new: DeviceState, diag: SolverDiagnostics | None):
    total = 0.0
    for f in FIELDS:
        u0 = getattr(old, f)
        r = float(np.linalg.norm(getattr(new, f) - u0) / (np.linalg.norm(u0) + 1.0))
        if diag is not None:
            diag.history[f].append(r)
        total += r
    return total


def _iterate(start: DeviceState, params: ScaledParams, options: SolverOptions,
             steady: float | None, diag: SolverDiagnostics):
    state = start
    change = float("inf")
    best = float("inf")
    tol = options.tol
    if steady is not None:
        tol *= min(1.0, steady / options.damping[-1][0])
    for k in range(options.max_iter):
        alpha = options.schedule(k, steady)
        new = apply_damping(state, gummel_step(state, params), alpha)
        change = _combined_change(state, new, diag)
        diag.combined.append(change)
        diag.iterations += 1
        state = new
        if not np.isfinite(change):
            break
        if k >= options.warmup_steps:
            if change < tol:
                return state, True, change
            best = min(best, change)
            if change > options.divergence_factor * best:
                break
    return state, False, change


def solve_steady_state(params: ScaledParams, V_diff: float, options: SolverOptions | None = None,
                       *, mesh: Mesh | None = None, initial: DeviceState | None = None,
                       boundary: Sequence[float] | None = None):
    """Solve the steady system at one bias.

    Parameters
    ----------
    params : ScaledParams
    V_diff : float
        Potential difference V(x0) - V(xL).
    options : SolverOptions, optional
    mesh : Mesh, optional
        Defaults to :func:`~opvbilayer.grid.build_mesh` with default settings.
    initial : DeviceState, optional
        Warm start (e.g. the neighbouring bias point).  Its potential is
        shifted linearly to the new contact value.
    boundary : sequence of float, optional
        Dirichlet densities ``(n0, nL, p0, pL)`` overriding the parameters.

    Returns
    -------
    state : DeviceState
        ``state.converged`` is False when the tolerance was not met.
    diagnostics : SolverDiagnostics
    """
    options = options or SolverOptions()
    if mesh is None:
        mesh = initial.mesh if initial is not None else build_mesh(params)
    bc = _boundary_of(params, boundary)
    if initial is not None:
        if initial.mesh is not mesh and initial.mesh.n_nodes != mesh.n_nodes:
            raise ValueError("warm start lives on a different mesh")
        s = (mesh.x - mesh.x[0]) / (mesh.x[-1] - mesh.x[0])
        V = initial.V + (V_diff - initial.V_diff) * (1.0 - s)
        n, p = initial.n.copy(), initial.p.copy()
        n[0], n[-1], p[0], p[-1] = bc[0], bc[1], bc[2], bc[3]
        start = DeviceState(mesh, V, n, p, initial.X.copy(), float(V_diff), bc, params.GT > 0)
    else:
        start = initial_state(params, mesh, V_diff, bc)

    diag = SolverDiagnostics()
    t0 = time.perf_counter()
    steadies = (None,) + tuple(options.fallback_alphas)
    state, ok, change = start, False, float("inf")
    for steady in steadies:
        diag.attempts += 1
        alpha = options.damping[-1][0] if steady is None else steady
        diag.damping_used.append([(a, s) for a, s in options.damping[:-1]] + [(alpha, None)])
        state, ok, change = _iterate(start, params, options, steady, diag)
        if ok:
            break
    diag.converged = ok
    diag.final_change = change
    diag.wall_time = time.perf_counter() - t0
    diag.message = "converged" if ok else (
        f"no convergence after {diag.attempts} attempt(s); last change {change:.3e}")
    return state.replace_fields(state.V, state.n, state.p, state.X, converged=ok), diag


def compute_currents(state: DeviceState, params: ScaledParams, warn_tol: float = 1e-3) -> CurrentProfile:
    """Face currents from the same fitted fluxes used in the assembly.

    The device current is the median of the total current over interior
    faces; a warning is emitted when its relative spread exceeds
    ``warn_tol``.
    """
    mesh = state.mesh
    Ef = face_fields(state.V, mesh)
    phi = _potential(state.V, mesh, params)
    Jn = sg_edge_flux(state.n[:-1], state.n[1:], phi[:-1], phi[1:], mobility_n(Ef, params),
                      mesh.h, ELECTRON)
    Jp = sg_edge_flux(state.p[:-1], state.p[1:], phi[:-1], phi[1:], mobility_p(Ef, params),
                      mesh.h, HOLE)
    Jt = Jn + Jp
    inner = Jt[1:-1] if Jt.size > 2 else Jt
    J = float(np.median(inner))
    spread = float(np.max(np.abs(Jt - J)))
    scale = abs(J)
    var = spread / scale if scale > 0 else (0.0 if spread == 0 else float("inf"))
    if var > warn_tol:
        warnings.warn(f"total current varies by {var:.2e} across faces", RuntimeWarning,
                      stacklevel=2)
    xf = 0.5 * (mesh.x[:-1] + mesh.x[1:])
    return CurrentProfile(xf, Jn, Jp, Jt, J, var)


def equation_residuals(state: DeviceState, params: ScaledParams) -> dict:
    """Relative residuals of the fully coupled discrete equations.

    Each equation is assembled with all coefficients taken from ``state``
    itself, so a fixed point of the Gummel map has zero residual.
    """
    s = state
    n0, nL, p0, pL = s.boundary
    systems = {
        "V": assemble_poisson(s.n, s.p, s.X, s.mesh, params, s.V_diff),
        "n": assemble_continuity("n", s.n, s.p, s.X, s.V, s.mesh, params, boundary=(n0, nL)),
        "p": assemble_continuity("p", s.n, s.p, s.X, s.V, s.mesh, params, boundary=(p0, pL)),
        "X": assemble_exciton(s.n, s.p, s.X, s.V, s.mesh, params),
    }
    out = {}
    for f, sys in systems.items():
        u = getattr(s, f)
        r = sys.matvec(u) - sys.rhs
        scale = np.linalg.norm(sys.rhs) + np.linalg.norm(sys.diag * u)
        out[f] = float(np.linalg.norm(r) / scale) if scale > 0 else 0.0
    return out


def _faces_to_nodes(v: np.ndarray) -> np.ndarray:
    out = np.empty(v.size + 1)
    out[1:-1] = 0.5 * (v[:-1] + v[1:])
    out[0], out[-1] = v[0], v[-1]
    return out


def write_profile_csv(state: DeviceState, params: ScaledParams, path) -> None:
    """Write ``x,n,p,X,V,E,Jn,Jp`` per node."""
    cur = compute_currents(state, params, warn_tol=np.inf)
    cols = [state.mesh.x, state.n, state.p, state.X, state.V, state.E,
            _faces_to_nodes(cur.Jn), _faces_to_nodes(cur.Jp)]
    _write_columns(path, ["x", "n", "p", "X", "V", "E", "Jn", "Jp"], cols)


def _write_columns(path, header, cols) -> None:
    data = np.column_stack(cols)
    np.savetxt(Path(path), data, delimiter=",", header=",".join(header), comments="",
               fmt="%.10e", newline="\n")


def format_diagnostics(diag: SolverDiagnostics, state: DeviceState | None = None,
                       current: Optional[CurrentProfile] = None) -> str:
    """Key-value text block describing a solve."""
    lines = [
        f"converged = {str(diag.converged).lower()}",
        f"iterations = {diag.iterations}",
        f"attempts = {diag.attempts}",
        f"final_change = {diag.final_change:.6e}",
        f"wall_time_s = {diag.wall_time:.4f}",
        "damping = " + "; ".join(
            ",".join(f"{a:g}x{s}" if s is not None else f"{a:g}" for a, s in stages)
            for stages in diag.damping_used),
    ]
    for f in FIELDS:
        h = diag.history[f]
        lines.append(f"last_change_{f} = {h[-1]:.6e}" if h else f"last_change_{f} = nan")
    if state is not None:
        lines.append(f"V_diff = {state.V_diff:.10g}")
        lines.append(f"n_nodes = {state.mesh.n_nodes}")
    if current is not None:
        lines.append(f"J = {current.J:.10g}")
        lines.append(f"J_max_rel_variation = {current.max_rel_variation:.6e}")
    lines.append(f"message = {diag.message}")
    return "\n".join(lines) + "\n"
