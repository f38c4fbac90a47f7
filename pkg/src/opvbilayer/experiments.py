"""Experiment drivers: single solves, IV sweeps and characteristic points."""

from __future__ import annotations

import dataclasses
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .asymptotics import (AsymptoticProfile, asymptotic_iv, asymptotic_profile,
                          unipolar_solve, write_asymptotic_csv, zeroth_order_context)
from .config import Config
from .errors import CharacteristicPointError, ConfigError
from .grid import Mesh, build_mesh
from .iv import IVCurve, IVPoint
from .solver import (CurrentProfile, DeviceState, SolverDiagnostics, compute_currents,
                     solve_steady_state, write_profile_csv, _write_columns)

__all__ = [
    "SweepRange",
    "SingleResult",
    "make_mesh",
    "run_single",
    "run_iv_sweep",
    "find_open_circuit",
    "find_optimal_power",
    "compare_asymptotics",
    "run_shunt",
    "run_kdconst",
    "bias_values",
    "SWEEP_LIMITS",
]

SWEEP_LIMITS = (-25.0, 15.0)
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepRange:
    start: float
    stop: float
    step: float


@dataclass
class SingleResult:
    state: DeviceState
    diagnostics: SolverDiagnostics
    current: CurrentProfile
    asymptotics: Optional[AsymptoticProfile] = None


def make_mesh(config: Config) -> Mesh:
    m = config.mesh
    return build_mesh(config.params, m.n_cells, m.grading, m.interface_cells)


def bias_values(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid ``start, start + step, ...`` up to ``stop``."""
    lo, hi = SWEEP_LIMITS
    if step <= 0:
        raise ConfigError("sweep step must be positive")
    if stop < start:
        raise ConfigError("sweep stop must not precede start")
    if start < lo - 1e-12 or stop > hi + 1e-12:
        raise ConfigError(f"sweep range must lie within [{lo:g}, {hi:g}]")
    n = int(math.floor((stop - start) / step + 1e-9))
    return np.round(start + step * np.arange(n + 1), 12)


def _solve(config: Config, V: float, mesh: Mesh, initial=None):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        state, diag = solve_steady_state(config.params, V, config.solver, mesh=mesh,
                                         initial=initial, boundary=config.boundary_for(V))
        cur = compute_currents(state, config.params, warn_tol=np.inf)
    return state, diag, cur


def run_single(config: Config, *, V_diff: float | None = None, with_asymptotics: bool = False,
               out=None, asym_out=None) -> SingleResult:
    """One steady solve, optionally with the asymptotic profile on the same nodes.

    ``out`` receives the solver CSV, ``asym_out`` the asymptotic CSV.
    """
    V = config.V_diff if V_diff is None else float(V_diff)
    mesh = make_mesh(config)
    state, diag, cur = _solve(config, V, mesh)
    asym = None
    if with_asymptotics:
        ctx = zeroth_order_context(config.params, V, boundary=config.boundary_for(V))
        asym = asymptotic_profile(ctx, mesh.x)
    if out is not None:
        write_profile_csv(state, config.params, out)
    if asym is not None and asym_out is not None:
        write_asymptotic_csv(asym, asym_out)
    return SingleResult(state, diag, cur, asym)


def _cold_point(args):
    config, V = args
    mesh = make_mesh(config)
    state, diag, cur = _solve(config, V, mesh)
    return IVPoint(V, cur.J, config.V_int, bool(diag.converged), diag.iterations)


def run_iv_sweep(config: Config, start: float | None = None, stop: float | None = None,
                 step: float | None = None, *, parallel: int = 0, out=None,
                 label: str = "numeric") -> IVCurve:
    """IV sweep; warm-started and sequential unless ``parallel > 1``.

    A point that fails to converge is kept with ``converged = False`` and
    the next point restarts from the last converged state.
    """
    V_list = bias_values(config.sweep_start if start is None else start,
                         config.sweep_stop if stop is None else stop,
                         config.sweep_step if step is None else step)
    points = []
    if parallel and parallel > 1:
        with ProcessPoolExecutor(max_workers=int(parallel)) as ex:
            points = list(ex.map(_cold_point, [(config, float(V)) for V in V_list]))
    else:
        mesh = make_mesh(config)
        last = None
        for V in V_list:
            state, diag, cur = _solve(config, float(V), mesh, initial=last)
            if diag.converged:
                last = state
            points.append(IVPoint(float(V), cur.J, config.V_int, bool(diag.converged),
                                  diag.iterations))
    curve = IVCurve(points, config.V_int, label=label)
    if out is not None:
        curve.write_csv(out)
    return curve


class _Evaluator:
    """Cached J(V) with warm starts from the nearest solved bias."""

    def __init__(self, config: Config):
        self.config = config
        self.mesh = make_mesh(config)
        self.states: dict[float, DeviceState] = {}
        self.J: dict[float, float] = {}

    def __call__(self, V: float) -> float:
        V = float(V)
        if V in self.J:
            return self.J[V]
        warm = None
        if self.states:
            near = min(self.states, key=lambda v: abs(v - V))
            warm = self.states[near]
        state, diag, cur = _solve(self.config, V, self.mesh, initial=warm)
        if not diag.converged and warm is not None:
            state, diag, cur = _solve(self.config, V, self.mesh)
        if not diag.converged:
            raise CharacteristicPointError(f"solver did not converge at V_diff = {V:g}")
        self.states[V] = state
        self.J[V] = cur.J
        return cur.J


def find_open_circuit(config: Config, bracket: tuple[float, float] | None = None,
                      tol: float | None = None, *, evaluator=None) -> float:
    """Bisection for ``J(V_diff) = 0`` down to ``|J| < tol``.

    Raises
    ------
    CharacteristicPointError
        If J does not change sign over the bracket.
    """
    a, b = config.oc_bracket if bracket is None else bracket
    tol = config.oc_tol if tol is None else tol
    J = evaluator or _Evaluator(config)
    Ja, Jb = J(a), J(b)
    if Ja == 0:
        return float(a)
    if Jb == 0:
        return float(b)
    if np.sign(Ja) == np.sign(Jb):
        raise CharacteristicPointError(
            f"no sign change of J on [{a:g}, {b:g}]: J({a:g}) = {Ja:.6g}, J({b:g}) = {Jb:.6g}")
    for _ in range(200):
        m = 0.5 * (a + b)
        Jm = J(m)
        if abs(Jm) < tol or b - a < 1e-10:
            return float(m)
        if np.sign(Jm) == np.sign(Ja):
            a, Ja = m, Jm
        else:
            b, Jb = m, Jm
    return float(0.5 * (a + b))


def find_optimal_power(config: Config, bracket: tuple[float, float] | None = None, *,
                       coarse_step: float = 1.0, tol: float | None = None,
                       evaluator=None) -> tuple[float, float]:
    """Maximise the generated power ``-J (V_int + V_diff)``.

    The default bracket is ``[-V_int, V_oc]``, with the upper end of the
    open-circuit bracket standing in when no crossing is found.

    Returns
    -------
    V_opp, P_max : float
    """
    tol = config.opp_tol if tol is None else tol
    J = evaluator or _Evaluator(config)
    if bracket is None:
        try:
            hi = find_open_circuit(config, evaluator=J)
        except CharacteristicPointError:
            hi = config.oc_bracket[1]
        bracket = (-config.V_int, hi)
    lo, hi = bracket

    def power(V):
        return -J(V) * (config.V_int + V)

    grid = np.arange(lo, hi + 1e-9, coarse_step)
    vals = np.array([power(v) for v in grid])
    if not np.any(vals > 0):
        raise CharacteristicPointError(
            f"no positive generated power on [{lo:g}, {hi:g}] (max {vals.max():.6g})")
    k = int(np.argmax(vals))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    c, d = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    fc, fd = power(c), power(d)
    while b - a >= tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = power(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = power(d)
    best = max([(vals[k], grid[k]), (fc, c), (fd, d)])
    return float(best[1]), float(best[0])


COMPARE_COLUMNS = ["x", "n_num", "p_num", "X_num", "E_num", "n0", "p0", "X0", "E1",
                   "p_unipolar", "n_unipolar"]


def compare_asymptotics(config: Config, out=None, *, V_diff: float | None = None) -> dict:
    """Numeric vs zeroth-order and unipolar profiles on the solver nodes.

    Unipolar columns are filled in their own bulk layer (NaN elsewhere) and
    use the numeric contact data ``(p(x0), E(x0), J)`` and
    ``(n(xL), E(xL), J)``.
    """
    res = run_single(config, V_diff=V_diff, with_asymptotics=True)
    st, p = res.state, config.params
    x = st.mesh.x
    E = st.E
    E0 = res.asymptotics.E0
    hole = unipolar_solve("hole", st.p[0], E[0], res.current.J, p, E0=E0)
    elec = unipolar_solve("electron", st.n[-1], E[-1], res.current.J, p, E0=E0)
    left = x <= p.xl
    right = x >= p.xr
    pu = np.full_like(x, np.nan)
    nu = np.full_like(x, np.nan)
    pu[left] = hole.evaluate(x[left]).density
    nu[right] = elec.evaluate(x[right]).density
    a = res.asymptotics
    cols = dict(zip(COMPARE_COLUMNS, [x, st.n, st.p, st.X, E, a.n0, a.p0, a.X0, a.E1, pu, nu]))
    if out is not None:
        _write_columns(out, COMPARE_COLUMNS, list(cols.values()))
    cols["J_num"] = res.current.J
    cols["currents"] = a.currents
    return cols


def _with_params(config: Config, **changes) -> Config:
    return dataclasses.replace(config, params=config.params.with_updates(**changes))


ZERO_BC = dict(n0=0.0, nL=0.0, p0=0.0, pL=0.0)


def run_shunt(config: Config, *, parallel: int = 0, out=None) -> dict:
    """Dark shunt sweep and the illuminated difference it should match.

    Returns curves ``shunt`` (G = 0, contact densities kept), ``full``
    (defaults), ``zero_bc`` (illuminated, zero contact densities) and the
    pointwise difference ``full - zero_bc``.
    """
    shunt = run_iv_sweep(_with_params(config, GT=0.0), parallel=parallel, label="shunt")
    full = run_iv_sweep(config, parallel=parallel, label="full")
    zero = run_iv_sweep(_with_params(config, **ZERO_BC), parallel=parallel, label="zero-bc")
    diff = full.J - zero.J
    if out is not None:
        _write_columns(out, ["V_diff", "J_shunt", "J_full", "J_zero_bc", "J_difference"],
                       [shunt.V, shunt.J, full.J, zero.J, diff])
    return {"shunt": shunt, "full": full, "zero_bc": zero, "difference": diff}


def run_kdconst(config: Config, kd_in: float = 2763.0, *, parallel: int = 0, out=None) -> dict:
    """Numeric and asymptotic sweeps with a field-independent interface rate."""
    cfg = _with_params(config, kd_in_const=float(kd_in))
    curve = run_iv_sweep(cfg, parallel=parallel, label=f"kd-const-{kd_in:g}")
    V = curve.V
    asym = asymptotic_iv(cfg.params, V[V != 0], V_int=config.V_int)
    if out is not None:
        curve.write_csv(out)
    return {"numeric": curve, "asymptotic": asym}


def write_annotations(curve: IVCurve, path) -> None:
    Path(path).write_text(curve.annotation_text())
