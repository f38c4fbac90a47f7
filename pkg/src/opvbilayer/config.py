"""Flat ``key = value`` configuration files.

Every :class:`~opvbilayer.scaling.ScaledParams` field may be set, along with
mesh, solver and experiment options.  Lines starting with ``#`` or ``;`` are
comments.  Unknown keys are rejected.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .errors import ConfigError
from .iv import V_INT_DEFAULT
from .scaling import ScaledParams, default_params, validate
from .solver import SolverOptions

__all__ = ["MeshOptions", "Config", "load_config", "parse_config", "config_keys"]

_SECTION = "opvbilayer"


@dataclass(frozen=True)
class MeshOptions:
    n_cells: int = 2000
    grading: float = 1.15
    interface_cells: Optional[int] = None


@dataclass
class Config:
    """Resolved run configuration.

    ``boundary_hook`` maps a bias to boundary densities ``(n0, nL, p0, pL)``
    for sweeps that vary the contacts per bias; it is a programmatic hook
    and cannot be set from a file.
    """

    params: ScaledParams = field(default_factory=default_params)
    mesh: MeshOptions = field(default_factory=MeshOptions)
    solver: SolverOptions = field(default_factory=SolverOptions)
    V_int: float = V_INT_DEFAULT
    V_diff: float = -V_INT_DEFAULT
    sweep_start: float = -19.3
    sweep_stop: float = 14.0
    sweep_step: float = 0.5
    oc_bracket: tuple[float, float] = (0.0, 15.0)
    oc_tol: float = 0.05
    opp_tol: float = 0.1
    boundary_hook: Optional[Callable[[float], tuple]] = None

    def boundary_for(self, V_diff: float):
        if self.boundary_hook is None:
            return None
        bc = tuple(float(v) for v in self.boundary_hook(V_diff))
        if len(bc) != 4:
            raise ConfigError("boundary hook must return (n0, nL, p0, pL)")
        return bc


_PARAM_FIELDS = {f.name: f for f in dataclasses.fields(ScaledParams)}
_MESH_FIELDS = {f.name: f for f in dataclasses.fields(MeshOptions)}
_SOLVER_KEYS = {"tol": float, "max_iter": int, "divergence_factor": float,
                "fallback_alphas": "floats", "damping": "stages"}
_RUN_KEYS = {"V_int": float, "V_diff": float, "sweep_start": float, "sweep_stop": float,
             "sweep_step": float, "oc_tol": float, "opp_tol": float, "oc_bracket": "pair"}


def config_keys() -> list[str]:
    return sorted(set(_PARAM_FIELDS) | set(_MESH_FIELDS) | set(_SOLVER_KEYS) | set(_RUN_KEYS))


def _floats(raw: str):
    items = [s for s in raw.replace(",", " ").split() if s]
    return tuple(float(s) for s in items)


def _convert(key: str, raw: str, kind):
    raw = raw.strip()
    try:
        if kind == "floats":
            return _floats(raw)
        if kind == "pair":
            v = _floats(raw)
            if len(v) != 2:
                raise ValueError("expected two numbers")
            return v
        if kind == "stages":
            # "0.01x3, 0.6x1"
            stages = []
            for part in raw.split(","):
                a, _, n = part.strip().partition("x")
                stages.append((float(a), int(n) if n else 1))
            return tuple(stages)
        if kind is int:
            return int(raw)
        if kind == "optional_float":
            return None if raw.lower() in ("", "none") else float(raw)
        if kind == "optional_int":
            return None if raw.lower() in ("", "none") else int(raw)
        if kind is str:
            return raw
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from None


def _field_kind(f):
    t = str(f.type)
    if "Optional[float]" in t or "float | None" in t:
        return "optional_float"
    if "Optional[int]" in t or "int | None" in t:
        return "optional_int"
    if t in ("str", "<class 'str'>"):
        return str
    if t in ("int", "<class 'int'>"):
        return int
    return float


def parse_config(text: str, base: Config | None = None) -> Config:
    """Parse configuration text on top of ``base`` (defaults if omitted)."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str  # keys are case sensitive (xl vs xL)
    try:
        cp.read_string(f"[{_SECTION}]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from None
    if cp.sections() != [_SECTION]:
        raise ConfigError("section headers are not allowed in configuration files")
    cfg = dataclasses.replace(base) if base is not None else Config()
    p_up, m_up, s_up, r_up = {}, {}, {}, {}
    for key, raw in cp.items(_SECTION):
        if key in _PARAM_FIELDS:
            p_up[key] = _convert(key, raw, _field_kind(_PARAM_FIELDS[key]))
        elif key in _MESH_FIELDS:
            m_up[key] = _convert(key, raw, _field_kind(_MESH_FIELDS[key]))
        elif key in _SOLVER_KEYS:
            s_up[key] = _convert(key, raw, _SOLVER_KEYS[key])
        elif key in _RUN_KEYS:
            r_up[key] = _convert(key, raw, _RUN_KEYS[key])
        else:
            raise ConfigError(f"unknown configuration key {key!r}")
    if p_up:
        cfg.params = cfg.params.with_updates(**p_up)
    problems = validate(cfg.params)
    if problems:
        raise ConfigError("invalid parameters: " + "; ".join(problems))
    if m_up:
        cfg.mesh = dataclasses.replace(cfg.mesh, **m_up)
    if s_up:
        cfg.solver = dataclasses.replace(cfg.solver, **s_up)
    for k, v in r_up.items():
        setattr(cfg, k, v)
    if cfg.sweep_step <= 0:
        raise ConfigError("sweep_step must be positive")
    if not cfg.solver.tol > 0 or cfg.solver.max_iter < 1:
        raise ConfigError("solver tol must be positive and max_iter at least 1")
    return cfg


def load_config(path, base: Config | None = None) -> Config:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from None
    return parse_config(text, base)
