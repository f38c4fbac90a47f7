"""Shared fixtures; expensive solves are computed once per session."""

import warnings

import numpy as np
import pytest

from opvbilayer import default_params
from opvbilayer.config import Config
from opvbilayer.grid import build_mesh
from opvbilayer.solver import compute_currents, solve_steady_state


@pytest.fixture(scope="session")
def params():
    return default_params()


@pytest.fixture(scope="session")
def mesh(params):
    return build_mesh(params)


@pytest.fixture(scope="session")
def small_mesh(params):
    return build_mesh(params, n_cells=400)


def _solve(params, V, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        state, diag = solve_steady_state(params, V, **kw)
        cur = compute_currents(state, params, warn_tol=np.inf)
    return state, diag, cur


@pytest.fixture(scope="session")
def sc_solution(params, mesh):
    return _solve(params, -19.3, mesh=mesh)


@pytest.fixture(scope="session")
def solve_at(params, mesh):
    cache = {}

    def get(V, **kw):
        key = (V, tuple(sorted(kw.items())))
        if key not in cache:
            cache[key] = _solve(params, V, mesh=mesh, **kw)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def default_sweep():
    from opvbilayer.experiments import run_iv_sweep
    return run_iv_sweep(Config())


@pytest.fixture(scope="session")
def kdconst_sweep():
    from opvbilayer.experiments import run_kdconst
    return run_kdconst(Config(), 2763.0)


ACCEPTANCE = []


@pytest.fixture(scope="session")
def acceptance():
    """Recorder for acceptance lines; prints immediately and in the summary."""

    def record(label, ok, detail):
        line = f"{label}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
