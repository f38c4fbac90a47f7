"""Unipolar bulk approximation: Airy construction against Riccati and numerics."""

import numpy as np
import pytest

from opvbilayer.asymptotics import riccati_field, unipolar_solve, zeroth_field
from opvbilayer.errors import AsymptoticsError


def _riccati_residual(sol, x):
    h = 1e-5
    E = sol.E(x)
    dE = (sol.E(x + h) - sol.E(x - h)) / (2 * h)
    drive = -sol.J * x / (sol.lambda_D2 * sol.mu) + sol.C
    if sol.side == "hole":
        return dE - (0.5 * E**2 + drive)
    return dE - (-0.5 * E**2 + drive)


@pytest.fixture(scope="module")
def sc_sides(sc_solution, params):
    st, _, cur = sc_solution
    E0 = zeroth_field(-19.3, params)
    hole = unipolar_solve("hole", st.p[0], st.E[0], cur.J, params, E0=E0)
    elec = unipolar_solve("electron", st.n[-1], st.E[-1], cur.J, params, E0=E0)
    return st, hole, elec


def test_boundary_normalisation(sc_sides, params):
    _, hole, elec = sc_sides
    for sol, xb in ((hole, params.x0), (elec, params.xL)):
        prof = sol.evaluate(np.array([xb]))
        assert abs(prof.V[0]) < 1e-12
        assert prof.E[0] == pytest.approx(sol.boundary_field, rel=1e-10)
        assert prof.density[0] == pytest.approx(sol.boundary_density, rel=1e-9)


def test_riccati_residual(sc_sides, params):
    _, hole, elec = sc_sides
    xh = np.linspace(params.x0 + 0.01, params.xl - 0.01, 41)
    xe = np.linspace(params.xr + 0.01, params.xL - 0.01, 41)
    for sol, x in ((hole, xh), (elec, xe)):
        res = _riccati_residual(sol, x)
        assert np.max(np.abs(res)) <= 1e-6 * max(1.0, np.max(np.abs(sol.E(x))) ** 2)


def test_airy_matches_direct_integration(sc_sides, params):
    _, hole, elec = sc_sides
    xh = np.linspace(params.x0, params.xl, 30)
    xe = np.linspace(params.xr, params.xL, 30)
    for sol, x in ((hole, xh), (elec, xe)):
        np.testing.assert_allclose(sol.E(x), riccati_field(sol, x), rtol=1e-8, atol=1e-9)


def test_against_numeric_bulk(sc_sides, params):
    st, hole, elec = sc_sides
    x = st.mesh.x
    left = x <= params.xl - 0.05
    right = x >= params.xr + 0.05
    rel_p = np.abs(hole.density(x[left]) / st.p[left] - 1)
    rel_n = np.abs(elec.density(x[right]) / st.n[right] - 1)
    assert rel_p.max() <= 0.05
    assert rel_n.max() <= 0.05


def test_zero_current_is_flat(params):
    sol = unipolar_solve("hole", 0.0, -2.0, 0.0, params)
    assert sol.constant_coefficient
    x = np.linspace(params.x0, params.xl, 9)
    np.testing.assert_allclose(sol.E(x), -2.0, rtol=1e-12)
    np.testing.assert_allclose(sol.density(x), 0.0, atol=1e-12)
    np.testing.assert_allclose(sol.V(x), 2.0 * (x - params.x0), atol=1e-10)


def test_flat_branches_agree_with_riccati(params):
    x = np.linspace(params.x0, params.xl, 15)
    for dens, field in ((1.0, -1.0), (0.0, 0.5), (0.3, 2.0)):
        sol = unipolar_solve("hole", dens, field, 0.0, params)
        np.testing.assert_allclose(sol.E(x), riccati_field(sol, x), rtol=1e-8, atol=1e-9)


def test_pole_detection(params):
    # C = 0 leaves E' = E^2/2, so E(0) = 8 blows up at x = 1/4
    sol = unipolar_solve("hole", 32.0 * params.lambda_D2, 8.0, 0.0, params)
    x = np.linspace(params.x0, params.xl, 401)
    prof = sol.evaluate(x)
    assert prof.pole_at == pytest.approx(0.25, abs=5e-3)
    with pytest.raises(AsymptoticsError):
        sol.evaluate(x, strict=True)


def test_potential_sign_convention(sc_sides, params):
    # V is the potential relative to the contact: E = -V_x
    _, hole, elec = sc_sides
    for sol, x in ((hole, np.linspace(0.1, 0.9, 9)), (elec, np.linspace(1.1, 1.9, 9))):
        h = 1e-5
        dV = (sol.V(x + h) - sol.V(x - h)) / (2 * h)
        np.testing.assert_allclose(-dV, sol.E(x), rtol=1e-6, atol=1e-6)


def test_rejects_bad_side(params):
    with pytest.raises(ValueError):
        unipolar_solve("both", 1.0, 1.0, 1.0, params)
    with pytest.raises(AsymptoticsError):
        unipolar_solve("hole", 1.0, 1.0, 1.0, params, mu=0.0)
