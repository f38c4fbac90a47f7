import numpy as np
import pytest

from opvbilayer import default_params
from opvbilayer.errors import PivotBreakdownError
from opvbilayer.grid import (ELECTRON, HOLE, Mesh, TridiagonalSystem, assemble_continuity,
                             assemble_exciton, assemble_poisson, bernoulli, build_mesh,
                             dipole_source, sg_edge_flux, solve_tridiagonal, write_mesh_csv)
from opvbilayer.materials import Region


@pytest.fixture(scope="module")
def p():
    return default_params()


def test_default_mesh_invariants(p):
    m = build_mesh(p)
    assert m.n_cells == 2000 and m.x[0] == p.x0 and m.x[-1] == p.xL
    assert m.x[m.il] == 0.49 and m.x[m.ir] == 0.51
    assert np.all(m.h > 0)
    assert m.h.min() <= 1e-3
    near = np.abs(0.5 * (m.x[:-1] + m.x[1:]) - p.xl) < 0.002
    assert m.h[near].min() <= p.interface_width / 20
    assert m.ir - m.il >= 40
    assert np.all(m.region[m.il:m.ir + 1] == Region.INTERFACE)
    np.testing.assert_allclose(m.volume.sum(), p.xL - p.x0)


def test_uniform_mesh(p):
    m = build_mesh(p, n_cells=100, grading=1.0)
    assert p.xl in m.x and p.xr in m.x
    assert m.n_nodes <= 103
    assert np.max(m.h) <= 1.5 / 100 + 1e-12


def test_refined_mesh_interface_count(p):
    m = build_mesh(p, n_cells=4000)
    assert m.ir - m.il >= 80


@pytest.mark.parametrize("g", [0.9, 2.5])
def test_mesh_rejects_grading(p, g):
    with pytest.raises(ValueError):
        build_mesh(p, grading=g)


def test_mesh_rejects_small(p):
    with pytest.raises(ValueError):
        build_mesh(p, n_cells=50)


def test_mesh_csv(tmp_path, p):
    m = build_mesh(p, n_cells=100)
    f = tmp_path / "m.csv"
    write_mesh_csv(m, f)
    lines = f.read_text().splitlines()
    assert lines[0] == "x,region" and len(lines) == m.n_nodes + 1


def test_sg_pure_diffusion():
    assert sg_edge_flux(1.0, 3.0, 0.0, 0.0, 1.0, 1.0, ELECTRON) == pytest.approx(2.0)
    assert sg_edge_flux(1.0, 3.0, 0.0, 0.0, 1.0, 1.0, HOLE) == pytest.approx(-2.0)


def test_sg_upwind_limit():
    # strong drift: the flux is carried by the upstream node only
    f = sg_edge_flux(1e-3, 5.0, 0.0, 50.0, 1.0, 1.0, ELECTRON)
    assert f == pytest.approx(-50.0 * 1e-3, rel=1e-12)


def test_sg_equilibrium_exact():
    rng = np.random.default_rng(0)
    phi = np.cumsum(rng.normal(scale=3.0, size=200))
    h = rng.uniform(0.01, 0.1, 199)
    mu = rng.uniform(0.5, 5.0, 199)
    u = np.exp(phi)
    Jn = sg_edge_flux(u[:-1], u[1:], phi[:-1], phi[1:], mu, h, ELECTRON)
    scale = mu / h * np.maximum(u[:-1], u[1:])
    assert np.max(np.abs(Jn) / scale) < 1e-13
    v = np.exp(-phi)
    Jp = sg_edge_flux(v[:-1], v[1:], phi[:-1], phi[1:], mu, h, HOLE)
    assert np.max(np.abs(Jp) / (mu / h * np.maximum(v[:-1], v[1:]))) < 1e-13


def test_sg_consistency_first_order():
    errs = []
    for n in (50, 100, 200, 400):
        x = np.linspace(0, 1, n + 1)
        u, phi = np.sin(x) + 2, 3 * x
        J = sg_edge_flux(u[:-1], u[1:], phi[:-1], phi[1:], 1.0, np.diff(x), ELECTRON)
        xm = 0.5 * (x[:-1] + x[1:])
        exact = np.cos(xm) - (np.sin(xm) + 2) * 3
        errs.append(np.max(np.abs(J - exact)))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(rates > 0.9)


def test_bernoulli_identity():
    z = np.linspace(-30, 30, 601)
    np.testing.assert_allclose(bernoulli(z) + z, bernoulli(-z), atol=1e-12)


def test_poisson_laplace(p):
    m = build_mesh(p, n_cells=200)
    z = np.zeros(m.n_nodes)
    V = solve_tridiagonal(assemble_poisson(z, z, z, m, p, -7.0))
    np.testing.assert_allclose(V, -7.0 * (1 - m.x / 1.5), atol=1e-12)


def test_poisson_constant_source_uniform(p):
    m = build_mesh(p, n_cells=300, grading=1.0)
    c = 2.5
    z = np.zeros(m.n_nodes)
    V = solve_tridiagonal(assemble_poisson(z, np.full(m.n_nodes, c), z, m, p, 0.0))
    # second differences on the (uniform outside the forced nodes) mesh
    x, h = m.x, m.h
    Vxx = 2 * ((V[2:] - V[1:-1]) / h[1:] - (V[1:-1] - V[:-2]) / h[:-1]) / (h[1:] + h[:-1])
    np.testing.assert_allclose(Vxx, -c / p.lambda_D2, rtol=1e-8)


def test_dipole_ramp_only_inside(p):
    m = build_mesh(p, n_cells=400)
    slope = 50.0
    X = np.clip((m.x - p.xl) * slope, 0, (p.xr - p.xl) * slope)
    src = dipole_source(X, m, p)
    inside = m.interface_mask
    assert np.all(src[~inside] == 0)
    interior = inside.copy()
    interior[[m.il, m.ir]] = False
    np.testing.assert_allclose(src[interior] / m.volume[interior], p.h_over_L * slope, rtol=1e-12)


def test_poisson_discrete_gauss_law(p, sc_solution):
    st = sc_solution[0]
    m = st.mesh
    V = solve_tridiagonal(assemble_poisson(st.n, st.p, st.X, m, p, st.V_diff))
    Ef = -np.diff(V) / m.h
    lhs = p.lambda_D2 * (Ef[1:] - Ef[:-1])
    rhs = (m.volume * (st.p - st.n) + dipole_source(st.X, m, p))[1:-1]
    # round-off scale of the flux differences
    scale = p.lambda_D2 * np.max(np.abs(Ef))
    assert np.max(np.abs(lhs - rhs)) <= 1e-11 * scale


def test_continuity_zero_data(p):
    m = build_mesh(p, n_cells=200)
    z = np.zeros(m.n_nodes)
    V = -5 * (1 - m.x / 1.5)
    sys = assemble_continuity("n", z, z, z, V, m, p, boundary=(0.0, 0.0))
    assert np.all(sys.rhs == 0)
    assert np.all(solve_tridiagonal(sys) == 0)


def test_continuity_pure_diffusion_linear(p):
    m = build_mesh(p, n_cells=200, grading=1.0)
    q = p.with_updates(dU=0.0)
    z = np.zeros(m.n_nodes)
    n = solve_tridiagonal(assemble_continuity("n", z, z, z, z, m, q, boundary=(0.3, 1.2)))
    np.testing.assert_allclose(n, 0.3 + 0.9 * m.x / 1.5, atol=1e-12)


def test_exciton_uniform_equilibrium(p):
    m = build_mesh(p, n_cells=200)
    k = 50.0
    q = p.with_updates(kd_in_const=k - 7.0, kd_out=k - 7.0, kr_in=7.0, kr_out=7.0)
    z = np.zeros(m.n_nodes)
    X = solve_tridiagonal(assemble_exciton(z, z, z, z, m, q))
    np.testing.assert_allclose(X, q.GT / k, rtol=1e-12)
    X0 = solve_tridiagonal(assemble_exciton(z, z, z, z, m, q.with_updates(GT=0.0)))
    assert np.all(X0 == 0)


def test_exciton_plateaus(p):
    m = build_mesh(p)
    z = np.zeros(m.n_nodes)
    V = -19.5 * (1 - m.x / 1.5)  # E = -13
    X = solve_tridiagonal(assemble_exciton(z, z, z, V, m, p))
    assert X[m.im] == pytest.approx(6.14, rel=0.01)
    assert X[np.searchsorted(m.x, 0.2)] == pytest.approx(4.40, rel=0.01)


def test_exciton_grid_vs_closed_form(p):
    from opvbilayer.asymptotics import exciton_zeroth
    m = build_mesh(p)
    z = np.zeros(m.n_nodes)
    E0 = -19.3 / 1.5
    X = solve_tridiagonal(assemble_exciton(z, z, z, -E0 * (m.x - 1.5), m, p))
    Xa = exciton_zeroth(p, E0)(m.x)
    assert np.max(np.abs(X - Xa)) / np.max(Xa) <= 5e-3


def test_solve_tagged_pivot_error():
    sys = TridiagonalSystem(np.zeros(2), np.array([1.0, 0.0, 1.0]), np.zeros(2), np.ones(3), "n")
    with pytest.raises(PivotBreakdownError) as info:
        solve_tridiagonal(sys)
    assert info.value.row == 1 and info.value.equation == "n"


def test_tridiagonal_helpers():
    sys = TridiagonalSystem(np.array([1.0, 2.0]), np.array([4.0, 5.0, 6.0]),
                            np.array([-1.0, -2.0]), np.zeros(3))
    u = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(sys.matvec(u), sys.to_dense() @ u)
    sys.set_dirichlet(1, 9.0)
    assert sys.to_dense()[1].tolist() == [0.0, 1.0, 0.0] and sys.rhs[1] == 9.0


def test_mesh_from_nodes_validates(p):
    with pytest.raises(ValueError):
        Mesh.from_nodes(np.linspace(0, 1.5, 11), p)
