"""Randomised property checks with hypothesis."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from opvbilayer import _pykernels
from opvbilayer.asymptotics import zeroth_order_context, zeroth_currents
from opvbilayer.grid import bernoulli, sg_edge_flux
from opvbilayer.solver import DeviceState, apply_damping

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


@given(finite)
def test_bernoulli_identity(z):
    assert abs(bernoulli(z) + z - bernoulli(-z)) <= 1e-12 * max(1.0, abs(z))


@given(st.floats(-30, 30), st.floats(-30, 30), st.floats(0.01, 100), st.floats(1e-4, 1.0),
       st.sampled_from([-1, 1]))
def test_sg_equilibrium_exact(phl, phr, mu, h, sign):
    # Boltzmann profile u = exp(-sign * phi) carries no flux
    ref = min(phl, phr) if sign < 0 else max(phl, phr)
    ul, ur = np.exp(-sign * (phl - ref)), np.exp(-sign * (phr - ref))
    f = sg_edge_flux(ul, ur, phl, phr, mu, h, sign)
    scale = mu / h * (abs(ul) + abs(ur)) * max(1.0, abs(phr - phl))
    assert abs(f) <= 1e-13 * scale


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 60), st.integers(0, 2**32 - 1))
def test_thomas_dense_oracle(n, seed):
    rng = np.random.default_rng(seed)
    lower = -rng.uniform(0.1, 1.0, n - 1)
    upper = -rng.uniform(0.1, 1.0, n - 1)
    diag = 2.2 + rng.uniform(size=n)
    rhs = rng.normal(size=n)
    A = np.diag(diag) + np.diag(lower, -1) + np.diag(upper, 1)
    x = _pykernels.thomas(lower, diag, upper, rhs)
    np.testing.assert_allclose(x, np.linalg.solve(A, rhs), rtol=1e-10, atol=1e-10)


@settings(deadline=None)
@given(arrays(float, 20, elements=st.floats(0, 1e3)),
       arrays(float, 20, elements=st.floats(0, 1.0)))
def test_damping_convexity_bound(state_vals, frac):
    # alpha = 0.01 absorbs candidate negativity up to (1 - alpha) / alpha = 99x the state
    cand = -98.9 * frac * state_vals
    z = np.zeros(20)
    s = DeviceState(None, z, state_vals, state_vals, state_vals, 0.0, (0, 0, 0, 0))
    new = apply_damping(s, (z, cand, cand, cand), 0.01)
    assert np.all(new.n >= 0) and np.all(new.p >= 0) and np.all(new.X >= 0)


@settings(max_examples=15, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1),
       st.floats(-24, -1))
def test_dark_currents_linear_in_boundary(a, b, c, d, V):
    from opvbilayer import default_params
    base = default_params().with_updates(GT=0.0)
    keys = ("n0", "nL", "p0", "pL")
    unit = [base.with_updates(**{k: float(k == j) for k in keys}) for j in keys]
    J = [zeroth_currents(zeroth_order_context(q, V)).J_tot for q in unit]
    mix = base.with_updates(n0=a, nL=b, p0=c, pL=d)
    Jm = zeroth_currents(zeroth_order_context(mix, V)).J_tot
    lin = a * J[0] + b * J[1] + c * J[2] + d * J[3]
    assert abs(Jm - lin) <= 1e-9 * max(1.0, sum(abs(j) for j in J))
