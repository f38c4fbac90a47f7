import dataclasses
import math

import pytest

from opvbilayer.scaling import (ParameterError, PhysicalParams, build_scaled_params,
                                default_params, default_physical_params, validate)


def test_table_values_from_physical_inputs():
    sp = build_scaled_params(default_physical_params())
    assert sp.lambda2 == pytest.approx(1.43, rel=0.01)
    assert sp.T == pytest.approx(0.00386, rel=0.01)
    assert sp.c_r == pytest.approx(0.6987, rel=0.01)
    assert sp.c_r_prime == pytest.approx(sp.c_r)


def test_round_trip_matches_defaults_within_one_percent():
    sp = build_scaled_params(default_physical_params())
    ref = default_params()
    for f in ("lambda2", "T", "GT", "kd_in0", "kd_out", "kr_in", "kr_out", "c_r",
              "c_r_prime", "mu_n0", "gamma_n", "mu_p0", "gamma_p", "D_X", "h_over_L",
              "dU", "A_M", "x0", "xl", "xm", "xr", "xL"):
        a, b = getattr(sp, f), getattr(ref, f)
        assert a == pytest.approx(b, rel=0.01, abs=1e-12), f


def test_length_scaling():
    base = default_physical_params()
    a = build_scaled_params(base)
    b = build_scaled_params(dataclasses.replace(base, device_length=2e-7, interface_half_width=1e-9))
    assert b.lambda2 == pytest.approx(a.lambda2 / 4)
    assert b.T == pytest.approx(a.T * 4)


def test_density_homogeneity():
    base = default_physical_params()
    a = build_scaled_params(base)
    b = build_scaled_params(dataclasses.replace(base, reference_density=3e20))
    assert b.lambda2 == pytest.approx(a.lambda2 / 3)
    assert b.T == pytest.approx(a.T)


def test_lambda2_definition():
    from scipy.constants import elementary_charge, epsilon_0
    p = PhysicalParams()
    sp = build_scaled_params(p)
    ref = epsilon_0 * p.thermal_voltage / (elementary_charge * p.device_length**2 * p.reference_density)
    assert sp.lambda2 == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("field,value", [("device_length", 0.0), ("kd_out", -1.0),
                                         ("reference_density", float("nan"))])
def test_rejects_non_positive(field, value):
    with pytest.raises(ParameterError):
        build_scaled_params(dataclasses.replace(PhysicalParams(), **{field: value}))


def test_rejects_wide_interface():
    with pytest.raises(ParameterError):
        build_scaled_params(PhysicalParams(interface_half_width=0.6e-7))


def test_defaults_table():
    p = default_params()
    assert p.lambda_D2 == pytest.approx(5.72)
    assert p.interface_width == pytest.approx(0.02)
    assert (p.n0, p.nL, p.p0, p.pL) == (4e-7, 0.04, 0.04, 4e-7)
    assert p.GT == pytest.approx(16990)
    assert (p.kd_out, p.kr_in, p.kr_out, p.kd_in0) == (1.0, 3.86, 3864.0, 386.0)
    assert (p.mu_n0, p.gamma_n, p.mu_p0, p.gamma_p) == (3.0, 0.788, 1.0, 0.153)
    assert (p.dU, p.h_over_L, p.D_X) == (12.0, 0.01, 0.01)


def test_validate_defaults_clean():
    assert validate(default_params()) == []


def test_validate_geometry_violation():
    v = validate(default_params().with_updates(xl=0.52))
    assert len(v) == 1 and v[0].startswith("geometry")


def test_validate_negative_generation():
    v = validate(default_params().with_updates(GT=-1.0))
    assert len(v) == 1 and v[0].startswith("GT")


def test_validate_other_fields():
    p = default_params()
    assert validate(p.with_updates(xm=0.505))[0].startswith("geometry")
    assert validate(p.with_updates(c_r_prime=1.0))[0].startswith("c_r_prime")
    assert validate(p.with_updates(u_profile="cubic"))[0].startswith("u_profile")
    assert validate(p.with_updates(kd_in_const=0.0))[0].startswith("kd_in_const")
    assert math.isfinite(p.A_M)
