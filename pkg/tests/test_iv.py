"""IV curve bookkeeping and characteristic points."""

import math

import numpy as np
import pytest

from opvbilayer.iv import IVCurve, IVPoint


def _curve(V, J, **kw):
    return IVCurve([IVPoint(float(v), float(j)) for v, j in zip(V, J)], **kw)


def test_power_definition():
    pt = IVPoint(-3.0, -240.0)
    assert pt.V_applied == pytest.approx(16.3)
    assert pt.P == pytest.approx(-240.0 * 16.3)


def test_points_sorted_and_distinct():
    c = _curve([2.0, -19.3, 0.0], [-1.0, -3.0, -2.0])
    assert list(c.V) == [-19.3, 0.0, 2.0]
    with pytest.raises(ValueError):
        _curve([1.0, 1.0], [0.0, 1.0])


def test_linear_curve_characteristics():
    # J = a (V - Voc): ideal linear cell, FF = 1/4
    V = np.linspace(-19.3, 5.0, 244)
    Voc = 3.7
    c = _curve(V, 10.0 * (V - Voc))
    assert c.V_oc == pytest.approx(Voc, abs=1e-9)
    assert c.J_sc == pytest.approx(10.0 * (-19.3 - Voc))
    vopp, pmax = c.optimal_power
    assert vopp == pytest.approx(0.5 * (Voc - 19.3), abs=0.1)
    assert c.fill_factor == pytest.approx(0.25, abs=1e-3)


def test_fill_factor_consistency():
    V = np.linspace(-19.3, 10.0, 60)
    J = -300.0 + 300.0 * np.exp(V - 8.0)
    c = _curve(V, J)
    _, pmax = c.optimal_power
    assert c.fill_factor == pytest.approx(pmax / (abs(c.J_sc) * (c.V_oc + c.V_int)))
    assert 0.0 < c.fill_factor < 1.0


def test_no_crossing_gives_nan():
    c = _curve([-19.3, 0.0, 5.0], [-300.0, -200.0, -10.0])
    assert math.isnan(c.V_oc)
    assert math.isnan(c.fill_factor)
    assert not math.isnan(c.optimal_power[1])


def test_unconverged_points_excluded():
    pts = [IVPoint(-19.3, -300.0), IVPoint(0.0, 50.0, converged=False), IVPoint(5.0, 100.0)]
    c = IVCurve(pts)
    # the unconverged point would put the crossing at -19.3 + 300 * 19.3 / 350
    assert c.V_oc == pytest.approx(-19.3 + 300.0 * 24.3 / 400.0)


def test_jsc_outside_range_is_nan():
    c = _curve([-10.0, 0.0], [-1.0, 1.0])
    assert math.isnan(c.J_sc)


def test_csv_layout(tmp_path):
    c = _curve([-19.3, 0.0], [-334.2, 0.0])
    path = tmp_path / "iv.csv"
    c.write_csv(path)
    raw = path.read_bytes()
    assert b"\r\n" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "V_diff,V_applied,J,P,converged,iters"
    assert lines[1].split(",")[:4] == ["-19.3", "0", "-334.2", "0"]
    assert "-0" not in lines[2].split(",")[3]


def test_annotation_text():
    c = _curve([-19.3, 0.0, 1.0], [-2.0, -1.0, 1.0])
    keys = [ln.split(" = ")[0] for ln in c.annotation_text().splitlines()]
    assert keys == ["V_int", "J_sc", "V_oc", "V_opp", "P_max", "fill_factor"]
