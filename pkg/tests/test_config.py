"""Configuration file parsing."""

import pytest

from opvbilayer.config import Config, config_keys, load_config, parse_config
from opvbilayer.errors import ConfigError


def test_defaults():
    cfg = Config()
    assert cfg.V_diff == pytest.approx(-19.3)
    assert cfg.mesh.n_cells == 2000
    assert cfg.boundary_for(0.0) is None


def test_parse_all_kinds():
    text = """
    # comment
    GT = 0
    xL = 2.0 ; inline comment
    n_cells = 500
    interface_cells = none
    damping = 0.01x3, 0.6
    fallback_alphas = 0.3, 0.1
    oc_bracket = 1 12
    V_diff = -3
    kd_in_const = 2763
    """
    cfg = parse_config(text)
    assert cfg.params.GT == 0.0
    assert cfg.params.kd_in_const == 2763.0
    assert cfg.mesh.n_cells == 500 and cfg.mesh.interface_cells is None
    assert cfg.solver.damping == ((0.01, 3), (0.6, 1))
    assert cfg.solver.fallback_alphas == (0.3, 0.1)
    assert cfg.oc_bracket == (1.0, 12.0)
    assert cfg.V_diff == -3.0


def test_keys_case_sensitive():
    assert "xl" in config_keys() and "xL" in config_keys()
    cfg = parse_config("xl = 0.48\nxm = 0.495\n")
    assert cfg.params.xl == 0.48 and cfg.params.xL == Config().params.xL


@pytest.mark.parametrize("text", [
    "bogus = 1\n",
    "GT = abc\n",
    "oc_bracket = 1\n",
    "[section]\nGT = 1\n",
    "sweep_step = 0\n",
    "tol = -1\n",
    "GT = -5\n",
    "xl = 1.2\n",
])
def test_rejects(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_load_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("sweep_step = 0.25\n")
    assert load_config(path).sweep_step == 0.25
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.cfg")


def test_boundary_hook_checked():
    cfg = Config(boundary_hook=lambda V: (1.0, 2.0, 3.0))
    with pytest.raises(ConfigError):
        cfg.boundary_for(0.0)
    cfg = Config(boundary_hook=lambda V: (0, 0, 0, V))
    assert cfg.boundary_for(2.0) == (0.0, 0.0, 0.0, 2.0)
