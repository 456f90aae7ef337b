import json

import numpy as np
import pytest

from dsfprobe import RunConfig, load_config
from dsfprobe.errors import ConfigError
from dsfprobe.io import UNITS_LINE, config_hash, read_curve, write_curve, write_report


def test_defaults_are_valid():
    cfg = RunConfig()
    assert cfg.inv_kfa[0] == -2.0 and cfg.inv_kfa[-1] == 2.0
    assert np.isinf(cfg.beta)


@pytest.mark.parametrize(
    "bad",
    [
        {"inv_kfa": ()},
        {"inv_kfa": (0.5, -0.5)},
        {"kappa": -0.1},
        {"epsilon": 0.0},
        {"omega_a_min": 2.0, "omega_a_max": 1.0},
        {"q_min": 0.0},
        {"nu_min": -0.1},
        {"q_points": 0},
        {"beta": -1.0},
        {"formats": ("csv", "parquet")},
        {"e_fermi_khz": -5.0},
    ],
)
def test_validation_rejects_bad_values(bad):
    with pytest.raises(ConfigError):
        RunConfig(**bad)


def test_load_toml_and_json_agree(tmp_path):
    toml_path = tmp_path / "run.toml"
    toml_path.write_text(
        'inv_kfa = [-0.5, 0.0]\nkappa = 0.2\nbeta = "inf"\nthreads = 2\n'
    )
    json_path = tmp_path / "run.json"
    json_path.write_text(
        json.dumps({"inv_kfa": [-0.5, 0.0], "kappa": 0.2, "beta": "inf", "threads": 2})
    )
    a = load_config(toml_path)
    b = load_config(json_path)
    assert a == b
    assert a.kappa == 0.2 and a.threads == 2 and np.isinf(a.beta)


def test_load_rejects_unknown_key(tmp_path):
    p = tmp_path / "run.json"
    p.write_text(json.dumps({"kapa": 0.2}))
    with pytest.raises(ConfigError, match="unknown config key"):
        load_config(p)


def test_load_rejects_bad_extension_and_missing_file(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text("kappa: 0.2\n")
    with pytest.raises(ConfigError):
        load_config(p)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.toml")


def test_load_rejects_bad_beta_string(tmp_path):
    p = tmp_path / "run.json"
    p.write_text(json.dumps({"beta": "cold"}))
    with pytest.raises(ConfigError, match="beta"):
        load_config(p)


def test_overrides_win_over_file(tmp_path):
    p = tmp_path / "run.json"
    p.write_text(json.dumps({"epsilon": 0.02, "out_dir": "file_out"}))
    cfg = load_config(p, {"epsilon": 0.005, "out_dir": None})
    assert cfg.epsilon == 0.005
    assert cfg.out_dir == "file_out"  # None overrides are ignored


def test_config_hash_stable_and_order_free():
    h1 = config_hash({"a": 1, "b": 2.5})
    h2 = config_hash({"b": 2.5, "a": 1})
    assert h1 == h2 and len(h1) == 12
    assert config_hash({"a": 1, "b": 2.5000001}) != h1


def test_curve_round_trip_is_bit_exact(tmp_path):
    cols = {
        "q": np.array([0.1, 0.2, 1.0 / 3.0]),
        "s": np.array([1e-17, np.pi, 2.3]),
        "flag": np.array([0.0, 1.0, np.nan]),
    }
    path = tmp_path / "curve.csv"
    write_curve(path, cols, meta={"epsilon": 0.01, "label": "demo"})
    got, meta = read_curve(path)
    for name, arr in cols.items():
        np.testing.assert_array_equal(got[name], arr)
    assert meta["units"] == UNITS_LINE
    assert meta["epsilon"] == "0.01"
    assert meta["label"] == "demo"


def test_curve_rejects_ragged_columns(tmp_path):
    with pytest.raises(ValueError):
        write_curve(tmp_path / "bad.csv", {"a": [1.0, 2.0], "b": [1.0]})


def test_read_curve_requires_header(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("# units = whatever\n")
    with pytest.raises(ConfigError):
        read_curve(p)


def test_report_is_byte_stable(tmp_path):
    report = {"zeta": 1.25, "alpha": {"nested": [1, 2]}, "ok": True}
    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    write_report(p1, report)
    write_report(p2, dict(reversed(list(report.items()))))
    assert p1.read_bytes() == p2.read_bytes()
    assert json.loads(p1.read_text())["zeta"] == 1.25
