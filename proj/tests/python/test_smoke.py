import json
import math
import os
from pathlib import Path

import pytest

import lorentz_orbits as lo

CONFIGS = Path(os.environ.get("LORENTZ_ORBITS_CONFIGS", Path(__file__).resolve().parents[2] / "configs"))


def test_static_charge_is_coulomb():
    cfg = CONFIGS / "static_charge.json"
    resolved = lo.resolve_config(cfg)
    charge = resolved["model"]["sources"][0]["charge"]
    mean = resolved["model"]["sources"][0]["mean"]
    x = [mean[0] + 3.0, mean[1], mean[2]]
    f = lo.evaluate_fields(cfg, 0.5, x)
    assert f["V"] == pytest.approx(charge / 3.0, rel=1e-12)
    assert f["E"][0] == pytest.approx(charge / 9.0, rel=1e-12)
    assert f["B"] == (0.0, 0.0, 0.0)


def test_kepler_radius_newtonian_limit():
    assert lo.kepler_circular_radius(1.0, 1, 2 * math.pi, 1e6) == pytest.approx(1.0, rel=1e-6)


def test_unknown_key_raises_config_error():
    with pytest.raises(lo.ConfigError):
        lo.resolve_config({"model": {"type": "builtin:zero"}, "bogus": 1})


def test_assumptions_flipped_charge_fail():
    report = lo.check_assumptions(CONFIGS / "lw_flipped_charge.json", threads=2)
    assert report["V"]["pass"] is False


def test_find_orbits_single_lw_source():
    orbits = lo.find_orbits(CONFIGS / "lw_single.json", threads=2)
    assert len(orbits) >= 1
    assert all(o["residual_norm"] <= 1e-8 for o in orbits)


def test_run_matches_cli_outputs(tmp_path):
    code = lo.run("simulate", CONFIGS / "zero_field.json", tmp_path)
    assert code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["steps"] == 100
    assert (tmp_path / "resolved_config.json").exists()
