import json

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from aerocov.cli import (
    EXIT_COMPUTE,
    EXIT_CONFIG,
    EXIT_INFEASIBLE,
    EXIT_OK,
    EXIT_VALIDATION,
    ExperimentConfig,
    OptimizeBlock,
    RunContext,
    ThresholdSpec,
    main,
)

SCENARIO = {
    "tiers": [{"altitude_m": 100, "lambda": 4e-5, "beta": 3.2e-3, "power_dbm": 7}]
}
SIM = {"seed": 3, "trials": 200, "chunk_size": 50}


def _write(tmp_path, config) -> str:
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(config))
    return str(path)


def test_threshold_spec(one_tier):
    assert ThresholdSpec(gamma_db=0).resolve(one_tier) == pytest.approx(1.0)
    rate = ThresholdSpec(rate_bps=3e6, bandwidth_hz=1e6)
    assert rate.resolve(one_tier) == pytest.approx(7.0)
    per_tier = ThresholdSpec(bits_per_joule=1e8, bandwidth_hz=1e6).resolve(one_tier)
    assert isinstance(per_tier, tuple) and len(per_tier) == 1
    with pytest.raises(ValidationError, match="exactly one"):
        ThresholdSpec(gamma_db=-15, gamma=0.03)
    with pytest.raises(ValidationError, match="bandwidth_hz"):
        ThresholdSpec(rate_bps=1e6)


def test_scenario_references(tmp_path):
    (tmp_path / "net.json").write_text(json.dumps(SCENARIO))
    config = ExperimentConfig(scenario="net.json")
    assert config.resolve_scenario(tmp_path).tiers[0].altitude_m == 100
    fixture = ExperimentConfig(scenario="fixture:table2/three_tier")
    assert fixture.resolve_scenario().n_tiers == 3
    with pytest.raises(ValueError, match="scenario"):
        ExperimentConfig().resolve_scenario()


def test_validate_alias():
    config = ExperimentConfig.model_validate({"validate": {"tolerance": 0.05}})
    assert config.block("validate").tolerance == 0.05
    assert config.block("overall").method == "approx"
    with pytest.raises(ValueError):
        config.block("table")


def test_fix_pins_an_axis(one_tier):
    block = OptimizeBlock(beta_grid=((1e-3, 1e-2),), fix={1: 5e-3})
    problem = block.to_problem(one_tier, None)
    assert problem.beta_grid == ((5e-3,),)
    with pytest.raises(ValueError, match="outside"):
        OptimizeBlock(beta_grid=((1e-3,),), fix={2: 5e-3}).to_problem(one_tier, None)


def test_local_curve_mc_writes_csv_and_manifest(tmp_path):
    config = {
        "scenario": SCENARIO,
        "sim": SIM,
        "local_curve": {"z_values": [0, 1500], "method": "mc"},
    }
    out = tmp_path / "out" / "curve.csv"
    args = ["local-curve", "--config", _write(tmp_path, config), "--out", str(out)]
    assert main(args) == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame["z_u"]) == [0, 1500]
    assert frame["coverage"].between(0, 1).all()
    assert (frame["method"] == "monte_carlo").all()
    manifest = json.loads((tmp_path / "out" / "curve.csv.manifest.json").read_text())
    assert manifest["seed"] == 3
    assert manifest["command"] == "local-curve"
    assert len(manifest["config_sha256"]) == 64
    assert manifest["provenance"]["sim"]["trials"] == 200


def test_seed_override_is_reproducible(tmp_path):
    config = {"scenario": SCENARIO, "sim": SIM, "overall": {"method": "mc"}}
    path = _write(tmp_path, config)
    runs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        args = ["overall", "--config", path, "--seed", "9", "--out", str(out)]
        assert main(args) == EXIT_OK
        runs.append(out.read_bytes())
    assert runs[0] == runs[1]
    manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    assert manifest["seed"] == 9


def test_fixture_listing(capsys):
    assert main(["fixtures"]) == EXIT_OK
    listing = capsys.readouterr().out
    assert "table2,three_tier,0.9713" in listing
    assert "fig3,uniform,0.2883" in listing


def test_schema(capsys):
    assert main(["fixtures", "--schema"]) == EXIT_OK
    schema = json.loads(capsys.readouterr().out)
    assert "validate" in schema["properties"]


def test_bad_config_exits_2(tmp_path):
    path = _write(tmp_path, {"scenario": SCENARIO, "overall": {"method": "magic"}})
    assert main(["overall", "--config", path]) == EXIT_CONFIG
    missing = tmp_path / "nope.json"
    assert main(["overall", "--config", str(missing)]) == EXIT_CONFIG
    path = _write(tmp_path, {"scenario": "fixture:table2/no_such_row"})
    assert main(["overall", "--config", path]) == EXIT_CONFIG


def test_fixture_search_needs_stored_setup(tmp_path):
    path = _write(tmp_path, {"table": {"fixture": "table2", "optimize": True}})
    assert main(["fixtures", "--config", path]) == EXIT_CONFIG
    path = _write(tmp_path, {"table": {"fixture": "table3", "rows": ["k9"]}})
    assert main(["fixtures", "--config", path]) == EXIT_CONFIG


def test_infeasible_grid_exits_3(tmp_path):
    config = {
        "scenario": SCENARIO,
        "optimize": {"beta_grid": [[1e-5, 2e-5]], "n_max": 10},
    }
    assert main(["optimize", "--config", _write(tmp_path, config)]) == EXIT_INFEASIBLE


def test_method_override(tmp_path, capsys):
    config = {"scenario": SCENARIO, "sim": SIM}
    path = _write(tmp_path, config)
    assert main(["overall", "--config", path, "--method", "mc"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "monte_carlo" in out
    assert np.isfinite(float(out.splitlines()[1].split(",")[1]))


def test_validate_report(tmp_path):
    config = {
        "scenario": SCENARIO,
        "quad": {"rel_tol": 1e-3},
        "sim": SIM,
        "validate": {"z_points": [300], "tolerance": 1.0, "distance_points": 4},
    }
    out = tmp_path / "validate.csv"
    args = ["validate", "--config", _write(tmp_path, config), "--out", str(out)]
    assert main(args) == EXIT_OK
    frame = pd.read_csv(out)
    quantities = set(frame["quantity"])
    assert "local_coverage" in quantities
    assert "association[tier=1,los]" in quantities
    assert "tagged_distance[tier=1,los]" in quantities
    assert "tagged_distance[tier=1,nlos]" in quantities
    assert "interference_laplace[tier=1,los]" in quantities
    assert frame["pass"].all()


def test_failed_validation_exits_4_and_reruns_identically(tmp_path):
    # a single snapshot gives 0/1 estimates with zero half-width
    config = {
        "scenario": SCENARIO,
        "quad": {"rel_tol": 1e-3},
        "sim": {"seed": 5, "trials": 1},
        "validate": {"z_points": [300], "tolerance": 1e-6, "distance_points": 4},
    }
    path = _write(tmp_path, config)
    outputs = []
    for name in ("first.csv", "second.csv"):
        out = tmp_path / name
        assert main(["validate", "--config", path, "--out", str(out)]) == (
            EXIT_VALIDATION
        )
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    frame = pd.read_csv(tmp_path / "first.csv")
    local = frame[frame["quantity"] == "local_coverage"]
    assert not local["pass"].any()
    manifest = json.loads((tmp_path / "first.csv.manifest.json").read_text())
    assert manifest["provenance"]["failed"] == int((~frame["pass"]).sum())


def test_numerical_failure_exits_5(tmp_path):
    scenario = {**SCENARIO, "channel": {"m_los": 6}}
    config = {"scenario": scenario, "overall": {"method": "exact"}}
    assert main(["overall", "--config", _write(tmp_path, config)]) == EXIT_COMPUTE


def test_seed_override_is_validated(tmp_path):
    path = _write(tmp_path, {"scenario": SCENARIO, "sim": SIM})
    assert main(["overall", "--config", path, "--seed", "-1"]) == EXIT_CONFIG
    assert main(["overall", "--config", path, "--tolerance", "2"]) == EXIT_CONFIG
    with pytest.raises(ValidationError):
        RunContext(ExperimentConfig(sim=SIM), seed=-1)
