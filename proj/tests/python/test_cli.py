import csv
import json
import os
import pathlib
import subprocess

import pytest

CLI = os.environ.get("LIOUVILLE_CLI", "liouville")
CONFIGS = pathlib.Path(os.environ.get("LIOUVILLE_CONFIGS", pathlib.Path(__file__).parents[2] / "configs"))
FROZEN = json.loads((pathlib.Path(__file__).parents[1] / "oracle" / "frozen.json").read_text())


def run(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)


def rows(path):
    with open(path) as f:
        return list(csv.DictReader(f))


def test_pendulum_analyze(tmp_path):
    r = run("analyze-potential", "--config", CONFIGS / "pendulum.json", "--out", tmp_path)
    assert r.returncode == 0, r.stderr
    assert len(rows(tmp_path / "criticals.csv")) == 2
    prof = json.loads((tmp_path / "morse_profile.json").read_text())
    assert prof["n_wells"] == 1


def test_cos2theta_is_rejected(tmp_path):
    r = run("analyze-potential", "--config", CONFIGS / "cos2theta.json", "--out", tmp_path)
    assert r.returncode == 2
    assert "DistinctValueViolation" in r.stderr


def test_two_well_analyze(tmp_path):
    r = run("analyze-potential", "--config", CONFIGS / "two_well.json", "--out", tmp_path)
    assert r.returncode == 0, r.stderr
    assert len(rows(tmp_path / "criticals.csv")) == 4
    assert json.loads((tmp_path / "morse_profile.json").read_text())["n_wells"] == 2


def test_action_table_row_at_three(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"potential": {"cos": [0, 1]}, "eps": 1, "energies": [3.0]}))
    r = run("action-table", "--config", cfg, "--out", tmp_path)
    assert r.returncode == 0, r.stderr
    table = rows(tmp_path / "action_table.csv")
    assert len(table) == 2
    ref = next(r["I"] for r in FROZEN["pendulum_rotation"] if r["E"] == 3.0)
    for row in table:
        assert float(row["I"]) == pytest.approx(ref, abs=1e-8)


def test_outputs_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run("action-table", "--config", CONFIGS / "pendulum.json", "--out", d, "--threads", 2).returncode == 0
    assert (a / "action_table.csv").read_bytes() == (b / "action_table.csv").read_bytes()


def test_fit_separatrix_and_normal_form(tmp_path):
    assert run("fit-separatrix", "--config", CONFIGS / "pendulum.json", "--out", tmp_path).returncode == 0
    rep = json.loads((tmp_path / "singular_rep.json").read_text())
    assert "psi0" in rep
    assert run("normal-form", "--config", CONFIGS / "pendulum.json", "--out", tmp_path).returncode == 0
    nf = json.loads((tmp_path / "normal_form.json").read_text())
    assert nf["order"] == 6
    assert nf["residual"] < 1e-9


def test_convexity_files(tmp_path):
    r = run("convexity", "--config", CONFIGS / "pendulum.json", "--out", tmp_path)
    assert r.returncode == 0, r.stderr
    assert len(rows(tmp_path / "convexity_r2.csv")) > 0


def test_bad_config_exits_2(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"potential": {"cos": [0, 1]}, "lambda": [0.5]}))
    assert run("analyze-potential", "--config", cfg).returncode == 2
    assert run("analyze-potential", "--config", tmp_path / "missing.json").returncode == 2


def test_numerical_failure_exits_3(tmp_path):
    cfg = tmp_path / "strict.json"
    cfg.write_text(json.dumps({"potential": {"cos": [0, 1]}, "eps": 1, "tolerances": {"normal_form": 1e-30}}))
    r = run("normal-form", "--config", cfg, "--out", tmp_path)
    assert r.returncode == 3
    assert "ResidualTooLarge" in r.stderr


def test_quick_verify():
    r = run("--quick", "verify")
    assert r.returncode == 0, r.stdout + r.stderr
    assert r.stdout.count("PASS") == 7


def test_corrupted_golden(tmp_path):
    bad = tmp_path / "constants.json"
    bad.write_text('{"constants": {}, "measured": {}, "crc32": "0"}')
    r = run("--golden", bad, "--quick", "verify")
    assert r.returncode == 1
    assert "FAIL" in r.stdout
    assert "criterion" in r.stdout


def test_shipped_configs_match_the_schema():
    jsonschema = pytest.importorskip("jsonschema")
    from referencing import Registry, Resource

    schema_dir = pathlib.Path(__file__).parents[2] / "docs" / "schema"
    pot = json.loads((schema_dir / "potential.schema.json").read_text())
    registry = Registry().with_resource("potential.schema.json", Resource.from_contents(pot))
    schema = json.loads((schema_dir / "run_config.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema, registry=registry)
    for cfg in sorted(CONFIGS.glob("*.json")):
        validator.validate(json.loads(cfg.read_text()))
