from dataclasses import replace
import json

import pandas as pd
import pytest

from fzk.config import settings
from fzk.experiments import REGISTRY
from fzk.main import describe, load_spec, main
from fzk.schemas import ExperimentKind


def last_error(capsys) -> dict:
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def write_config(tmp_path, text: str):
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    return path


# ============================================================================
# RUNS
# ============================================================================

def test_resonance_scan_run(tmp_path):
    out = tmp_path / "scan"
    assert main(["ResonanceScan", "--out", str(out)]) == 0
    frame = pd.read_csv(out / "resonance.csv")
    row = frame[(frame.xi1_1 == 1) & (frame.xi1_2 == 0) & (frame.xi2_1 == 1) & (frame.xi2_2 == 0)]
    assert row.omega.iloc[0] == 6

    summary = json.loads((out / "summary.json").read_text())
    assert summary["kind"] == "ResonanceScan"
    assert summary["expanded_form_agrees"] is True

    manifest = json.loads((out / "manifest.json").read_text())
    paths = {entry["path"] for entry in manifest["files"]}
    assert {"config.json", "summary.json", "resonance.csv", "manifest.json"} <= paths
    assert manifest["spec_echo"]["kind"] == "ResonanceScan"
    assert "numpy" in manifest["versions"]


def test_simulate_zero_horizon(tmp_path):
    config = write_config(
        tmp_path,
        """
kind = "Simulate"
seed = 3

[solver]
dt = 1e-4
T = 0.0

[solver.grid]
n = 2
modes_per_dim = 16
""",
    )
    out = tmp_path / "sim"
    assert main(["Simulate", "--config", str(config), "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["seed"] == 3
    assert summary["steps"] == 0
    assert summary["snapshots"] == 1
    assert (out / "snapshots" / "u_00000.fzk").exists()
    assert (out / "diagnostics.csv").exists()
    assert not (out / "drift.svg").exists()


def test_seed_override(tmp_path):
    out = tmp_path / "seeded"
    assert main(["Transversality", "--seed", "9", "--out", str(out)]) == 0
    assert json.loads((out / "config.json").read_text())["seed"] == 9
    assert json.loads((out / "summary.json").read_text())["seed"] == 9


def test_runs_are_deterministic(tmp_path):
    config = write_config(tmp_path, 'kind = "Transversality"\nshells = [4]\n')
    for name in ("first", "second"):
        assert main(["Transversality", "--config", str(config), "--out", str(tmp_path / name)]) == 0
    for artifact in ("transversality.csv", "summary.json"):
        assert (tmp_path / "first" / artifact).read_bytes() == (tmp_path / "second" / artifact).read_bytes()


def test_out_dir_from_settings(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "out_dir", tmp_path / "env")
    assert main(["ResonanceScan"]) == 0
    assert (tmp_path / "env" / "resonance.csv").exists()


# ============================================================================
# FAILURES
# ============================================================================

def test_unknown_kind(capsys):
    assert main(["Nope"]) == 2
    error = last_error(capsys)
    assert "unknown experiment kind" in error["error"]
    assert error["exit_code"] == 2
    assert error["kind"] == "Nope"


def test_kind_mismatch(tmp_path, capsys):
    config = write_config(tmp_path, 'kind = "Transversality"\n')
    assert main(["ResonanceScan", "--config", str(config), "--out", str(tmp_path)]) == 2
    assert "declares kind" in last_error(capsys)["error"]


def test_malformed_toml(tmp_path, capsys):
    config = write_config(tmp_path, "kind = \n")
    assert main(["ResonanceScan", "--config", str(config)]) == 2
    assert last_error(capsys)["type"] == "TOMLDecodeError"


@pytest.mark.parametrize(
    "body",
    [
        "[params]\na = 3.0\n",
        "radius = -1.0\n",
        "unexpected = 1\n",
    ],
)
def test_invalid_config(tmp_path, capsys, body):
    config = write_config(tmp_path, body)
    assert main(["ResonanceScan", "--config", str(config), "--out", str(tmp_path / "out")]) == 2
    assert last_error(capsys)["type"] == "ValidationError"
    assert not (tmp_path / "out").exists()


def test_missing_config_is_an_io_failure(tmp_path, capsys):
    assert main(["ResonanceScan", "--config", str(tmp_path / "absent.toml")]) == 4
    assert last_error(capsys)["exit_code"] == 4


def test_thread_cap_must_be_positive(tmp_path):
    assert main(["ResonanceScan", "--threads", "0", "--out", str(tmp_path)]) == 2


def test_inadmissible_request_exit_code(tmp_path, capsys):
    config = write_config(tmp_path, 'triple = [8, 8, 1024]\n')
    assert main(["Transversality", "--config", str(config), "--out", str(tmp_path / "out")]) == 2
    assert last_error(capsys)["type"] == "AdmissibilityError"


def test_unexpected_failure_keeps_the_error_shape(tmp_path, capsys, monkeypatch):
    def broken(spec, out_dir):
        raise ValueError("operands could not be broadcast together")

    monkeypatch.setitem(REGISTRY, "ResonanceScan", replace(REGISTRY["ResonanceScan"], runner=broken))
    assert main(["ResonanceScan", "--out", str(tmp_path)]) == 1
    error = last_error(capsys)
    assert error == {
        "error": "operands could not be broadcast together",
        "type": "ValueError",
        "exit_code": 1,
        "kind": "ResonanceScan",
    }


# ============================================================================
# DESCRIBE
# ============================================================================

def test_describe_bilinear(capsys):
    assert main(["describe", "VerifyBilinear"]) == 0
    text = capsys.readouterr().out
    assert "(K^{n−1}/N^a)^{1/2}" in text
    assert "probe" in text


def test_describe_simulate():
    text = describe("Simulate")
    assert "u ∂_{x_1} u" in text
    assert "defaults:" in text


def test_registry_covers_every_kind():
    assert set(REGISTRY) == {kind.value for kind in ExperimentKind}


@pytest.mark.parametrize("kind", sorted(REGISTRY))
def test_every_kind_describes_itself(kind):
    text = describe(kind)
    assert text.startswith(f"{kind}: ")
    assert "statement: " in text


def test_describe_needs_a_kind(capsys):
    assert main(["describe"]) == 2


def test_defaults_load_without_a_config():
    spec = load_spec("BonaSmith", seed=4)
    assert spec.kind == "BonaSmith"
    assert spec.seed == 4
    assert spec.cutoffs == [4, 8, 16, 32]
