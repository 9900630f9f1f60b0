import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

import spindigit.models as models_mod
from spindigit.acceptance import criterion_oracle_equivalence
from spindigit.circuit import import_openqasm, run as run_circuit
from spindigit.cli import main
from spindigit.configio import load_experiment_file, load_noise_file
from spindigit.errors import ValidationError
from spindigit.statevector import new_zero_state


@pytest.fixture
def runner():
    return CliRunner()


EXPERIMENT_INI = """\
[model]
type = central-spin
L = 2

[initial]
kind = 2pes
phase = 0.0

[run]
trotter_n = 1
t_start = 0.0
t_stop = 1.0
t_points = 4
shots = 0
seed = 3
"""

NOISE_INI = """\
p_cnot = 0.01
p_u3 = 0.001
t1 = 80
t2 = 70
dur_u3 = 0.1
dur_cnot = 0.3
readout_p01 = 0.02
readout_p10 = 0.03
"""


def test_presets_command_lists_everything(runner):
    result = runner.invoke(main, ["presets"])
    assert result.exit_code == 0
    for name in ("fig8", "fig12", "fig17", "figA22"):
        assert name in result.output
    assert "ibmqx4-like" in result.output


def test_run_requires_a_preset_or_config(runner):
    result = runner.invoke(main, ["run"])
    assert result.exit_code == 1
    assert "valid presets" in result.output


def test_run_rejects_unknown_preset(runner):
    result = runner.invoke(main, ["run", "--preset", "fig99"])
    assert result.exit_code == 1


def test_run_preset_writes_csvs_and_manifest(runner, tmp_path):
    result = runner.invoke(
        main,
        ["run", "--preset", "fig8", "--shots", "0", "--out-dir", str(tmp_path)],
    )
    assert result.exit_code == 0, result.output
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["figure"] == "fig8"
    assert manifest["backend"] == "oracle"
    assert len(manifest["files"]) == 5
    for name in manifest["files"]:
        text = (tmp_path / name).read_text()
        assert text.startswith("tau,value,stderr,shots,seed\n")


def test_run_custom_config_and_noise_file(runner, tmp_path):
    cfg = tmp_path / "exp.ini"
    cfg.write_text(EXPERIMENT_INI.replace("shots = 0", "shots = 200"))
    noise = tmp_path / "noise.ini"
    noise.write_text(NOISE_INI)
    out = tmp_path / "out"
    result = runner.invoke(
        main,
        [
            "run",
            "--config",
            str(cfg),
            "--backend",
            "noisy",
            "--noise-file",
            str(noise),
            "--out-dir",
            str(out),
        ],
    )
    assert result.exit_code == 0, result.output
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["backend"] == "noisy"
    assert "placeholder" in manifest["quality"]


def test_run_is_reproducible_byte_for_byte(runner, tmp_path):
    args = ["run", "--preset", "fig8", "--shots", "128", "--backend", "ideal"]
    runner.invoke(main, args + ["--out-dir", str(tmp_path / "a")])
    runner.invoke(main, args + ["--out-dir", str(tmp_path / "b")])
    for f in sorted((tmp_path / "a").glob("*.csv")):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_run_plot_stub(runner, tmp_path):
    result = runner.invoke(
        main,
        ["run", "--preset", "fig8", "--shots", "0", "--out-dir", str(tmp_path), "--plot-stub"],
    )
    assert result.exit_code == 0
    assert (tmp_path / "plot.py").exists()


def test_capacity_error_exit_code(runner, tmp_path):
    cfg = tmp_path / "big.ini"
    edges = ",".join(f"{i}-{i+1}" for i in range(29))
    cfg.write_text(
        "[model]\ntype = ising\nn = 30\nedges = %s\n\n[initial]\nkind = ferromagnetic\n\n"
        "[run]\nshots = 0\nt_points = 2\n" % edges
    )
    result = runner.invoke(main, ["run", "--config", str(cfg), "--backend", "ideal"])
    assert result.exit_code == 2


def test_export_produces_importable_qasm(runner, tmp_path):
    result = runner.invoke(
        main,
        ["export", "--preset", "fig8", "--time", "0.5", "--out-dir", str(tmp_path)],
    )
    assert result.exit_code == 0, result.output
    files = sorted(tmp_path.glob("*.qasm"))
    assert len(files) == 5
    circ = import_openqasm(files[0].read_text())
    state = run_circuit(circ, new_zero_state(circ.n_qubits))
    assert state.norm_sq() == pytest.approx(1.0, abs=1e-12)


def test_config_loading(tmp_path):
    cfg = tmp_path / "exp.ini"
    cfg.write_text(EXPERIMENT_INI)
    loaded = load_experiment_file(cfg)
    assert loaded.model.L == 2
    assert loaded.shots == 0
    assert loaded.seed == 3
    assert len(loaded.times) == 4

    noise = tmp_path / "noise.ini"
    noise.write_text(NOISE_INI)
    model = load_noise_file(noise)
    assert model.p_cnot == 0.01
    assert model.readout == ((0.98, 0.02), (0.03, 0.97))


def test_config_loading_errors(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[model]\ntype = ising\nn = 4\nedges = 0-1,junk\n\n[initial]\nkind = ferromagnetic\n\n[run]\n")
    with pytest.raises(ValidationError):
        load_experiment_file(bad)
    with pytest.raises(ValidationError):
        load_experiment_file(tmp_path / "missing.ini")
    noise = tmp_path / "noise.ini"
    noise.write_text("[noise]\npreset = nonexistent\n")
    with pytest.raises(ValidationError):
        load_noise_file(noise)


def test_verify_report_structure(runner, tmp_path, monkeypatch):
    import spindigit.acceptance as acc
    import spindigit.cli as cli_mod

    fast = [c for c in acc.CRITERIA if c[0] in (6, 7, 9)]
    monkeypatch.setattr(cli_mod, "run_all", lambda: [acc.run_criterion(*c) for c in fast])
    report = tmp_path / "report.json"
    result = runner.invoke(main, ["verify", "--report", str(report)])
    assert result.exit_code == 0, result.output
    payload = json.loads(report.read_text())
    assert [p["number"] for p in payload] == [6, 7, 9]
    assert all(p["passed"] for p in payload)
    assert result.output.count("[PASS]") == 3


def test_oracle_equivalence_detects_a_miscompiled_block(monkeypatch):
    """Sanity check that the compiled-vs-reference criterion has teeth."""
    real = models_mod._zz_core

    def broken(circ, qubit_i, qubit_j, angle, tag):
        real(circ, qubit_i, qubit_j, 1.1 * angle, tag)

    monkeypatch.setattr(models_mod, "_zz_core", broken)
    passed, details = criterion_oracle_equivalence()
    assert not passed
