import json
import math
import os

import pytest

from magnon_cnot.cli import main
from magnon_cnot.config import ConfigError, defaults, validate_config
from magnon_cnot.runner import format_value, rows_to_csv, run_scenario


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().split("\n")
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:] if line]


def test_defaults_are_paper_set():
    cfg = validate_config({"scenario": "coupling", "parameters": {}})
    p = cfg.parameters
    assert p["N_modes"] == 20 and p["r_ij_sites"] == 10
    assert p["A_par_kOe_per_muB"] == 100 and p["gamma_MHz_per_kOe"] == 4.3
    assert p["J_kelvin"] == 50 and p["j1"] == 0.2 and p["n0_per_site"] == 0.01


@pytest.mark.parametrize("doc, path", [
    ({"scenario": "dynamics", "parameters": {"T_s": -1.0}}, "parameters.T_s"),
    ({"scenario": "coupling", "parameters": {"bogus": 1}}, "parameters.bogus"),
    ({"scenario": "coupling", "parameters": {"J_Hz": 1e12}}, "parameters.J_Hz"),
    ({"parameters": {}}, "scenario"),
    ({"scenario": "nope"}, "scenario"),
    ({"scenario": "coupling", "extra": 1}, "extra"),
    ({"scenario": "coupling", "sweep": {"parameter": "parameters.n0_per_site",
                                         "start": 0, "stop": 1, "count": 1}}, "sweep.count"),
    ({"scenario": "coupling", "output": {"formats": ["xml"]}}, "output.formats"),
])
def test_config_errors_name_path(doc, path):
    with pytest.raises(ConfigError) as info:
        validate_config(doc)
    assert info.value.path == path
    assert path in str(info.value)


def test_unit_mismatch_message():
    with pytest.raises(ConfigError, match="unit mismatch.*J_kelvin"):
        validate_config({"scenario": "coupling", "parameters": {"J_Hz": 1e12}})


def test_invalid_json():
    with pytest.raises(ConfigError):
        validate_config("{not json")


def test_coupling_headline(tmp_path):
    cfg = validate_config({"scenario": "coupling"})
    report = run_scenario(cfg, out_dir=str(tmp_path))
    assert report.ok
    assert report.headline["W_ij_Hz"] == pytest.approx(1.5e4, rel=0.15)
    rows = read_csv(tmp_path / "coupling.csv")
    assert float(rows[0]["W_ij_Hz"]) == pytest.approx(1.5e4, rel=0.15)
    doc = json.loads((tmp_path / "coupling.json").read_text())
    assert doc["parameters"]["J_Hz"] == pytest.approx(1.0418306e12, rel=1e-6)


def test_gate_scenario():
    report = run_scenario(validate_config({"scenario": "gate"}), write=False)
    assert [r["fidelity_frac"] >= 0.999 for r in report.rows] == [True] * 4
    assert report.headline["H_tr_measured_T"] == pytest.approx(0.1, rel=1e-3)
    assert report.headline["larmor_shift_frac"] == 0.01


def test_dynamics_decay():
    cfg = validate_config({"scenario": "dynamics", "parameters": {
        "W_ex_per_s": 0.0, "n_init": 0.01, "T_s": 2.0, "t_s": 6.0}})
    report = run_scenario(cfg, write=False)
    assert report.headline["n_final_frac"] == pytest.approx(0.01 * math.exp(-3), rel=1e-12)


def test_dynamics_from_power():
    cfg = validate_config({"scenario": "dynamics", "parameters": {
        "kappa_per_s_per_W": 1e-2, "P_mw_W": 1.0, "T_s": 1.0}})
    assert run_scenario(cfg, write=False).headline["n_steady_frac"] == pytest.approx(1e-2)


def test_sweep_n0_linear():
    cfg = validate_config({"scenario": "coupling", "sweep": {
        "parameter": "parameters.n0_per_site", "start": 0, "stop": 0.01, "count": 3}})
    report = run_scenario(cfg, write=False, jobs=3)
    W = [r["W_ij_Hz"] for r in report.rows]
    assert [r["n0_per_site"] for r in report.rows] == [0.0, 0.005, 0.01]
    assert W[0] == 0.0
    assert W[1] == pytest.approx(W[2] / 2, rel=1e-12)
    assert W[2] == pytest.approx(1.5e4, rel=0.15)


def test_sweep_r_matches_lattice_sum():
    from oracles import lattice_sum_fsum

    cfg = validate_config({"scenario": "coupling", "sweep": {
        "parameter": "parameters.r_ij_sites", "start": 1, "stop": 20, "count": 20}})
    report = run_scenario(cfg, write=False, jobs=4)
    assert len(report.rows) == 20
    for row in report.rows:
        assert row["lattice_sum_dimless"] == pytest.approx(
            lattice_sum_fsum(20, row["r_ij_sites"]), rel=1e-10, abs=1e-10)


def test_sweep_noise_log():
    cfg = validate_config({"scenario": "noise_sweep", "sweep": {
        "parameter": "parameters.T1_over_t_gate", "start": 1, "stop": 100, "count": 3, "scale": "log"}})
    report = run_scenario(cfg, write=False)
    f = [r["fidelity_frac"] for r in report.rows]
    assert [r["T1_over_t_gate"] for r in report.rows] == pytest.approx([1, 10, 100])
    assert f[0] < f[1] < f[2]


def test_sweep_failure_recorded_per_row(tmp_path):
    cfg = validate_config({"scenario": "coupling", "sweep": {
        "parameter": "parameters.j1", "start": 0.0, "stop": 0.2, "count": 2}})
    report = run_scenario(cfg, out_dir=str(tmp_path))
    assert not report.ok
    assert "error" in report.rows[0] and "error" not in report.rows[1]
    assert report.errors[0]["index"] == 0


def test_csv_format():
    text = rows_to_csv([{"a_Hz": 1234.5, "n_count": 3, "s": "x"}, {"a_Hz": None, "n_count": 4, "s": "y"}])
    assert text == "a_Hz,n_count,s\n1.23450000e+03,3,x\n,4,y\n"
    assert format_value(0.1) == "1.00000000e-01"


def test_headers_carry_units(tmp_path):
    for scenario in ("coupling", "range_profile", "dynamics", "gate", "noise_sweep", "init"):
        report = run_scenario(validate_config({"scenario": scenario}), write=False)
        assert report.ok, report.errors
        for key, value in report.rows[0].items():
            if isinstance(value, (int, float)):
                assert "_" in key, (scenario, key)


def test_cli_run_and_determinism(tmp_path, capsys):
    cfg = write_config(tmp_path, defaults("coupling"))
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["run", "--config", cfg, "--out", str(out2), "--jobs", "2"]) == 0
    assert (out1 / "coupling.csv").read_bytes() == (out2 / "coupling.csv").read_bytes()
    assert b"\r" not in (out1 / "coupling.csv").read_bytes()


def test_cli_formats_and_scenario_flag(tmp_path, capsys):
    assert main(["run", "--scenario", "init", "--out", str(tmp_path), "--format", "json"]) == 0
    assert os.listdir(tmp_path) == ["init.json"]
    summary = json.loads(capsys.readouterr().out)
    assert summary["scenario"] == "init"


def test_cli_validate_and_defaults(tmp_path, capsys):
    assert main(["defaults", "--scenario", "gate"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["scenario"] == "gate"
    cfg = write_config(tmp_path, {"scenario": "gate"})
    assert main(["validate", "--config", cfg]) == 0
    assert json.loads(capsys.readouterr().out)["parameters"]["frame"] == "shifted"


def test_cli_errors(tmp_path, capsys):
    bad = write_config(tmp_path, {"scenario": "dynamics", "parameters": {"T_s": -1}})
    assert main(["validate", "--config", bad]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["path"] == "parameters.T_s"
    failing = write_config(tmp_path, {"scenario": "gate", "parameters": {"W_Hz": 0.0}}, "f.json")
    assert main(["run", "--config", failing, "--out", str(tmp_path / "o")]) == 1
    err = json.loads(capsys.readouterr().err)
    assert "gate not switchable" in err["failures"][0]["message"]


def test_jobs_env(monkeypatch):
    from magnon_cnot.runner import _jobs

    monkeypatch.setenv("MAGNON_CNOT_JOBS", "3")
    assert _jobs(None) == 3
    assert _jobs(5) == 5
