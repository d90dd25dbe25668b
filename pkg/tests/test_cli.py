import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest
from click.testing import CliRunner

from cavityfield.cli import main
from cavityfield.config import ConfigError, RunConfig, parse_config
from cavityfield.modes import SI_EPSILON0

BASE = {
    "L": math.pi, "V": 1.0, "mass": 1.0, "unit_system": "natural",
    "modes": [{"alpha": 1, "C1": [0.5, 0.0], "C2": [0.5, 0.0], "C_prime": [0.0, 0.0], "C_const": 0.0}],
    "grid": {"n_points": 129},
    "time": {"t": 0.3},
    "fock": {"dim": 32},
}


@pytest.fixture
def write_config(tmp_path):
    def _write(doc, name="run.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return _write


def run(*args):
    return CliRunner().invoke(main, list(args), catch_exceptions=False)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_defaults():
    cfg = parse_config({})
    assert cfg.cavity.L == math.pi and cfg.cavity.epsilon0 == 1.0
    assert cfg.modes[0].is_real() and cfg.fock_dim == 32
    assert cfg.time_step == pytest.approx(2 * math.pi / 512)


def test_parse_si_defaults_to_codata():
    cfg = parse_config({"unit_system": "SI", "L": 0.1, "V": 1e-3})
    assert cfg.cavity.epsilon0 == SI_EPSILON0


def test_mode_without_c2_is_physical():
    cfg = parse_config({"modes": [{"alpha": 2, "C1": [0.1, 0.2]}]})
    assert cfg.modes[0].C2 == complex(0.1, -0.2)


@pytest.mark.parametrize("doc,key", [
    ({"fock": {"dim": 1}}, "fock.dim must be ≥ 2"),
    ({"modes": [{"alpha": 0}]}, "modes[0].alpha"),
    ({"modes": [{"alpha": 1}, {"alpha": -3}]}, "modes[1].alpha"),
    ({"L": "long"}, "L must be a number"),
    ({"grid": {"n_points": 2}}, "grid.n_points"),
    ({"modes": [{"alpha": 1, "C1": [1, 2, 3]}]}, "modes[0].C1"),
    ({"output": {"format": "xml"}}, "output.format"),
    ({"unit_system": "natural", "mu0": 2.0}, "mu0"),
    ({"mass": [1.0], "modes": [{"alpha": 2}]}, "mass"),
    ({"modes": [{"alpha": 1}, {"alpha": 1}]}, "duplicate"),
])
def test_parse_errors_name_the_key(doc, key):
    with pytest.raises(ConfigError) as err:
        parse_config(doc)
    assert key in str(err.value)


def test_verify_rejects_dim1(write_config):
    result = run("verify", "--config", write_config({**BASE, "fock": {"dim": 1}}))
    assert result.exit_code != 0
    assert "fock.dim must be ≥ 2" in result.stderr


def test_verify_rejects_alpha0(write_config):
    result = run("verify", "--config", write_config({**BASE, "modes": [{"alpha": 0}]}))
    assert result.exit_code != 0
    assert "modes[0].alpha" in result.stderr and "0" in result.stderr


def test_verify_rejects_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    result = run("verify", "--config", str(path))
    assert result.exit_code == 2 and "not valid JSON" in result.stderr


def test_verify_report_schema(write_config):
    result = run("verify", "--config", write_config(BASE))
    report = json.loads(result.stdout)
    assert {r["check_name"] for r in report} >= {"ladder_commutator_block", "correspondence"}
    for r in report:
        assert set(r) >= {"check_name", "status", "measured", "tolerance"}
    statuses = {r["check_name"]: r["status"] for r in report}
    # every check except the bit-exact truncation corner passes on this config
    assert all(s == "pass" for name, s in statuses.items() if name != "ladder_commutator_corner")
    assert result.exit_code == (0 if statuses["ladder_commutator_corner"] == "pass" else 1)


ULP_CORNER = {"ladder_commutator_corner": 4 * math.ulp(31.0)}


def test_verify_exit_reflects_all_checks(write_config):
    ok = run("verify", "--config", write_config({**BASE, "verify": {"tolerances": ULP_CORNER}}))
    assert ok.exit_code == 0
    corrupt = {**BASE, "verify": {"tolerances": {**ULP_CORNER, "h1_conservation": -1.0}}}
    bad = run("verify", "--config", write_config(corrupt))
    assert bad.exit_code == 1
    failed = [r["check_name"] for r in json.loads(bad.stdout) if r["status"] == "fail"]
    assert failed == ["h1_conservation"]


def test_verify_unknown_tolerance(write_config):
    result = run("verify", "--config", write_config({**BASE, "verify": {"tolerances": {"nope": 1.0}}}))
    assert result.exit_code == 2 and "nope" in result.stderr


def test_verify_zero_field_config_skips_order_checks(write_config):
    doc = {**BASE, "modes": [{"alpha": 1}], "verify": {"tolerances": ULP_CORNER}}
    result = run("verify", "--config", write_config(doc))
    report = {r["check_name"]: r["status"] for r in json.loads(result.stdout)}
    assert report["first_family_standard_order"] == "skipped"
    assert result.exit_code == 0


def test_fields_family1_t0(write_config):
    result = run("fields", "--config", write_config(BASE), "--t", "0")
    rows = read_csv(result.stdout)
    assert len(rows) == 129
    assert list(rows[0]) == ["z", "re_Ex", "im_Ex", "re_Hy", "im_Hy"]
    assert all(float(r["re_Hy"]) == 0.0 and float(r["im_Hy"]) == 0.0 for r in rows)


def test_fields_family2_t0(write_config):
    result = run("fields", "--config", write_config(BASE), "--family", "2", "--t", "0")
    rows = read_csv(result.stdout)
    z = np.array([float(r["z"]) for r in rows])
    ex = np.array([float(r["re_Ex"]) for r in rows])
    assert all(float(r["re_Hy"]) == 0.0 for r in rows)
    assert np.max(np.abs(ex - math.sqrt(2) * np.sin(z))) < 1e-15


def test_fields_full_precision(write_config):
    rows = read_csv(run("fields", "--config", write_config(BASE)).stdout)
    from cavityfield.classical import snapshot_source
    cfg = parse_config(BASE)
    snap = snapshot_source(1, cfg.modes, cfg.cavity, cfg.grid)(0.3)
    assert np.array_equal([float(r["re_Ex"]) for r in rows], snap.E_x.real)


def test_fields_json_output(write_config, tmp_path):
    out = tmp_path / "f.json"
    result = run("fields", "--config", write_config({**BASE, "output": {"format": "json"}}), "--out", str(out))
    assert result.exit_code == 0 and result.stdout == ""
    records = json.loads(out.read_text())
    assert len(records) == 129 and set(records[0]) == {"z", "re_Ex", "im_Ex", "re_Hy", "im_Hy"}


def test_fields_byte_identical_across_processes(write_config, tmp_path):
    path = write_config(BASE)
    outs = []
    for i in range(2):
        out = tmp_path / f"fields{i}.csv"
        subprocess.run([sys.executable, "-m", "cavityfield.cli", "fields", "--config", path, "--out", str(out)],
                       check=True)
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] and len(outs[0]) > 0


def test_duality_scan_command(write_config):
    rows = read_csv(run("duality-scan", "--config", write_config(BASE), "--angles", "8").stdout)
    assert len(rows) == 8
    assert list(rows[0]) == ["theta", "energy", "ampere_std", "faraday_std", "ampere_dual", "faraday_dual"]
    e = [float(r["energy"]) for r in rows]
    assert (max(e) - min(e)) <= 1e-12 * max(e)


def test_duality_scan_single_angle(write_config):
    rows = read_csv(run("duality-scan", "--config", write_config(BASE), "--angles", "1").stdout)
    assert len(rows) == 1 and float(rows[0]["theta"]) == 0.0


def test_duality_scan_zero_fields(write_config):
    rows = read_csv(run("duality-scan", "--config", write_config({**BASE, "modes": []}), "--angles", "4").stdout)
    assert all(float(v) == 0.0 for r in rows for k, v in r.items() if k != "theta")


def test_convergence_first_family(write_config):
    doc = {**BASE, "grid": {"n_points": 513}}
    rows = read_csv(run("convergence", "--config", write_config(doc), "--levels", "3").stdout)
    assert len(rows) == 3 and rows[0]["order_ampere_standard"] == ""
    for r in rows[1:]:
        for k in ("order_ampere_standard", "order_faraday_standard"):
            assert 1.8 <= float(r[k]) <= 2.2
    assert float(rows[1]["dz"]) == pytest.approx(float(rows[0]["dz"]) / 2)


def test_convergence_second_family(write_config):
    doc = {**BASE, "grid": {"n_points": 513}}
    rows = read_csv(run("convergence", "--config", write_config(doc), "--family", "2", "--levels", "3").stdout)
    for r in rows[1:]:
        for k in ("order_ampere_dual", "order_faraday_dual"):
            assert 1.8 <= float(r[k]) <= 2.2
        for k in ("order_ampere_standard", "order_faraday_standard"):
            assert abs(float(r[k])) < 0.01


def test_convergence_rejects_one_level(write_config):
    result = run("convergence", "--config", write_config(BASE), "--levels", "1")
    assert result.exit_code == 1 and "levels" in result.stderr


def test_quantum_expect_command(write_config):
    rows = read_csv(run("quantum-expect", "--config", write_config(BASE), "--t", "0").stdout)
    assert len(rows) == 129
    assert list(rows[0]) == ["z", "t", "re_E", "im_E", "E2", "re_H", "im_H", "H2"]
    # correspondence: mean field equals the classical sqrt(2) sin z at t = 0
    for r in rows:
        assert abs(float(r["re_E"]) - math.sqrt(2) * math.sin(float(r["z"]))) < 1e-10
        assert abs(float(r["im_E"])) < 1e-14


def test_quantum_expect_family2_explicit_coherent(write_config):
    doc = {**BASE, "fock": {"dim": 32, "coherent": [1.0, 0.0]}}
    rows = read_csv(run("quantum-expect", "--config", write_config(doc), "--family", "2", "--t", "0").stdout)
    # <i(a^+ - a)> = 2 Im(beta) = 0 and <(a^+ + a)> = 2 for beta = 1
    assert all(abs(float(r["re_E"])) < 1e-12 for r in rows)
    mid = rows[0]
    assert float(mid["re_H"]) == pytest.approx(2.0, abs=1e-10)


def test_default_config_without_file():
    result = run("fields", "--t", "0")
    assert result.exit_code == 0 and len(read_csv(result.stdout)) == RunConfig().n_points
