import csv
import io
import json
import math
import subprocess
import sys

import pytest

from trapped_fermi.cli import EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, main
from trapped_fermi.finite_temperature import COLUMNS


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def key_values(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["key", "value"]
    return {r[0]: ",".join(r[1:]) for r in rows[1:]}


def data_rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_coeffs_isotropic():
    code, out, _ = run("coeffs", "--omega", "1,1,1", "--mode", "relative")
    assert code == EXIT_OK
    kv = key_values(out)
    assert (float(kv["b2"]), float(kv["b1"]), float(kv["b0"])) == (0.5, 1.5, 1.0)
    assert kv["real_root_count"] == "1"


def test_coeffs_figure_trap():
    kv = key_values(run("coeffs", "--omega", "500,600,800")[1])
    assert float(kv["a2"]) == pytest.approx(4.1667e-9, rel=1e-4)


def test_coeffs_absolute_reports_threshold():
    code, out, _ = run("coeffs", "--omega", "1,1,1", "--mode", "absolute", "--format", "json")
    data = json.loads(out)
    assert data["N_max_paper"] == pytest.approx(-61.83, abs=5e-3)
    assert data["N_max_diagnostic_only"] is True
    assert data["p"] == pytest.approx(-48) and data["q0"] == pytest.approx(117)
    off = json.loads(run("coeffs", "--mode", "absolute", "--format", "json",
                         "--report-threshold", "false")[1])
    assert "N_max_paper" not in off and off["p"] == data["p"]


def test_point_literal_and_physical():
    code, out, _ = run("point", "--n", "455", "--t", "20")
    assert code == EXIT_OK
    row = data_rows(out)[0]
    assert list(row) == list(COLUMNS) + ["error"]
    assert float(row["z"]) == pytest.approx(0.0531582, rel=1e-6)
    assert row["expansion_valid"] == "true"
    hot = data_rows(run("point", "--n", "455", "--t", "200")[1])[0]
    assert float(hot["c_exact"]) == pytest.approx(3.0, rel=0.02)


def test_point_prints_fermi_temperatures():
    _, out, _ = run("point", "--n", "1000", "--t", "5")
    meta = dict(l[2:].split(" = ", 1) for l in out.splitlines() if l.startswith("# "))
    assert float(meta["T_F0"]) == pytest.approx(18.171, abs=5e-4)
    assert float(meta["T_F"]) == pytest.approx(17.14, abs=0.01)
    assert "f3(z_F) = 1/3" in meta["z_F convention"]


def test_point_without_paper22():
    row = data_rows(run("point", "--n", "455", "--t", "20", "--report-c-paper22", "no")[1])[0]
    assert row["c_paper22"] == ""


def test_point_needs_temperature():
    assert run("point", "--n", "10")[0] == EXIT_INVALID


def test_fermi_temp_json():
    code, out, _ = run("fermi-temp", "--n", "1000", "--format", "json")
    data = json.loads(out)
    assert data["T_F_over_T_F0"] == pytest.approx(0.943, abs=0.005)
    assert data["E_F"] == pytest.approx(16.6872, abs=1e-4)
    assert "E_F_paper_approx" in data
    lean = json.loads(run("fermi-temp", "--n", "1000", "--format", "json",
                          "--report-approx-root", "0")[1])
    assert "E_F_paper_approx" not in lean


def test_fermi_temp_out_of_range_is_reported():
    code, out, _ = run("fermi-temp", "--omega", "1,1,0.001", "--n", "1")
    assert code == EXIT_OK
    assert "out of range" in key_values(out)["T_F"]


def test_sweep_csv_and_json(tmp_path):
    target = tmp_path / "s.csv"
    code, out, _ = run("sweep", "--n", "455", "--t-min", "1", "--t-max", "10",
                       "--t-points", "4", "--t-relative", "false", "--t-scale", "linear",
                       "--output", str(target))
    assert code == EXIT_OK and out == ""
    rows = data_rows(target.read_text())
    assert [float(r["T"]) for r in rows] == [1, 4, 7, 10]
    data = json.loads(run("sweep", "--n", "455", "--points", "3", "--format", "json")[1])
    assert len(data["rows"]) == 3
    assert data["rows"][0]["T_over_TF0"] == pytest.approx(0.02)


@pytest.mark.parametrize("argv", [
    ["sweep", "--t-points", "0"],
    ["sweep", "--t-min", "2", "--t-max", "1"],
    ["sweep", "--t-min", "-1"],
    ["sweep", "--n", "0.5"],
    ["coeffs", "--omega", "1,1"],
    ["coeffs", "--omega", "1,0,1"],
    ["coeffs", "--mode", "weird"],
    ["point", "--n", "nan", "--t", "1"],
    ["oracle-compare", "--n", "1e7"],
    ["oracle-compare", "--t", "0,5"],
    ["frobnicate"],
])
def test_invalid_input_exit_code(argv):
    assert run(*argv)[0] == EXIT_INVALID


def test_numerical_failure_exit_code(monkeypatch):
    import trapped_fermi.cli as cli
    from trapped_fermi.errors import NumericalError

    def boom(*a, **k):
        raise NumericalError("induced", {})

    monkeypatch.setattr(cli, "thermo_point", boom)
    code, _, err = run("point", "--n", "10", "--t", "1")
    assert code == EXIT_NUMERICAL and "numerical failure" in err


def test_fig1_points_one_and_tie(tmp_path):
    code, out, _ = run("fig1", "--points", "1", "--output", str(tmp_path))
    assert code == EXIT_OK
    for name in ("fig1_N1e08.csv", "fig1_N1e23.csv"):
        assert len(data_rows((tmp_path / name).read_text())) == 1
    tie = tmp_path / "tie"
    code, out, _ = run("fig1", "--points", "5", "--n-small", "1e10", "--n-large", "1e10",
                       "--output", str(tie))
    assert code == EXIT_OK and "enhancement check: tie" in out


def test_fig1_default_files_and_determinism(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    code, out, _ = run("fig1", "--output", str(first))
    assert code == EXIT_OK
    run("fig1", "--output", str(second))
    for name in ("fig1_N1e08.csv", "fig1_N1e23.csv", "fig1_compare.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    rows = data_rows((first / "fig1_N1e08.csv").read_text())
    assert len(rows) == 200 and all(r["error"] == "" for r in rows)
    assert "enhancement check:" in out


def test_oracle_compare():
    code, out, _ = run("oracle-compare", "--n", "455", "--t", "5,10,20,0.5")
    assert code == EXIT_OK
    rows = data_rows(out)
    for r in rows[:3]:
        assert float(r["U_rel_diff"]) < 0.01 and float(r["c_rel_diff"]) < 0.01
        assert float(r["mu_rel_diff"]) < 0.01
        assert r["expansion_valid"] == "true"
    assert rows[3]["expansion_valid"] == "false"
    assert float(rows[3]["U_rel_diff"]) > float(rows[0]["U_rel_diff"])
    data = json.loads(run("oracle-compare", "--format", "json")[1])
    assert [r["T"] for r in data["rows"]] == [5, 10, 20]


def test_config_file_and_override(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nomega = 2,2,2\nn = 455\nformat = json\n")
    data = json.loads(run("--config", str(cfg), "fermi-temp")[1])
    assert data["omega"] == [2.0, 2.0, 2.0] and data["N"] == 455
    data = json.loads(run("--config", str(cfg), "fermi-temp", "--n", "10")[1])
    assert data["N"] == 10
    monkeypatch.setenv("TRAPPED_FERMI_CONFIG", str(cfg))
    assert json.loads(run("coeffs")[1])["b2"] == pytest.approx(0.5 / 8)


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("omega 1,1,1\n")
    assert run("--config", str(cfg), "coeffs")[0] == EXIT_INVALID
    assert run("--config", str(tmp_path / "missing.cfg"), "coeffs")[0] == EXIT_INVALID


def test_help_documents_defaults():
    code, out, _ = run("--help")
    assert code == EXIT_OK


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "trapped_fermi", "coeffs", "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["b2"] == 0.5
