import csv
import io
import json

import numpy as np
import pytest

from torusberry.cli import main

FAST_BERRY = ["--psi0", "1.5707963267948966", "--total-time", "50", "--evolve-steps", "5000"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_curvature_table(capsys):
    code, out, _ = run(capsys, "curvature", "--a", "1", "--b", "2", "--grid-n", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 4
    assert list(rows[0]) == ["theta", "psi", "K", "F_coefficient", "dsigma"]
    assert float(rows[0]["theta"]) == 0.0 and float(rows[0]["psi"]) == 0.0
    assert float(rows[0]["K"]) == pytest.approx(1 / 3, abs=1e-15)


def test_invalid_grid_is_argument_error(capsys):
    code, out, err = run(capsys, "curvature", "--grid-n", "0")
    assert code == 2
    assert out == ""
    assert "--grid-n" in err and err.count("\n") == 1


@pytest.mark.parametrize("argv", [["curvature", "--a", "2", "--b", "1"], ["berry", "--alpha", "3"], ["nope"], ["holonomy", "--grid-n", "x"]])
def test_argument_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.count("\n") == 1


def test_gauss_bonnet_torus(capsys):
    code, out, _ = run(capsys, "gauss-bonnet", "--surface", "torus")
    rec = json.loads(out)
    assert code == 0
    assert rec["genus"] == 1 and abs(rec["total_curvature"]) < 1e-10


def test_gauss_bonnet_sphere(capsys):
    code, out, _ = run(capsys, "gauss-bonnet", "--surface", "sphere", "--grid-n", "256")
    rec = json.loads(out)
    assert code == 0
    assert rec["genus"] == 0 and rec["total_curvature"] == pytest.approx(4 * np.pi, abs=1e-6)


def test_gauss_bonnet_coarse_grid_exit_3(capsys):
    code, out, _ = run(capsys, "gauss-bonnet", "--grid-n", "4")
    assert code == 3 and out == ""


@pytest.mark.parametrize("psi0, expected", [(np.pi / 6, np.pi), (0.0, 0.0)])
def test_holonomy_record(capsys, psi0, expected):
    code, out, _ = run(capsys, "holonomy", "--psi0-rad", repr(psi0))
    rec = json.loads(out)
    assert code == 0
    assert rec["gamma_raw"] == pytest.approx(expected, abs=1e-10)
    assert set(rec) == {"psi0", "gamma_raw", "gamma_mod", "r11", "r12", "r21", "r22"}


def test_holonomy_sweep_csv(capsys):
    code, out, _ = run(capsys, "holonomy", "--sweep", "--grid-n", "11", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 11
    s = [float(r["sin_psi0"]) for r in rows]
    assert all(b > a for a, b in zip(s, s[1:]))


def test_transport_record(capsys):
    code, out, _ = run(capsys, "transport", "--psi0", "0.7", "--v0-theta", "0.3", "--v0-psi", "-1.2")
    rec = json.loads(out)
    assert code == 0 and rec["defect"] < 1e-8 and rec["norm_drift"] < 1e-9


def test_gauge_check(capsys):
    code, out, _ = run(capsys, "gauge-check", "--trials", "4", "--seed", "3")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 5
    assert all(r["curvature_deviation"] < 1e-7 for r in rows)
    assert all(abs(r["holonomy_shift"]) < 1e-9 for r in rows[:-1])
    assert rows[-1]["holonomy_shift"] == pytest.approx(2 * np.pi, abs=1e-12)


def test_berry_large_time(capsys):
    code, out, _ = run(capsys, "berry", "--psi0", "1.5707963267948966", "--total-time", "2000", "--evolve-steps", "100000")
    rec = json.loads(out)
    assert code == 0
    assert abs(rec["adiabatic_minus_line"]) < 1e-3
    assert not rec["nonadiabatic"]
    assert abs(rec["regauged_gamma"] - rec["line_integral_gamma"]) < 1e-6


def test_berry_tiny_time_flags(capsys):
    code, out, _ = run(capsys, "berry", "--psi0", "1.5707963267948966", "--total-time", "0.5", "--evolve-steps", "2048")
    rec = json.loads(out)
    assert code == 0
    assert rec["nonadiabatic"] is True and rec["residual_nonadiabaticity"] > 1e-2


def test_compare_labels_distinct(capsys):
    code, out, _ = run(capsys, "compare", *FAST_BERRY)
    rec = json.loads(out)
    assert code == 0
    assert "distinct" in rec["note"]
    assert rec["surface_holonomy_gamma_raw"] == pytest.approx(2 * np.pi, abs=1e-10)


def test_json_keys_sorted(capsys):
    _, out, _ = run(capsys, "holonomy", "--psi0", "0.3")
    keys = list(json.loads(out))
    assert keys == sorted(keys)


def test_out_file(tmp_path, capsys):
    target = tmp_path / "h.csv"
    code, out, _ = run(capsys, "holonomy", "--psi0", "0.3", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("psi0,gamma_raw")
