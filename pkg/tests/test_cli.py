import csv
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncbound.cli import EXIT_NO_SOLUTION, build_parser, curve_rows, fmt, main, parse_range, write_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_schrodinger_limit(capsys):
    code, out, _ = run(capsys, "solve", "-n", "1", "-l", "0", "--alpha-z", "0.001")
    rec = json.loads(out)
    assert code == 0
    assert rec["epsilon"] == pytest.approx(0.0, abs=1e-8)
    assert rec["energy_mu_c2"] == pytest.approx(-5e-7, rel=1e-6)
    for key in ("n", "l", "alpha_z", "omega", "eta", "mean_distance_compton", "residual", "iterations"):
        assert key in rec
    assert rec["omega"] == 0.40765


def test_solve_ground_state_distance(capsys):
    code, out, _ = run(capsys, "solve", "-n", "1", "-l", "0", "--alpha-z", "1")
    assert code == 0
    assert json.loads(out)["mean_distance_compton"] == pytest.approx(0.9, rel=0.03)


def test_solve_no_bound_state(capsys):
    code, out, err = run(capsys, "solve", "-n", "1", "-l", "0", "--alpha-z", "2")
    assert code == EXIT_NO_SOLUTION == 2
    assert out == ""
    diag = json.loads(err.splitlines()[0])
    assert diag["error"] == "no bound state: g > g_critical"
    assert diag["g_critical"] == pytest.approx(0.40765, abs=5e-4)
    assert diag["alpha_z_critical"] == pytest.approx(1.0, abs=1e-3)


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "-n", "1"],
        ["solve", "-n", "x", "-l", "0", "--alpha-z", "1"],
        ["bogus"],
        ["curve", "volume"],
    ],
)
def test_bad_flags_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "-n", "1", "-l", "1", "--alpha-z", "0.5"],
        ["solve", "-n", "1", "-l", "0", "--alpha-z", "-1"],
        ["spectrum", "--alpha-z", "0.5", "--n-max", "21"],
        ["curve", "epsilon", "--alpha-z", "1:0:0.1"],
        ["curve", "epsilon", "--level", "2"],
        ["algebra", "coeffs", "--masses", "1,a"],
        ["algebra", "coeffs", "--masses", "1,1", "--eps-matrix", "[[0, 0.1], [0.2, 0]]"],
        ["algebra", "commutators", "--eps", "1.5"],
    ],
)
def test_domain_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert err.startswith("error:")


def test_omega_c(capsys):
    code, out, _ = run(capsys, "omega-c")
    rec = json.loads(out)
    assert code == 0
    assert rec["omega_c"] == rec["g_critical"] == pytest.approx(0.40765, abs=5e-4)
    assert {"n", "l", "alpha_z_critical", "eta_critical"} <= rec.keys()


def test_critical_2s(capsys):
    code, out, _ = run(capsys, "critical", "-n", "2", "-l", "0")
    assert code == 0
    assert json.loads(out)["alpha_z_critical"] == pytest.approx(3.0, rel=0.02)


def test_parse_range():
    assert parse_range("0.1:1.0:0.1").size == 10
    assert parse_range("0.05:1.0:0.05")[-1] == pytest.approx(1.0)
    assert parse_range("0:1:0.3").tolist() == pytest.approx([0, 0.3, 0.6, 0.9])
    assert parse_range("1:1:1").tolist() == [1.0]


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=1, max_size=6))
def test_csv_round_trip(values):
    buf = io.StringIO()
    write_csv([f"c{i}" for i in range(len(values))], [values], buf)
    buf.seek(0)
    rows = list(csv.reader(buf))
    parsed = [float(v) for v in rows[1]]
    assert parsed == [float(fmt(v)) for v in values]
    assert [fmt(v) for v in parsed] == rows[1]


def test_missing_values_are_empty_cells():
    buf = io.StringIO()
    write_csv(["a", "b"], [[1.5, None]], buf)
    assert buf.getvalue().splitlines()[1] == "1.5,"


def test_curve_energy_file(capsys, tmp_path):
    out = tmp_path / "energy.csv"
    code, _, _ = run(capsys, "curve", "energy", "--alpha-z", "0.05:1.0:0.05", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open(encoding="utf-8")))
    assert len(rows) == 20
    for r in rows:
        e_s, e_d, e_nc = (float(r[k]) for k in ("E_schrodinger", "E_dirac", "E_noncommutative"))
        assert e_d <= e_nc <= e_s


def test_curve_rhs_without_coupling(capsys):
    code, out, _ = run(capsys, "curve", "rhs", "-n", "1", "-l", "0", "--g", "0", "--eta", "0.01:1:0.01")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "eta,rhs"
    assert len(lines) == 101
    assert {float(line.split(",")[1]) for line in lines[1:]} == {1.0}


def test_curve_epsilon_increasing(capsys):
    code, out, _ = run(capsys, "curve", "epsilon", "-n", "1", "-l", "0", "--alpha-z", "0.1:1.0:0.1")
    values = [float(line.split(",")[1]) for line in out.splitlines()[1:]]
    assert code == 0
    assert len(values) == 10
    assert all(b > a for a, b in zip(values, values[1:]))


def test_curve_epsilon_keeps_missing_points(capsys):
    code, out, _ = run(
        capsys, "curve", "epsilon", "--level", "1,0", "--level", "2,0", "--alpha-z", "0.9:1.2:0.3"
    )
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "alpha_z,epsilon_10,epsilon_20"
    assert len(lines) == 3
    assert lines[2].split(",")[1] == ""
    assert float(lines[2].split(",")[2]) > 0


def test_curve_parallel_matches_serial():
    args = build_parser().parse_args(["curve", "epsilon", "--alpha-z", "0.2:0.8:0.3"])
    serial = curve_rows(args)
    args.jobs = 2
    assert curve_rows(args) == serial


def test_curve_unwritable_path(capsys, tmp_path):
    target = tmp_path / "missing" / "out.csv"
    code, _, err = run(capsys, "curve", "rhs", "--g", "0.1", "--eta", "0.5:1:0.5", "--out", str(target))
    assert code == 1
    assert "cannot write" in err


def _spectrum(capsys, alpha_z, n_max):
    code, out, _ = run(capsys, "spectrum", "--alpha-z", str(alpha_z), "--n-max", str(n_max))
    assert code == 0
    rows = [line.split() for line in out.splitlines() if not line.startswith("#")][1:]
    return {(int(r[0]), int(r[1])): r[2:] for r in rows}


def test_spectrum_splitting(capsys):
    rows = _spectrum(capsys, 0.5, 2)
    assert len(rows) == 3
    e20, e21 = float(rows[2, 0][0]), float(rows[2, 1][0])
    e_s = float(rows[2, 0][1])
    assert e20 != e21
    assert e20 < e_s and e21 < e_s


def test_spectrum_missing_ground_state(capsys):
    rows = _spectrum(capsys, 1.5, 2)
    assert rows[1, 0][0] == "—"
    assert rows[2, 0][0] != "—" and rows[2, 1][0] != "—"


def test_spectrum_schrodinger_limit(capsys):
    rows = _spectrum(capsys, 0.001, 3)
    assert len(rows) == 6
    assert all(float(r[2]) < 1e-6 for r in rows.values())


def test_algebra_commutators(capsys):
    code, out, _ = run(capsys, "algebra", "commutators", "--m1", "1", "--m2", "2", "--eps", "0.3")
    rec = json.loads(out)
    assert code == 0
    assert rec["[x1,p1]"] == pytest.approx(0.8, abs=1e-12)
    assert rec["[x2,p2]"] == pytest.approx(0.9, abs=1e-12)
    assert rec["[x1,p2]"] == pytest.approx(0.2, abs=1e-12)
    assert rec["[x2,p1]"] == pytest.approx(0.1, abs=1e-12)
    assert rec["[x1,x2]"] == rec["[p1,p2]"] == 0
    assert rec["total_momentum_x1"] == 1.0


def test_algebra_coeffs(capsys):
    code, out, _ = run(capsys, "algebra", "coeffs", "--masses", "1,1", "--eps-uniform", "0.4")
    rec = json.loads(out)
    assert code == 0
    assert rec["A"] == pytest.approx([0.68, 0.68], abs=1e-12)
    assert rec["B"] == pytest.approx([0.64], abs=1e-12)


def test_algebra_com_check(capsys):
    code, out, _ = run(capsys, "algebra", "com-check", "--masses", "1,2,3", "--eps-uniform", "0.1")
    rec = json.loads(out)
    assert code == 0
    assert rec["com_coefficient"] == pytest.approx(1 / 6, abs=1e-12)
    assert rec["decoupled"] is True


def test_identical_invocations_identical_output(capsys):
    argv = ["solve", "-n", "2", "-l", "1", "--alpha-z", "1.3"]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ncbound", "algebra", "com-check", "--masses", "1,1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["decoupled"] is True
