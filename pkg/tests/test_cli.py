import json
import os
import subprocess
import sys

import numpy as np
import pytest

from milburnosc import experiments as ex
from milburnosc.cli import main
from milburnosc.experiments import CSV_COLUMNS, RAW_COLUMNS, read_csv


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_evolve_example(tmp_path, capsys):
    argv = "evolve --omega1 1 --omega2 1 -J 0.2 --gamma 100 --t-max 100 --steps 2001".split()
    code, out, _ = run(argv + ["--output-dir", str(tmp_path)], capsys)
    assert code == 0 and "2001 rows" in out
    data = read_csv(tmp_path / "evolve.csv")
    assert tuple(data) == CSV_COLUMNS
    assert len(data["t"]) == 2001 and data["t"][-1] == 100.0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "evolve" and manifest["cells"][0]["rows"] == 2001


def test_csv_matches_library(tmp_path, capsys):
    code, _, _ = run(["evolve", "--omega2", "0.5", "-J", "0.3", "--steps", "301", "--raw",
                      "--output-dir", str(tmp_path)], capsys)
    assert code == 0
    data = read_csv(tmp_path / "evolve.csv")
    ref = ex.time_series(ex.SystemParams(1.0, 0.5, 0.3, 100.0), ex.TimeGrid(0.0, 100.0, 301))
    assert tuple(data) == CSV_COLUMNS + RAW_COLUMNS
    for k in data:
        np.testing.assert_array_equal(data[k], ref.column(k))


def test_stability_violation(tmp_path, capsys):
    code, _, err = run(["evolve", "-J", "0.6", "--omega1", "1", "--omega2", "0.5",
                        "--output-dir", str(tmp_path)], capsys)
    assert code == 2
    assert err.count("\n") == 1 and "J < omega1*omega2 = 0.5" in err
    assert not (tmp_path / "evolve.csv").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["evolve", "--bogus"],
        ["evolve", "--steps", "1"],
        ["evolve", "--t-max", "-1"],
        ["evolve", "--gamma", "0"],
        ["evolve", "--kernel", "lindblad"],
        ["figure", "bogus"],
        ["sweep", "--axis", "J", "--values", "0.1", "1.5"],
        ["sweep", "--axis", "J", "--values", "0.3", "0.1", "0.2"],
        ["modes", "--omega1", "0.5", "--omega2", "1"],
        [],
    ],
)
def test_bad_input_exit_two(argv, tmp_path, capsys):
    extra = ["--output-dir", str(tmp_path)] if argv and argv[0] in ("evolve", "sweep") else []
    code, _, err = run(argv + extra, capsys)
    assert code == 2
    assert err.startswith("milburnosc: error:") and err.count("\n") == 1


def test_io_failure_exit_three(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(["evolve", "--steps", "11", "--output-dir", str(blocker / "sub")], capsys)
    assert code == 3 and "I/O" in err


def test_oracle_failure_exit_four(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(ex, "series_oracle_covariance", lambda *a, **k: np.zeros((4, 4)))
    code, _, err = run(["evolve", "--steps", "201", "--oracle", "--output-dir", str(tmp_path)], capsys)
    assert code == 4 and "verification" in err


def test_oracle_flag_records_error(tmp_path, capsys):
    code, _, _ = run(["evolve", "--steps", "201", "--oracle", "--output-dir", str(tmp_path)], capsys)
    assert code == 0
    flags = json.loads((tmp_path / "manifest.json").read_text())["cells"][0]["flags"]
    assert flags["oracle_max_error"] < 1e-10


def test_scientific_notation_and_unitary_limit(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    common = ["--omega2", "0.5", "-J", "0.4", "--t-max", "1e2", "--steps", "2001"]
    assert run(["evolve", "--kernel", "von-neumann", *common, "--output-dir", str(a)], capsys)[0] == 0
    assert run(["evolve", "--kernel", "milburn", "--gamma", "1e8", *common, "--output-dir", str(b)], capsys)[0] == 0
    n_a = read_csv(a / "evolve.csv")["N1"]
    n_b = read_csv(b / "evolve.csv")["N1"]
    assert np.max(np.abs(n_a - n_b)) <= 1e-5


def test_figure_anisotropy(tmp_path, capsys):
    code, _, _ = run(["figure", "anisotropy", "--output-dir", str(tmp_path), "--steps", "201", "--svg"], capsys)
    assert code == 0
    csvs = sorted(tmp_path.glob("*.csv"))
    assert len(csvs) == 6 and len(list(tmp_path.glob("*.svg"))) == 6
    cells = json.loads((tmp_path / "manifest.json").read_text())["cells"]
    assert {(c["params"]["Gamma"], c["params"]["omega1"], c["params"]["J"]) for c in cells} == {(100.0, 1.0, 0.2)}
    assert sorted(c["params"]["omega2"] for c in cells) == [0.21, 0.3, 0.5, 0.7, 0.95, 1.0]
    assert (tmp_path / "anisotropy_omega2_1.svg").read_text().startswith("<svg")


def test_sweep(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MILBURN_THREADS", "2")
    code, _, _ = run(["sweep", "--omega2", "0.5", "--axis", "J", "--values", "0.1", "0.2", "0.3",
                      "--steps", "101", "--output-dir", str(tmp_path)], capsys)
    assert code == 0
    cells = json.loads((tmp_path / "manifest.json").read_text())["cells"]
    assert [c["params"]["J"] for c in cells] == [0.1, 0.2, 0.3]
    assert all((tmp_path / c["file"]).exists() for c in cells)


def test_modes(capsys):
    code, out, _ = run(["modes", "-J", "0.2"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["isotropic"] is True
    assert doc["Omega1"] == pytest.approx(1.2**0.5)


def test_verify(capsys):
    code, out, _ = run(["verify", "--samples", "5"], capsys)
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("0 failed")
    assert all(line.startswith("PASS") for line in out.strip().splitlines()[:-1])


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "milburnosc", "modes"], capture_output=True, text=True,
                          env={**os.environ})
    assert proc.returncode == 0 and '"theta"' in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "milburnosc", "evolve", "--nope"], capture_output=True, text=True)
    assert proc.returncode == 2
