import csv
import io
import json
import subprocess
import sys

import pytest

from sparsepredict import cli
from sparsepredict import config as cfgmod
from sparsepredict.errors import CapacityError, ConfigError
from sparsepredict.predictor import RunReport


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_config_text_parsing(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text("# sample\nn = 8\np = 3,4  # two widths\ntimes = 0, 2:6:2, max\ndelta=1/2\ngap = 2^-3\n")
    cfg = cfgmod.load(path)
    assert cfg.n == (8,) and cfg.p == (3, 4)
    assert cfg.times == (0, 2, 4, 6, "max")
    assert cfg.delta == (0.5,) and cfg.gap == 0.125


@pytest.mark.parametrize("text", ["bogus = 1", "n 8", "n = x", "format = xml", "times = 1:5:0"])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        cfgmod.parse_text(text)


def test_config_checks():
    with pytest.raises(ConfigError):
        cfgmod.parse_text("trials = 0").check()
    with pytest.raises(CapacityError):
        cfgmod.parse_text("n = 15").check()
    with pytest.warns(UserWarning):
        cfgmod.parse_text("n = 15\nmax_qubits = 16").check()
    with pytest.raises(ConfigError):
        cfgmod.parse_text("times = ").check()


def test_missing_config_file(capsys):
    code, _, err = run(["wizard", "--config", "/nonexistent/x.cfg"], capsys)
    assert code == 2 and err.startswith("error: config_error:")


def test_wizard_command(capsys):
    code, out, _ = run(["wizard", "--trials", "5"], capsys)
    rows = [r for r in csv.DictReader(io.StringIO(out)) if not r["experiment"].startswith("#")]
    assert code == 0 and len(rows) == 3
    assert all(r["pass"] == "pass" for r in rows)
    assert out.strip().endswith("# result=pass")


def test_wizard_exact_spectrum_gives_zero_tail(capsys):
    # gap 1/4 on n = 4 with p = 4: every frequency is 4-bit exact
    code, out, _ = run(["wizard", "--n", "4", "--p", "4", "--gap", "0.25", "--count", "4", "--trials", "3"], capsys)
    rows = list(csv.DictReader(line for line in io.StringIO(out) if not line.startswith("#")))
    assert code == 0 and all(float(r["tail_mass"]) < 1e-12 for r in rows)


def test_wizard_p_above_n(capsys):
    code, _, err = run(["wizard", "--p", "9"], capsys)
    assert code == 2 and err.count("\n") == 1 and "config_error" in err


def test_predict_horizon_error_row(capsys):
    code, out, _ = run(["predict", "--n", "8", "--p", "4", "--trials", "2", "--times", "0,9,10"], capsys)
    lines = out.splitlines()
    assert lines[0] == ",".join(cli.HEADER)
    assert lines[3].startswith("predict:horizon-error,8,4,7,0.5,10,")
    assert code == 1


def test_predict_json_round_trips(capsys):
    code, out, _ = run(["predict", "--n", "7", "--p", "3", "--trials", "2", "--times", "1,4", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["experiment"] == "predict"
    for row in doc["rows"]:
        rep = RunReport.from_dict(row["report"])
        assert rep.vector_distance == row["distance"] and rep.t == row["t"]
        assert rep.u_cond_count == row["u_cond"] == 126


def test_restore_rows_are_negated(capsys):
    code, out, _ = run(["restore", "--n", "7", "--p", "3", "--trials", "2", "--times", "1,4"], capsys)
    rows = list(csv.DictReader(line for line in io.StringIO(out) if not line.startswith("#")))
    assert code == 0 and [r["t"] for r in rows] == ["-1", "-4"]


def test_shor_command(capsys):
    code, out, _ = run(["shor"], capsys)
    assert code == 0 and "# period=4" in out and "# factors=3 5" in out
    code, _, err = run(["shor", "--a", "5"], capsys)
    assert code == 2 and err.startswith("error: argument_error:")


def test_grover_command(capsys):
    code, out, _ = run(["grover", "--times", "1,max", "--trials", "3"], capsys)
    assert code == 0
    summary = dict(line[2:].split("=", 1) for line in out.splitlines() if line.startswith("# "))
    assert abs(float(summary["gap"]) - float(summary["gap_formula"])) < 1e-9


def test_sweep_cardinality_and_errors(capsys):
    argv = ["sweep", "--n", "7,8", "--p", "3,4", "--delta", "0.5,0.6", "--trials", "2"]
    code, out, _ = run(argv, capsys)
    rows = [line for line in out.splitlines() if line and not line.startswith("#")]
    assert code == 0 and len(rows) == 1 + 8
    assert sum(line.startswith("# summary[") and line.endswith(".runs=1") for line in out.splitlines()) == 8
    code, _, err = run(["sweep", "--n", ""], capsys)
    assert code == 2 and "config_error" in err


def test_capacity_guard(capsys):
    code, _, err = run(["predict", "--n", "15"], capsys)
    assert code == 3 and err.startswith("error: capacity_error:")


def test_usage_error_is_one_line():
    proc = subprocess.run(
        [sys.executable, "-m", "sparsepredict", "predict", "--bogus"], capture_output=True, text=True
    )
    assert proc.returncode == 2
    assert proc.stderr.startswith("error: usage_error:") and proc.stderr.count("\n") == 1


def test_out_file_written(tmp_path, capsys):
    path = tmp_path / "w.csv"
    code, out, _ = run(["wizard", "--trials", "2", "--K", "2", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert path.read_text().splitlines()[0] == ",".join(cli.WIZARD_HEADER)
