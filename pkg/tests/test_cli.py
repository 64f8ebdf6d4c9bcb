import csv
import io
import json
import subprocess
import sys

import pytest

from harmkit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_kernels_abel_transform_at_zero(capsys):
    code, out, _ = run(capsys, "kernels", "--abel", "1", "--at", "0")
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["kernel"] == "abel" and row["value"] == 1.0 and row["transform"] == 2.0


def test_kernels_csv(capsys):
    code, out, _ = run(capsys, "kernels", "--gaussian", "1", "--poisson", "0.5", "--at", "0,1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert {r["kernel"] for r in rows} == {"poisson", "gaussian"}


def test_fourier_transform_closed_form_column(capsys):
    code, out, _ = run(capsys, "fourier-transform", "--catalog", "gaussian 1", "--xi-min", "-2", "--xi-max", "2",
                       "--points", "5")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 5
    assert max(r["abs_err"] for r in doc["rows"]) < 1e-8


def test_fourier_transform_expr(capsys):
    code, out, _ = run(capsys, "fourier-transform", "--expr", "exp(-x^2)", "--envelope", "1.3", "0", "1",
                       "--xi-min", "0", "--xi-max", "1", "--points", "2")
    assert code == 0
    assert json.loads(out)["rows"][0]["hat_re"] == pytest.approx(1.7724538509, abs=1e-8)


def test_fourier_series(capsys):
    code, out, _ = run(capsys, "fourier-series", "--expr", "cos(x)", "--degree", "2")
    doc = json.loads(out)
    vals = {r["index"]: r["a_re"] for r in doc["rows"]}
    assert code == 0 and vals[1] == pytest.approx(0.5) and vals[-1] == pytest.approx(0.5)
    assert abs(doc["meta"]["parseval_defect"]) < 1e-12


def test_invert_routes(capsys):
    code, out, _ = run(capsys, "invert", "--catalog", "gaussian 1", "--at", "1", "--eta", "0.1,0.001")
    rows = json.loads(out)["rows"]
    assert code == 0 and rows[-1]["error"] < 1e-3 and all(r["route_gap"] < 2e-9 for r in rows)


def test_convolve_line(capsys):
    code, out, _ = run(capsys, "convolve", "--kind", "line", "--f", "gaussian 1", "--g", "gaussian 1", "--at", "0")
    assert code == 0
    assert json.loads(out)["rows"][0]["value_re"] == pytest.approx(1.2533141373, abs=1e-9)


def test_convolve_circle(tmp_path, capsys):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"dim": 1, "entries": [[[1], 1, 0], [[-2], 0, 1]]}))
    code, out, _ = run(capsys, "convolve", "--kind", "circle", "--f", str(p), "--g", str(p), "--degree", "2")
    rows = {r["index"]: r for r in json.loads(out)["rows"]}
    assert code == 0 and rows[1]["c_re"] == pytest.approx(1.0) and rows[-2]["c_re"] == pytest.approx(-1.0)


def test_mean(tmp_path, capsys):
    p = tmp_path / "f.json"
    p.write_text("[[0, 1, 0], [2, 0.5, 0]]")
    code, out, _ = run(capsys, "mean", "--input", str(p), "-L", "50", "--eps", "0.4")
    doc = json.loads(out)
    assert code == 0 and doc["rows"][0]["mean_re"] == 1.0
    assert abs(doc["rows"][1]["mean_re"] - 1.0) <= doc["rows"][1]["bound"]
    assert len(doc["meta"]["spectrum"]) == 2


def test_regularize(tmp_path, capsys):
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"points": [0, 1], "dist": [[0, 1], [1, 0]], "values": [0, 3]}))
    code, out, _ = run(capsys, "regularize", "--input", str(p), "--j", "1")
    doc = json.loads(out)
    assert code == 0 and [r["f_1"] for r in doc["rows"]] == [0.0, 1.0] and doc["meta"]["lipschitz"]["1"]


def test_out_file(tmp_path, capsys):
    target = tmp_path / "k.csv"
    code, out, _ = run(capsys, "kernels", "--abel", "1", "--format", "csv", "--out", str(target))
    assert code == 0 and out == "" and target.read_text().startswith("kernel,")


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["kernels"],
        ["invert"],
        ["invert", "--expr", "sin(x)", "--envelope", "1", "2"],
        ["invert", "--expr", "x +", "--envelope", "1", "2"],
        ["fourier-transform", "--catalog", "nope 1"],
        ["mean", "--input", "/nonexistent/f.json"],
        ["kernels", "--abel", "1", "--at", "a,b"],
        ["mean", "--input", '{"terms": [1]}'],
        ["regularize", "--input", '{"points": [0, 1], "values": [0, 1]}'],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("harmkit: error:")


def test_verify_deterministic():
    cmd = [sys.executable, "-m", "harmkit.cli", "verify", "--seed", "3", "--format", "csv"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    assert a.returncode == 0 and a.stdout == b.stdout
    assert a.stdout.splitlines()[0] == b"group,check,value,bound,pass"
