import csv
import io
import json
import math
import subprocess
import sys

import pytest

from phikcorr.cli import main

ORD = ["--ordinal", "car_size=XS,S,M,L,XL,XXL"]


@pytest.fixture(scope="module")
def car_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "car.csv"
    assert main(["generate", "car", "-n", "2000", "--seed", "3", "-o", str(path)]) == 0
    return path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_formats(tmp_path, capsys):
    for ds in ("smiley", "bvn", "uniform", "car"):
        code, out, _ = run(["generate", ds, "-n", "50", "--seed", "1"], capsys)
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert len(rows) == 51


def test_correlate_csv_and_json(car_csv, capsys):
    code, out, _ = run(["correlate", car_csv, *ORD], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "variable" and len(rows) == 6
    matrix = [[float(v) for v in r[1:6]] for r in rows[1:]]
    assert all(matrix[i][i] == 1.0 for i in range(5))
    code, out, _ = run(["correlate", car_csv, *ORD, "--format", "json"], capsys)
    doc = json.loads(out)
    assert doc["variables"][4] == "car_size"
    # CSV and JSON carry the same numbers
    for i in range(5):
        for j in range(5):
            assert float(f"{doc['phik'][i][j]:.12g}") == float(f"{matrix[i][j]:.12g}")


def test_correlate_identical_columns(tmp_path, capsys):
    path = tmp_path / "two.csv"
    path.write_text("a,b\n" + "".join(f"{v},{v}\n" for v in "xyzzyxxyzz"))
    code, out, _ = run(["correlate", path, "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["phik"][0][1] == 1.0


def test_json_byte_identical(car_csv, capsys):
    argv = ["significance", car_csv, *ORD, "--format", "json", "--seed", "4"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second
    doc = json.loads(first)
    assert doc["z_saturation"] == 5.0
    pair = next(p for p in doc["pairs"] if {p["a"], p["b"]} == {"car_size", "mileage"})
    assert pair["z"] > 5 and pair["saturated"] is True
    assert pair["n_edof"] > 0 and pair["n_sim"] in (500, 2000)
    age_color = next(p for p in doc["pairs"] if {p["a"], p["b"]} == {"car_color", "driver_age"})
    assert abs(age_color["z"]) < 3


def test_significance_csv_matches_json(car_csv, capsys):
    base = ["significance", car_csv, *ORD, "--seed", "2", "--nsim", "200", "--sampling", "hypergeometric"]
    _, out_csv, _ = run(base, capsys)
    _, out_json, _ = run([*base, "--format", "json"], capsys)
    rows = list(csv.DictReader(io.StringIO(out_csv)))
    pairs = json.loads(out_json)["pairs"]
    assert len(rows) == len(pairs) == 10
    for r, p in zip(rows, pairs):
        assert float(f"{float(r['z']):.12g}") == float(f"{p['z']:.12g}")
        assert int(r["n_sim"]) == p["n_sim"] == 200


def test_outliers_report(car_csv, capsys, tmp_path):
    svg = tmp_path / "o.svg"
    code, out, _ = run(["outliers", car_csv, "car_size", "mileage", *ORD, "--svg", svg], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6 * 10
    # XXL cars drive far more: their excess sits above the lowest mileage bins
    xxl = [r for r in rows if r["row"] == "XXL" and r["z"] != "NA"]
    top = max(xxl, key=lambda r: float(r["z"]))
    assert float(top["z"]) > 3 and not top["col"].startswith("[2")
    assert float(xxl[0]["z"]) < 0
    assert svg.read_text().startswith("<svg")


def test_outliers_na_cells(tmp_path, capsys):
    path = tmp_path / "sparse.csv"
    path.write_text("a,b\nx,u\ny,u\nx,v\n")
    code, out, _ = run(["outliers", path, "a", "b"], capsys)
    assert code == 0
    assert "NA" in out
    code, out, _ = run(["outliers", path, "a", "b", "--format", "json"], capsys)
    cells = json.loads(out)["cells"]
    assert any(c["z"] is None for c in cells)


def test_svg_outputs(car_csv, tmp_path, capsys):
    svg = tmp_path / "m.svg"
    assert run(["correlate", car_csv, *ORD, "--svg", svg], capsys)[0] == 0
    text = svg.read_text()
    assert text.count("<rect") == 25 and "</svg>" in text


def test_bins_override(car_csv, capsys):
    _, a, _ = run(["correlate", car_csv, *ORD, "--bins", "5", "--format", "json"], capsys)
    _, b, _ = run(["correlate", car_csv, *ORD, "--bins", "mileage=20", "--format", "json"], capsys)
    assert json.loads(a)["config"]["bins"]["mileage"] == 5
    assert json.loads(b)["config"]["bins"] == {
        "car_color": 10, "driver_age": 10, "area": 10, "mileage": 20, "car_size": 10
    }


def test_kind_overrides(tmp_path, capsys):
    path = tmp_path / "k.csv"
    path.write_text("a,b\n1,x\n2,y\n1,x\n3,y\n")
    code, out, _ = run(["correlate", path, "--categorical", "a", "--format", "json"], capsys)
    assert code == 0
    code, _, err = run(["correlate", path, "--interval", "b"], capsys)
    assert code == 2 and "cannot parse" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["correlate", "missing.csv"],
        ["correlate", "{one}"],
        ["outliers", "{car}", "nope", "mileage"],
        ["correlate", "{car}", "--ordinal", "car_size"],
        ["correlate", "{car}", "--interval", "ghost"],
        ["correlate", "{car}", "--bins", "zero"],
        ["significance", "{car}", *ORD, "--nsim", "10"],
        ["correlate", "{car}", "--sampling", "bogus"],
    ],
)
def test_input_errors_exit_2(argv, car_csv, tmp_path, capsys):
    one = tmp_path / "one.csv"
    one.write_text("a\n1\n2\n")
    argv = [a.format(car=car_csv, one=one) for a in argv]
    assert run(argv, capsys)[0] == 2


def test_numerical_failure_exit_1(monkeypatch, car_csv, capsys):
    import phikcorr.cli as cli

    def boom(*args, **kwargs):
        raise FloatingPointError("overflow")

    monkeypatch.setattr(cli, "phik_matrix", boom)
    code, _, err = run(["correlate", car_csv], capsys)
    assert code == 1 and "numerical failure" in err


def test_module_entry_point(car_csv):
    proc = subprocess.run(
        [sys.executable, "-m", "phikcorr", "correlate", str(car_csv), *ORD, "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert all(math.isfinite(g) for g in doc["global_correlations"])
