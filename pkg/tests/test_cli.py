import json

import numpy as np
import pytest

from apweights import (
    FREQUENCY,
    GridFunction,
    LatticeWindow,
    Polynomial,
    ShiftCertificate,
    Weight,
    io,
    to_physical,
)
from apweights.cli import main


@pytest.fixture()
def files(tmp_path):
    P = Polynomial.monomial(1, (2,))
    poly = tmp_path / "poly.json"
    io.write_json(poly, io.poly_to_dict(P))
    weight = tmp_path / "weight.json"
    io.write_json(weight, io.weight_to_dict(Weight.power(2.0, 1)))
    vals = np.zeros(64, dtype=np.complex128)
    vals[1] = 1.0
    vals[5] = 0.25 - 0.5j
    f = to_physical(GridFunction(1, (64,), vals, FREQUENCY))
    grid = tmp_path / "f.json"
    io.write_json(grid, io.grid_to_dict(f))
    return {"poly": poly, "weight": weight, "grid": grid, "dir": tmp_path}


def test_analyze_weight_file(files, capsys):
    out = files["dir"] / "analysis.json"
    code = main(["analyze", "--weight", str(files["weight"]), "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert 3.0 <= rep["critical_exponent"] <= 3.3
    assert rep["ap_report"]["cubes_examined"] > 0
    assert rep["provenance"]["command"] == "analyze"
    assert "critical exponent" in capsys.readouterr().out


def test_analyze_poly_as_weight(files):
    out = files["dir"] / "analysis2.json"
    code = main(["analyze", "--poly", str(files["poly"]), "--p", "3.5", "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["ap_report"]["p"] == 3.5


def test_analyze_needs_some_input(files):
    assert main(["analyze"]) == 2


def test_analyze_csv(files):
    out = files["dir"] / "analysis.csv"
    code = main(["analyze", "--weight", str(files["weight"]), "--out", str(out),
                 "--format", "csv"])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "key,value"
    assert any(line.startswith("critical_exponent,") for line in lines)


def test_shift_writes_certificate(files):
    out = files["dir"] / "cert.json"
    code = main(["shift", "--poly", str(files["poly"]), "--p", "3.5",
                 "--window", "50", "--out", str(out)])
    assert code == 0
    cert = json.loads(out.read_text())
    assert cert["C9"] == pytest.approx(2.0**0.8, abs=1e-6)
    assert cert["M"] == 50 and cert["recheck_M"] == 100


def test_solve_and_verify(files):
    cert = files["dir"] / "cert.json"
    main(["shift", "--poly", str(files["poly"]), "--p", "3.5", "--out", str(cert)])
    sol = files["dir"] / "sol"
    code = main(["solve", "--poly", str(files["poly"]), "--cert", str(cert),
                 "--grid", str(files["grid"]), "--out", str(sol)])
    assert code == 0
    assert (sol / "solution.json").exists()
    rep = json.loads((sol / "report.json").read_text())
    assert len(rep["reports"]) == 5
    assert all(r["verdict"] == "PASS" for r in rep["reports"])

    vout = files["dir"] / "verify.json"
    code = main(["verify", "--poly", str(files["poly"]), "--cert", str(cert),
                 "--grid", str(files["grid"]), "--solution", str(sol / "solution.json"),
                 "--rho", "0,1", "--out", str(vout)])
    assert code == 0
    ver = json.loads(vout.read_text())
    assert ver["forward_residual"] < 1e-10
    assert [r["rho"] for r in ver["reports"]] == [0.0, 1.0]


def test_solve_requires_out(files):
    code = main(["solve", "--poly", str(files["poly"]), "--cert", str(files["poly"]),
                 "--grid", str(files["grid"])])
    assert code == 2


def test_solve_csv_report(files):
    cert = files["dir"] / "cert.json"
    main(["shift", "--poly", str(files["poly"]), "--p", "3.5", "--out", str(cert)])
    sol = files["dir"] / "solcsv"
    code = main(["solve", "--poly", str(files["poly"]), "--cert", str(cert),
                 "--grid", str(files["grid"]), "--out", str(sol), "--format", "csv"])
    assert code == 0
    lines = (sol / "report.csv").read_text().strip().splitlines()
    assert lines[0].startswith("rho,")
    assert len(lines) == 6


def test_exit_parse_error(files):
    assert main(["analyze", "--weight", str(files["dir"] / "missing.json")]) == 2


def test_exit_never_finite(tmp_path):
    w = tmp_path / "w.json"
    io.write_json(w, io.weight_to_dict(Weight.power(-1.5, 1)))
    assert main(["analyze", "--weight", str(w)]) == 3


def test_exit_all_shifts_bad(tmp_path):
    p = tmp_path / "zero.json"
    io.write_json(p, io.poly_to_dict(Polynomial(1, {})))
    assert main(["shift", "--poly", str(p), "--p", "3.0", "--window", "2"]) == 4


def test_exit_small_divisor_breach(files, tmp_path):
    P = Polynomial.monomial(1, (2,))
    cert0 = ShiftCertificate(
        (0.0,), 3.5, LatticeWindow(50), np.inf, np.inf, 0.0, 100, np.inf, poly=P
    )
    cpath = tmp_path / "cert0.json"
    io.write_json(cpath, io.certificate_to_dict(cert0))
    vals = np.zeros(64, dtype=np.complex128)
    vals[0] = 1.0
    f = to_physical(GridFunction(1, (64,), vals, FREQUENCY))
    gpath = tmp_path / "fdc.json"
    io.write_json(gpath, io.grid_to_dict(f))
    code = main(["solve", "--poly", str(files["poly"]), "--cert", str(cpath),
                 "--grid", str(gpath), "--out", str(tmp_path / "s")])
    assert code == 5


def test_shift_deterministic_modulo_timestamp(files):
    a = files["dir"] / "a.json"
    b = files["dir"] / "b.json"
    argv = ["shift", "--poly", str(files["poly"]), "--p", "3.5", "--seed", "4"]
    main(argv + ["--out", str(a)])
    main(argv + ["--out", str(b)])
    da = json.loads(a.read_text())
    db = json.loads(b.read_text())
    da["provenance"].pop("timestamp")
    db["provenance"].pop("timestamp")
    da["provenance"]["config"].pop("out")
    db["provenance"]["config"].pop("out")
    assert da == db


def test_example_end_to_end(tmp_path):
    out = tmp_path / "ex"
    code = main(["example", "--powers", "1", "--rho=-1,1", "--out", str(out)])
    assert code == 0
    rep = json.loads((out / "report.json").read_text())
    assert [s["verdict"] for s in rep["stages"]] == ["PASS", "PASS", "PASS"]
    assert (out / "stage1_certificate.json").exists()
    assert (out / "stage2_certificate.json").exists()


def test_example_rejects_bad_powers(tmp_path):
    assert main(["example", "--powers", "1,2,3", "--out", str(tmp_path / "x")]) == 2
    assert main(["example", "--powers", "0", "--out", str(tmp_path / "y")]) == 2
