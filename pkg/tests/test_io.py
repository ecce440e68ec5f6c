import numpy as np
import pytest

from apweights import (
    ApReport,
    Cube,
    FREQUENCY,
    GridFunction,
    ParseError,
    Polynomial,
    QuadratureSpec,
    Weight,
    find_shift,
    io,
    to_physical,
    verify_estimate,
)


def test_poly_roundtrip():
    P = Polynomial(2, {(0, 0): 1.5, (2, 1): -0.5 + 2j})
    back = io.poly_from_dict(io.poly_to_dict(P))
    assert back.dim == P.dim and back.terms == P.terms


def test_weight_roundtrip_all_kinds():
    P = Polynomial.monomial(1, (2,))
    samples = [
        Weight.power(2.5, 2),
        Weight.constant(0.3, 1),
        Weight.polymod(P, exponent=-0.5),
        Weight.product([Weight.power(1.0, 1), Weight.constant(2.0, 1)]),
    ]
    for w in samples:
        back = io.weight_from_dict(io.weight_to_dict(w))
        assert back.kind == w.kind and back.dim == w.dim
        pts = np.array([[0.7], [1.9]]) if w.dim == 1 else np.array([[0.7, -0.2]])
        assert np.allclose(back.eval(pts), w.eval(pts), rtol=1e-14)


def test_cube_roundtrip():
    B = Cube((0.5, -1.25), 0.75)
    assert io.cube_from_dict(io.cube_to_dict(B)) == B


def test_ap_report_roundtrip_with_inf():
    rep = ApReport(2.5, float("inf"), Cube((0.0,), 1.0), 17, QuadratureSpec(64))
    d = io.ap_report_to_dict(rep)
    assert d["sup_quotient"] == "inf"
    back = io.ap_report_from_dict(d)
    assert back.sup_quotient == float("inf") and back.cubes_examined == 17


def test_certificate_roundtrip():
    P = Polynomial.monomial(1, (2,))
    cert = find_shift(P, 3.5, 10, grid=16, seed=0)
    d = io.certificate_to_dict(cert)
    for key in ("xi0", "p", "pprime", "M", "C9", "lattice_sum", "min_divisor",
                "recheck_M", "recheck_C9"):
        assert key in d
    back = io.certificate_from_dict(d, poly=P)
    assert back.xi0 == cert.xi0
    assert back.C9 == cert.C9
    assert back.window.M == cert.window.M
    assert back.poly is P


def test_grid_roundtrip_exact():
    rng = np.random.default_rng(0)
    vals = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    g = GridFunction(2, (8, 8), vals, FREQUENCY)
    back = io.grid_from_dict(io.grid_to_dict(g))
    assert back.sizes == g.sizes and back.domain_tag == g.domain_tag
    assert np.array_equal(back.values, vals)


def test_grid_dict_size_validated():
    g = GridFunction(1, (8,), np.zeros(8, dtype=np.complex128), FREQUENCY)
    d = io.grid_to_dict(g)
    d["data"] = d["data"][:-2]
    with pytest.raises(ParseError):
        io.grid_from_dict(d)


def test_solve_report_dict_has_verdict():
    P = Polynomial.monomial(1, (2,))
    cert = find_shift(P, 3.5, 10, grid=16, seed=0)
    vals = np.zeros(32, dtype=np.complex128)
    vals[1] = 1.0
    f = to_physical(GridFunction(1, (32,), vals, FREQUENCY))
    rep = verify_estimate(P, cert, f, 0.0)
    d = io.solve_report_to_dict(rep)
    assert d["verdict"] == "PASS"
    assert d["rho"] == 0.0


def test_read_json_missing_file(tmp_path):
    with pytest.raises(ParseError):
        io.read_json(tmp_path / "nope.json")


def test_read_json_malformed(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        io.read_json(bad)


def test_read_json_non_object(tmp_path):
    arr = tmp_path / "arr.json"
    arr.write_text("[1, 2, 3]")
    with pytest.raises(ParseError):
        io.read_json(arr)


def test_weight_from_dict_unknown_family():
    with pytest.raises(ParseError):
        io.weight_from_dict({"family": "gaussian", "dim": 1})


def test_poly_from_dict_missing_keys():
    with pytest.raises(ParseError):
        io.poly_from_dict({"dim": 1})


def test_nan_refused():
    with pytest.raises(ParseError):
        io._dec_num(float("nan"))


def test_write_and_read_json(tmp_path):
    path = tmp_path / "out.json"
    io.write_json(path, {"a": 1, "b": [1, 2]})
    assert io.read_json(path) == {"a": 1, "b": [1, 2]}
    assert path.read_text().endswith("\n")


def test_write_csv(tmp_path):
    path = tmp_path / "rows.csv"
    io.write_csv(path, [{"rho": -1.0, "ratio": 0.5}, {"rho": 0.0, "ratio": 0.25}])
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "rho,ratio"
    assert len(lines) == 3
