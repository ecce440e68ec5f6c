"""JSON (and CSV) serialization for every artifact the CLI reads or writes.

All parsers raise ParseError on malformed input and ignore unknown keys,
so files may carry extra metadata (provenance) without breaking consumers.
Floats round-trip exactly through json's repr-based encoding; non-finite
numbers are encoded as the string "inf" (json has no literal for them).
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import ParseError
from .poly import Polynomial
from .shift import LatticeWindow, ShiftCertificate
from .torus import GridFunction, SolveReport
from .weights import ApReport, Cube, QuadratureSpec, Weight


def _enc_num(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        raise ValueError("refusing to serialize NaN")
    return float(x)


def _dec_num(x) -> float:
    if isinstance(x, str):
        if x == "inf":
            return math.inf
        if x == "-inf":
            return -math.inf
        raise ParseError(f"expected a number or 'inf', got {x!r}")
    val = float(x)
    if math.isnan(val):
        raise ParseError("NaN is not a valid stored number")
    return val


def poly_to_dict(P: Polynomial) -> dict:
    terms = [
        {"alpha": list(alpha), "re": float(c.real), "im": float(c.imag)}
        for alpha, c in sorted(P.terms.items())
    ]
    return {"dim": P.dim, "terms": terms}


def poly_from_dict(d: dict) -> Polynomial:
    try:
        terms = {
            tuple(int(a) for a in t["alpha"]): complex(float(t["re"]), float(t["im"]))
            for t in d["terms"]
        }
        return Polynomial(int(d["dim"]), terms)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad polynomial record: {exc}") from exc


def weight_to_dict(w: Weight) -> dict:
    if w.kind == "power":
        return {"family": "power", "dim": w.dim, "alpha": w.alpha}
    if w.kind == "constant":
        return {"family": "constant", "dim": w.dim, "c": w.c}
    if w.kind == "polymod":
        out = {"family": "polymod", "poly": poly_to_dict(w.poly)}
        if w.exponent != 1.0:
            out["exponent"] = w.exponent
        return out
    return {"family": "product", "factors": [weight_to_dict(f) for f in w.factors]}


def weight_from_dict(d: dict) -> Weight:
    try:
        family = d["family"]
        if family == "power":
            return Weight.power(float(d["alpha"]), int(d.get("dim", 1)))
        if family == "constant":
            return Weight.constant(float(d["c"]), int(d.get("dim", 1)))
        if family == "polymod":
            return Weight.polymod(poly_from_dict(d["poly"]), float(d.get("exponent", 1.0)))
        if family == "product":
            return Weight.product(*(weight_from_dict(f) for f in d["factors"]))
        raise ParseError(f"unknown weight family {family!r}")
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad weight record: {exc}") from exc


def cube_to_dict(B: Cube) -> dict:
    return {"center": list(B.center), "halfwidth": B.halfwidth}


def cube_from_dict(d: dict) -> Cube:
    try:
        return Cube(tuple(float(c) for c in d["center"]), float(d["halfwidth"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad cube record: {exc}") from exc


def ap_report_to_dict(rep: ApReport) -> dict:
    return {
        "p": rep.p,
        "sup_quotient": _enc_num(rep.sup_quotient),
        "worst_cube": cube_to_dict(rep.worst_cube),
        "cubes_examined": rep.cubes_examined,
        "quadrature": {
            "nodes_per_axis": rep.quadrature.nodes_per_axis,
            "rule": rep.quadrature.rule,
        },
    }


def ap_report_from_dict(d: dict) -> ApReport:
    try:
        return ApReport(
            p=float(d["p"]),
            sup_quotient=_dec_num(d["sup_quotient"]),
            worst_cube=cube_from_dict(d["worst_cube"]),
            cubes_examined=int(d["cubes_examined"]),
            quadrature=QuadratureSpec(
                int(d["quadrature"]["nodes_per_axis"]), str(d["quadrature"]["rule"])
            ),
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad A_p report record: {exc}") from exc


def certificate_to_dict(cert: ShiftCertificate) -> dict:
    return {
        "xi0": list(cert.xi0),
        "p": cert.p,
        "pprime": cert.pprime,
        "M": cert.window.M,
        "C9": _enc_num(cert.C9),
        "lattice_sum": _enc_num(cert.lattice_sum),
        "min_divisor": cert.min_divisor,
        "recheck_M": cert.recheck_M,
        "recheck_C9": _enc_num(cert.recheck_C9),
    }


def certificate_from_dict(d: dict, poly: Polynomial | None = None) -> ShiftCertificate:
    """The wire format carries no polynomial; pass one to re-attach it."""
    try:
        return ShiftCertificate(
            xi0=tuple(float(c) for c in d["xi0"]),
            p=float(d["p"]),
            window=LatticeWindow(int(d["M"])),
            C9=_dec_num(d["C9"]),
            lattice_sum=_dec_num(d["lattice_sum"]),
            min_divisor=float(d["min_divisor"]),
            recheck_M=int(d["recheck_M"]),
            recheck_C9=_dec_num(d["recheck_C9"]),
            poly=poly,
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad certificate record: {exc}") from exc


def grid_to_dict(f: GridFunction) -> dict:
    flat = f.values.ravel(order="C")
    data = np.empty(2 * flat.size)
    data[0::2] = flat.real
    data[1::2] = flat.imag
    return {
        "dim": f.dim,
        "sizes": list(f.sizes),
        "domain_tag": f.domain_tag,
        "data": data.tolist(),
    }


def grid_from_dict(d: dict) -> GridFunction:
    try:
        sizes = tuple(int(s) for s in d["sizes"])
        data = np.asarray(d["data"], dtype=np.float64)
        total = int(np.prod(sizes))
        if data.size != 2 * total:
            raise ValueError(f"expected {2 * total} interleaved samples, got {data.size}")
        vals = (data[0::2] + 1j * data[1::2]).reshape(sizes)
        return GridFunction(int(d["dim"]), sizes, vals, str(d["domain_tag"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad grid function record: {exc}") from exc


def solve_report_to_dict(rep: SolveReport) -> dict:
    return {
        "certificate": certificate_to_dict(rep.certificate),
        "rho": rep.rho,
        "norm_u_rho": rep.norm_u_rho,
        "norm_f_rho_plus_np": rep.norm_f_rho_plus_np,
        "apriori_constant": rep.apriori_constant,
        "ratio": rep.ratio,
        "verdict": "PASS" if rep.passed else "FAIL",
    }


def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected a JSON object at top level")
    return obj


def write_json(path, obj: dict):
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def write_csv(path, rows: list[dict]):
    if not rows:
        Path(path).write_text("")
        return
    fields = list(rows[0])
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
