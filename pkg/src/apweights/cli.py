"""Command-line orchestration: analyze weights, emit shift certificates,
solve the conjugated equation, verify the Sobolev estimate, and run the
built-in worked example end to end.

Exit codes: 0 success, 2 parse failure, 3 never-finite quotient,
4 no usable shift, 5 small-divisor breach, 1 failed example stage.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, io, kernels
from .errors import AllShiftsBad, NeverFinite, ParseError, SmallDivisorBreach
from .poly import Polynomial
from .shift import find_shift, is_window_limited
from .torus import (
    FREQUENCY,
    GridFunction,
    SolveReport,
    apply_conjugated,
    apriori_constant,
    freq_axes,
    sobolev_norm,
    solve_conjugated,
    to_physical,
    verify_estimate,
)
from .weights import (
    QuadratureSpec,
    Weight,
    critical_exponent,
    dyadic_family,
    sup_ap_quotient,
)

DEFAULT_RHO = "-2,-1,0,1,2"
SHIFT_MARGIN = 0.25


def _provenance(args: argparse.Namespace) -> dict:
    config = {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in vars(args).items()
        if k != "func" and v is not None
    }
    try:
        import numba

        numba_version = numba.__version__
    except ImportError:
        numba_version = None
    return {
        "command": args.command,
        "config": config,
        "versions": {
            "apweights": __version__,
            "numpy": np.__version__,
            "numba": numba_version,
            "backend": kernels.backend(),
        },
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ParseError(f"bad numeric list {text!r}: {exc}") from exc


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ParseError(f"bad integer list {text!r}: {exc}") from exc


def _load_weight(args: argparse.Namespace) -> Weight:
    if args.weight:
        return io.weight_from_dict(io.read_json(args.weight))
    if args.poly:
        return Weight.polymod(io.poly_from_dict(io.read_json(args.poly)))
    raise ParseError("analyze needs --weight FILE or --poly FILE")


def _emit(out, fmt: str, bundle: dict, csv_rows: list[dict] | None = None):
    if out is None:
        print(json.dumps(bundle, indent=2))
        return
    out = Path(out)
    if fmt == "csv" and csv_rows is not None:
        io.write_csv(out, csv_rows)
    else:
        io.write_json(out, bundle)


def _kv_rows(d: dict, prefix: str = "") -> list[dict]:
    rows = []
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            rows.extend(_kv_rows(v, prefix=f"{key}."))
        else:
            rows.append({"key": key, "value": v})
    return rows


def cmd_analyze(args: argparse.Namespace) -> int:
    w = _load_weight(args)
    q = QuadratureSpec(args.nodes) if args.nodes else None
    family = dyadic_family(w.dim)
    p_star = critical_exponent(w, family, q)
    p_report = args.p if args.p is not None else p_star + SHIFT_MARGIN
    rep = sup_ap_quotient(w, family, p_report, q)
    bundle = {
        "provenance": _provenance(args),
        "critical_exponent": p_star,
        "ap_report": io.ap_report_to_dict(rep),
    }
    rows = _kv_rows({"critical_exponent": p_star, "ap_report": io.ap_report_to_dict(rep)})
    _emit(args.out, args.format, bundle, rows)
    print(f"critical exponent {p_star:.4f}; sup A_p quotient at p={p_report:.4f}: "
          f"{rep.sup_quotient}")
    return 0


def cmd_shift(args: argparse.Namespace) -> int:
    P = io.poly_from_dict(io.read_json(args.poly))
    grid = args.nodes if args.nodes else 64
    cert = find_shift(P, args.p, args.window, grid=grid, seed=args.seed)
    bundle = io.certificate_to_dict(cert)
    bundle["provenance"] = _provenance(args)
    _emit(args.out, args.format, bundle, _kv_rows(io.certificate_to_dict(cert)))
    flagged = is_window_limited(cert, cert.recheck_C9)
    print(f"xi0 = {cert.xi0}, C9 = {cert.C9:.12g}, recheck at M={cert.recheck_M}: "
          f"{'WINDOW-LIMITED' if flagged else 'stable'}")
    return 0


def _load_solve_inputs(args: argparse.Namespace):
    P = io.poly_from_dict(io.read_json(args.poly))
    cert = io.certificate_from_dict(io.read_json(args.cert), poly=P)
    f = io.grid_from_dict(io.read_json(args.grid))
    rhos = _parse_floats(args.rho)
    return P, cert, f, rhos


def _report_rows(reports: list[SolveReport]) -> list[dict]:
    return [
        {
            "rho": r.rho,
            "norm_u_rho": r.norm_u_rho,
            "norm_f_rho_plus_np": r.norm_f_rho_plus_np,
            "apriori_constant": r.apriori_constant,
            "ratio": r.ratio,
            "verdict": "PASS" if r.passed else "FAIL",
        }
        for r in reports
    ]


def cmd_solve(args: argparse.Namespace) -> int:
    P, cert, f, rhos = _load_solve_inputs(args)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    u = solve_conjugated(P, cert, f)
    reports = [verify_estimate(P, cert, f, rho) for rho in rhos]
    io.write_json(outdir / "solution.json", io.grid_to_dict(u))
    bundle = {
        "provenance": _provenance(args),
        "reports": [io.solve_report_to_dict(r) for r in reports],
    }
    if args.format == "csv":
        io.write_csv(outdir / "report.csv", _report_rows(reports))
    io.write_json(outdir / "report.json", bundle)
    for r in reports:
        print(f"rho={r.rho:+g}: {'PASS' if r.passed else 'FAIL'} "
              f"ratio={r.ratio:.6g} bound={r.apriori_constant:.6g}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    P, cert, f, rhos = _load_solve_inputs(args)
    bundle: dict = {"provenance": _provenance(args)}
    if args.solution:
        u = io.grid_from_dict(io.read_json(args.solution))
        forward = apply_conjugated(P, cert.xi0, u)
        fv, gv = forward.values, f.values
        denom = float(np.linalg.norm(gv.ravel()))
        residual = float(np.linalg.norm((fv - gv).ravel())) / denom if denom > 0 else 0.0
        bundle["forward_residual"] = residual
        s = cert.dim * cert.p
        reports = []
        for rho in rhos:
            norm_u = sobolev_norm(u, rho)
            norm_f = sobolev_norm(f, rho + s)
            ratio = norm_u / norm_f if norm_f > 0 else 0.0
            reports.append(
                SolveReport(cert, float(rho), norm_u, norm_f, apriori_constant(cert), ratio)
            )
    else:
        reports = [verify_estimate(P, cert, f, rho) for rho in rhos]
    bundle["reports"] = [io.solve_report_to_dict(r) for r in reports]
    _emit(args.out, args.format, bundle, _report_rows(reports))
    for r in reports:
        print(f"rho={r.rho:+g}: {'PASS' if r.passed else 'FAIL'} "
              f"ratio={r.ratio:.6g} bound={r.apriori_constant:.6g}")
    return 0


def _random_band_limited(sizes, band: int, seed: int) -> GridFunction:
    rng = np.random.default_rng(seed)
    axes = freq_axes(sizes)
    mask = np.ones(sizes, dtype=bool)
    for d, ax in enumerate(axes):
        shape = [1] * len(sizes)
        shape[d] = sizes[d]
        mask &= (np.abs(ax) <= band).reshape(shape)
    vals = np.zeros(sizes, dtype=np.complex128)
    k = int(mask.sum())
    vals[mask] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return to_physical(GridFunction(len(sizes), tuple(sizes), vals, FREQUENCY))


def _verify_stage(P: Polynomial, cert, f: GridFunction, rhos) -> dict:
    reports = [verify_estimate(P, cert, f, rho) for rho in rhos]
    u = solve_conjugated(P, cert, f)
    forward = apply_conjugated(P, cert.xi0, u)
    residual = float(
        np.linalg.norm((forward.values - f.values).ravel())
        / np.linalg.norm(f.values.ravel())
    )
    return {
        "reports": [io.solve_report_to_dict(r) for r in reports],
        "forward_residual": residual,
        "all_pass": bool(all(r.passed for r in reports) and residual < 1e-8),
    }


def _example_window(m0: int) -> tuple[float, float]:
    return (m0 + 1.0, m0 + 1.3)


def cmd_example(args: argparse.Namespace) -> int:
    outdir = Path(args.out) if args.out else Path("apweights_example_out")
    outdir.mkdir(parents=True, exist_ok=True)
    rhos = _parse_floats(args.rho)
    window = args.window
    stages = []

    # stage 1: the quadratic symbol on the line, full pipeline
    w1 = Weight.power(2.0, 1)
    p_star = critical_exponent(w1, dyadic_family(1))
    lo, hi = _example_window(2)
    p_use = p_star + SHIFT_MARGIN
    P1 = Polynomial.monomial(1, (2,))
    cert1 = find_shift(P1, p_use, window, grid=64, seed=args.seed)
    io.write_json(outdir / "stage1_certificate.json", io.certificate_to_dict(cert1))
    f1 = _random_band_limited((256,), 32, args.seed)
    ver1 = _verify_stage(P1, cert1, f1, rhos)
    stage1 = {
        "name": "line-quadratic",
        "critical_exponent": p_star,
        "exponent_window": [lo, hi],
        "p_used": p_use,
        "certificate_C9": cert1.C9,
        **ver1,
        "verdict": "PASS" if (lo <= p_star <= hi and ver1["all_pass"]) else "FAIL",
    }
    stages.append(stage1)

    # stage 2: the plane symbol xi1^2 xi2^2; tensor duals converge slowly,
    # so the finiteness check needs a finer rule and a lean family
    P2 = Polynomial.monomial(2, (2, 2))
    w2 = Weight.polymod(P2)
    fam2 = dyadic_family(2, kmax=4, center_steps=1)
    rep2 = sup_ap_quotient(w2, fam2, 3.5, QuadratureSpec(320))
    cert2 = find_shift(P2, 3.5, window, grid=16, seed=args.seed)
    io.write_json(outdir / "stage2_certificate.json", io.certificate_to_dict(cert2))
    f2 = _random_band_limited((32, 32), 8, args.seed + 1)
    ver2 = _verify_stage(P2, cert2, f2, rhos)
    stage2 = {
        "name": "plane-biquadratic",
        "p_probe": 3.5,
        "sup_quotient": io._enc_num(rep2.sup_quotient),
        **ver2,
        "verdict": "PASS"
        if (np.isfinite(rep2.sup_quotient) and ver2["all_pass"])
        else "FAIL",
    }
    stages.append(stage2)

    # stage 3: user-chosen monomial powers, exponent checked against max+1
    powers = _parse_ints(args.powers)
    if not powers or len(powers) > 2 or any(m < 1 for m in powers):
        raise ParseError(f"--powers wants 1 or 2 positive integers, got {args.powers!r}")
    m0 = max(powers)
    Pm = Polynomial.separable_powers(powers)
    wm = Weight.polymod(Pm)
    n = len(powers)
    stage3: dict = {"name": "monomial-powers", "powers": powers, "m0_plus_1": m0 + 1.0}
    if n == 1:
        p_star_m = critical_exponent(wm, dyadic_family(1))
        lo, hi = _example_window(m0)
        stage3["critical_exponent"] = p_star_m
        stage3["exponent_window"] = [lo, hi]
        ok = lo <= p_star_m <= hi
    else:
        famm = dyadic_family(2, kmax=4, center_steps=1)
        repm = sup_ap_quotient(wm, famm, m0 + 1.5, QuadratureSpec(320))
        stage3["p_probe"] = m0 + 1.5
        stage3["sup_quotient"] = io._enc_num(repm.sup_quotient)
        ok = bool(np.isfinite(repm.sup_quotient))
    stage3["verdict"] = "PASS" if ok else "FAIL"
    stages.append(stage3)

    bundle = {"provenance": _provenance(args), "stages": stages}
    io.write_json(outdir / "report.json", bundle)
    for st in stages:
        print(f"{st['name']}: {st['verdict']}")
    return 0 if all(st["verdict"] == "PASS" for st in stages) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apweights",
        description="A_p analysis of polynomial symbols, shift certificates, "
        "and the conjugated spectral solve on the torus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser):
        p.add_argument("--out", help="output path (directory for solve/example)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=0)

    pa = sub.add_parser("analyze", help="critical exponent and sup A_p quotient of a weight")
    pa.add_argument("--weight", help="weight description file")
    pa.add_argument("--poly", help="polynomial file (analyzed as |P|)")
    pa.add_argument("--p", type=float, help="report the sup quotient at this exponent")
    pa.add_argument("--nodes", type=int, help="quadrature nodes per axis")
    add_common(pa)
    pa.set_defaults(func=cmd_analyze)

    ps = sub.add_parser("shift", help="search Q0 for a small-divisor-avoiding shift")
    ps.add_argument("--poly", required=True)
    ps.add_argument("--p", type=float, required=True)
    ps.add_argument("--window", type=int, default=50, help="lattice window |m|_inf <= M")
    ps.add_argument("--nodes", type=int, help="scan resolution per axis (default 64)")
    add_common(ps)
    ps.set_defaults(func=cmd_shift)

    for name, fn in (("solve", cmd_solve), ("verify", cmd_verify)):
        pv = sub.add_parser(name, help=f"{name} the conjugated equation against a certificate")
        pv.add_argument("--poly", required=True)
        pv.add_argument("--cert", required=True, help="shift certificate file")
        pv.add_argument("--grid", required=True, help="right-hand side grid function file")
        pv.add_argument("--rho", default=DEFAULT_RHO, help="comma-separated Sobolev indices")
        if name == "verify":
            pv.add_argument("--solution", help="persisted solution grid to check")
        add_common(pv)
        pv.set_defaults(func=fn)

    pe = sub.add_parser("example", help="reproduce the worked example end to end")
    pe.add_argument("--powers", default="1", help="per-axis monomial powers, e.g. 2,2")
    pe.add_argument("--window", type=int, default=50)
    pe.add_argument("--nodes", type=int)
    pe.add_argument("--rho", default=DEFAULT_RHO)
    add_common(pe)
    pe.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve" and not args.out:
        print("solve requires --out DIR for the solution grid and report", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except NeverFinite as exc:
        print(f"never finite: {exc}", file=sys.stderr)
        return 3
    except AllShiftsBad as exc:
        print(f"no usable shift: {exc}", file=sys.stderr)
        return 4
    except SmallDivisorBreach as exc:
        print(f"small divisor breach: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
