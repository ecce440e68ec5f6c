"""Timing comparison of the compiled and pure-numpy kernel backends.

Run:  python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from apweights import kernels
from apweights.poly import Polynomial
from apweights.shift import LatticeWindow


def _axes(cube_half: float, nodes: int, dim: int):
    step = 2.0 * cube_half / nodes
    ax = -cube_half + step * (np.arange(nodes) + 0.5)
    pad = np.zeros((dim, nodes))
    for d in range(dim):
        pad[d] = ax
    return pad, np.full(dim, nodes, dtype=np.int64)


def bench_poly_moments_small(impl):
    # the workhorse shape: one cube of the 1-d bisection loop
    P = Polynomial.monomial(1, (2,))
    alphas, coeffs = P.coefficient_arrays()
    axes_pad, sizes = _axes(1.0, 64, 1)
    exps = np.array([1.0, -0.4])

    def fn():
        for _ in range(200):
            impl(coeffs, alphas, axes_pad, sizes, exps)

    return fn


def bench_poly_moments_large(impl):
    P = Polynomial.monomial(2, (2, 2))
    alphas, coeffs = P.coefficient_arrays()
    axes_pad, sizes = _axes(1.0, 512, 2)
    exps = np.array([1.0, -0.4])
    return lambda: impl(coeffs, alphas, axes_pad, sizes, exps)


def bench_power_moments(impl):
    axes_pad, sizes = _axes(1.0, 128, 1)
    exps = np.array([2.0, -0.8])

    def fn():
        for _ in range(200):
            impl(axes_pad, sizes, exps)

    return fn


def bench_eq9_scan(impl):
    P = Polynomial.monomial(1, (2,))
    alphas, coeffs = P.coefficient_arrays()
    cands = np.linspace(-0.5, 0.5, 2048).reshape(-1, 1)
    mvecs = LatticeWindow(100).points(1).astype(np.float64)
    wfac = (1.0 + np.abs(mvecs[:, 0])) ** -3.5
    return lambda: impl(coeffs, alphas, cands, mvecs, wfac, 1.0 / 2.5, 3.5)


BENCHES = {
    "poly_moments x200": bench_poly_moments_small,
    "poly_moments big": bench_poly_moments_large,
    "power_moments x200": bench_power_moments,
    "eq9_scan": bench_eq9_scan,
}


def _best_of(fn, repeat: int) -> float:
    fn()  # warm-up covers jit compilation
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_end_to_end(backend: str):
    from apweights import set_backend
    from apweights.weights import Weight, critical_exponent, dyadic_family

    set_backend(backend)
    w = Weight.power(2.0, 1)
    fam = dyadic_family(1)
    return lambda: critical_exponent(w, fam)


def _row(name, tn, tb):
    speed = f"{tn / tb:.1f}x" if tn and tb else "n/a"

    def fmt(t):
        return f"{t * 1e3:9.2f} ms" if t else "      n/a"

    print(f"{name:<20}{fmt(tn):>12}{fmt(tb):>12}{speed:>10}")


def run(repeat: int):
    print(f"{'workload':<20}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    kernel_name = {
        "poly_moments x200": "poly_moments",
        "poly_moments big": "poly_moments",
        "power_moments x200": "power_moments",
        "eq9_scan": "eq9_scan",
    }
    for name, setup in BENCHES.items():
        times = {}
        for backend in ("numpy", "numba"):
            try:
                mod = kernels.get_impl(backend)
            except ImportError:
                times[backend] = None
                continue
            times[backend] = _best_of(setup(getattr(mod, kernel_name[name])), repeat)
        _row(name, times["numpy"], times["numba"])
    times = {}
    for backend in ("numpy", "numba"):
        try:
            times[backend] = _best_of(bench_end_to_end(backend), repeat)
        except ImportError:
            times[backend] = None
    _row("critical_exponent", times["numpy"], times["numba"])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    run(args.repeat)


if __name__ == "__main__":
    main()
