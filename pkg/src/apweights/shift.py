"""Shift selection in the unit cube Q0 = [-1/2, 1/2]^n.

A shift xi0 avoids small divisors when |P(xi0+m)|^{-1/(p-1)} stays below
C*(1+|m|)^{np'} over the lattice. The certificate records the smallest
such C realized on a truncated window together with a recheck on a larger
window that bounds the truncation risk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import AllShiftsBad, DimensionMismatch, ZeroDivisor
from .poly import Polynomial


@dataclass(frozen=True)
class LatticeWindow:
    """All lattice points m with |m|_inf <= M."""

    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("window radius M must be >= 1")

    def points(self, dim: int) -> np.ndarray:
        axis = np.arange(-self.M, self.M + 1, dtype=np.int64)
        grids = np.meshgrid(*([axis] * dim), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)


@dataclass(frozen=True)
class ShiftCertificate:
    """Witness that Eq-style bound |P(xi0+m)|^{-1/(p-1)} <= C9*(1+|m|)^{np'}
    holds on the window |m|_inf <= M, with the constant realized (tight at
    some window point). recheck_C9 is the same constant on the recheck
    window; a materially larger value means the certificate was
    window-limited."""

    xi0: tuple[float, ...]
    p: float
    window: LatticeWindow
    C9: float
    lattice_sum: float
    min_divisor: float
    recheck_M: int
    recheck_C9: float
    poly: Polynomial | None = None

    def __post_init__(self):
        object.__setattr__(self, "xi0", tuple(float(c) for c in self.xi0))
        if any(abs(c) > 0.5 + 1e-12 for c in self.xi0):
            raise ValueError(f"xi0 = {self.xi0} lies outside Q0 = [-1/2, 1/2]^n")
        if self.p <= 1:
            raise ValueError("certificate requires p > 1")

    @property
    def pprime(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def dim(self) -> int:
        return len(self.xi0)


def _window(M) -> LatticeWindow:
    return M if isinstance(M, LatticeWindow) else LatticeWindow(int(M))


def _scan(P: Polynomial, p: float, cands: np.ndarray, M: LatticeWindow):
    """Kernel scan over candidates x window; returns (c9, argmax, mindiv, lsum)."""
    n = P.dim
    mvecs = M.points(n).astype(np.float64)
    npprime = n * p / (p - 1.0)
    wfac = (1.0 + np.sqrt(np.sum(mvecs * mvecs, axis=1))) ** (-npprime)
    alphas, coeffs = P.coefficient_arrays()
    return kernels.eq9_scan(
        coeffs,
        alphas,
        np.ascontiguousarray(cands, dtype=np.float64),
        mvecs,
        wfac,
        1.0 / (p - 1.0),
        npprime,
    )


def _check_inputs(P: Polynomial, p: float, xi0) -> np.ndarray:
    if p <= 1:
        raise ValueError("requires p > 1")
    xi0 = np.asarray(xi0, dtype=np.float64).reshape(-1)
    if xi0.size != P.dim:
        raise DimensionMismatch(f"shift has dim {xi0.size}, polynomial has dim {P.dim}")
    return xi0


def lattice_sum(P: Polynomial, p: float, xi0, M) -> float:
    """sum over |m|_inf <= M of |P(xi0+m)|^{-1/(p-1)} (1+|xi0+m|)^{-np'}.

    A zero divisor makes the sum +inf in band.
    """
    xi0 = _check_inputs(P, p, xi0)
    _, _, _, lsum = _scan(P, p, xi0.reshape(1, -1), _window(M))
    return float(lsum[0])


def eq9_constant(P: Polynomial, p: float, xi0, M) -> float:
    """Smallest C valid on the window:
    max over |m|_inf <= M of |P(xi0+m)|^{-1/(p-1)} (1+|m|)^{-np'}."""
    xi0 = _check_inputs(P, p, xi0)
    M = _window(M)
    c9, arg, mindiv, _ = _scan(P, p, xi0.reshape(1, -1), M)
    if mindiv[0] == 0.0:
        raise ZeroDivisor(xi0, M.points(P.dim)[int(arg[0])])
    return float(c9[0])


def _jittered_candidates(dim: int, grid: int, seed: int) -> np.ndarray:
    """One jittered point per cell of the uniform grid over Q0, in
    lexicographic row order."""
    rng = np.random.default_rng(seed)
    jitter = rng.random((dim, grid))
    axes = [(-0.5 + (np.arange(grid) + jitter[d]) / grid) for d in range(dim)]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _polish(P: Polynomial, p: float, M: LatticeWindow, x0: np.ndarray, c0: float, step: float):
    """Deterministic compass descent of the realized constant, clamped to Q0.

    Only strictly improving moves are taken, so flat landscapes (constant
    symbols) stay put and the grid tie-break survives.
    """
    cur, cur_c9 = x0.copy(), c0
    n = cur.size
    while step > 1e-10:
        moved = False
        for d in range(n):
            for sgn in (1.0, -1.0):
                cand = cur.copy()
                cand[d] = min(0.5, max(-0.5, cand[d] + sgn * step))
                if cand[d] == cur[d]:
                    continue
                c9 = float(_scan(P, p, cand.reshape(1, -1), M)[0][0])
                if c9 < cur_c9:
                    cur, cur_c9 = cand, c9
                    moved = True
        if not moved:
            step *= 0.5
    return cur, cur_c9


def find_shift(P: Polynomial, p: float, M, grid: int = 64, seed: int = 0) -> ShiftCertificate:
    """Minimize the realized window constant over a jittered grid of Q0,
    then refine the winner by compass descent. Deterministic for a fixed
    seed; grid ties break to the lexicographically smallest candidate.
    The recheck at 2M is performed before the certificate is emitted."""
    if grid < 8:
        raise ValueError("grid resolution must be >= 8 per axis")
    M = _window(M)
    cands = _jittered_candidates(P.dim, grid, seed)
    c9s, _, _, _ = _scan(P, p, cands, M)
    best = int(np.argmin(c9s))
    if not math.isfinite(c9s[best]):
        raise AllShiftsBad(f"all {cands.shape[0]} candidates hit a zero divisor (window M={M.M})")
    xi0, _ = _polish(P, p, M, cands[best], float(c9s[best]), 1.0 / grid)
    c9, _, mindiv, lsum = (arr[0] for arr in _scan(P, p, xi0.reshape(1, -1), M))
    try:
        recheck = eq9_constant(P, p, xi0, LatticeWindow(2 * M.M))
    except ZeroDivisor:
        recheck = math.inf
    return ShiftCertificate(
        xi0=tuple(xi0),
        p=float(p),
        window=M,
        C9=float(c9),
        lattice_sum=float(lsum),
        min_divisor=float(mindiv),
        recheck_M=2 * M.M,
        recheck_C9=float(recheck),
        poly=P,
    )


def recheck_certificate(cert: ShiftCertificate, M2) -> float:
    """Realized constant of the certificate's shift on a larger window."""
    M2 = _window(M2)
    if M2.M <= cert.window.M:
        raise ValueError(f"recheck window {M2.M} must exceed the certificate window {cert.window.M}")
    if cert.poly is None:
        raise ValueError("certificate carries no polynomial; attach one when loading")
    return eq9_constant(cert.poly, cert.p, cert.xi0, M2)


def is_window_limited(cert: ShiftCertificate, rechecked_C9: float, rtol: float = 1e-9) -> bool:
    """True when a recheck constant exceeds the certified one materially,
    i.e. the certified window missed the lattice maximizer."""
    return rechecked_C9 > cert.C9 * (1.0 + rtol)


def good_shift_fraction(
    P: Polynomial, p: float, M, threshold: float, samples: int, seed: int = 0
) -> float:
    """Fraction of uniform random shifts in Q0 whose realized window
    constant is at most the threshold."""
    if samples < 100:
        raise ValueError("samples must be >= 100")
    if p <= 1:
        raise ValueError("requires p > 1")
    M = _window(M)
    rng = np.random.default_rng(seed)
    cands = rng.uniform(-0.5, 0.5, size=(samples, P.dim))
    c9s, _, _, _ = _scan(P, p, cands, M)
    return float(np.count_nonzero(c9s <= threshold)) / samples
