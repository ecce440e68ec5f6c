"""Pure-numpy kernel implementations.

Same call signatures as the numba twins in _kernels_numba; array in,
array out, no package types. Tensor grids are never materialized beyond
a bounded chunk of points.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 22


def _mesh_chunks(axes_pad: np.ndarray, sizes: np.ndarray):
    """Yield (k, n) point chunks of the tensor grid spanned by the axes."""
    n = sizes.size
    axes = [axes_pad[d, : sizes[d]] for d in range(n)]
    total = int(np.prod(sizes))
    if total <= _CHUNK or n == 1:
        grids = np.meshgrid(*axes, indexing="ij")
        yield np.stack([g.ravel() for g in grids], axis=1)
        return
    rest = total // int(sizes[0])
    block = max(1, _CHUNK // rest)
    for i0 in range(0, int(sizes[0]), block):
        grids = np.meshgrid(axes[0][i0 : i0 + block], *axes[1:], indexing="ij")
        yield np.stack([g.ravel() for g in grids], axis=1)


def _eval_terms(coeffs: np.ndarray, alphas: np.ndarray, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(pts.shape[0], dtype=np.complex128)
    for t in range(coeffs.size):
        mono = np.ones(pts.shape[0])
        for d in range(alphas.shape[1]):
            a = alphas[t, d]
            if a:
                mono = mono * pts[:, d] ** a
        out += coeffs[t] * mono
    return out


def _accumulate(base: np.ndarray, exps: np.ndarray, sums: np.ndarray):
    pos = base > 0.0
    zeros = int(base.size - np.count_nonzero(pos))
    bp = base[pos] if zeros else base
    for j, e in enumerate(exps):
        sums[j] += float(np.sum(bp**e))
    return zeros


def poly_moments(coeffs, alphas, axes_pad, sizes, exps):
    """Moments of |P| on a tensor grid.

    Returns (sums[j] = sum over grid of |P(x)|^exps[j] skipping zeros,
    min |P|, max |P|, zero count).
    """
    sums = np.zeros(exps.size)
    bmin, bmax, zeros = np.inf, 0.0, 0
    for pts in _mesh_chunks(axes_pad, sizes):
        base = np.abs(_eval_terms(coeffs, alphas, pts))
        zeros += _accumulate(base, exps, sums)
        bmin = min(bmin, float(base.min()))
        bmax = max(bmax, float(base.max()))
    return sums, bmin, bmax, zeros


def power_moments(axes_pad, sizes, exps):
    """Same as poly_moments with base |x| (Euclidean norm of the grid point)."""
    sums = np.zeros(exps.size)
    bmin, bmax, zeros = np.inf, 0.0, 0
    for pts in _mesh_chunks(axes_pad, sizes):
        base = np.sqrt(np.sum(pts * pts, axis=1))
        zeros += _accumulate(base, exps, sums)
        bmin = min(bmin, float(base.min()))
        bmax = max(bmax, float(base.max()))
    return sums, bmin, bmax, zeros


def eq9_scan(coeffs, alphas, cands, mvecs, wfac, inv_pm1, npprime):
    """Fused lattice-window scan for a batch of shift candidates.

    For each candidate xi0: over all window points m,
      term(m)  = |P(xi0+m)|^(-inv_pm1)
      c9       = max_m term(m) * wfac(m)          with wfac = (1+|m|)^(-npprime)
      lsum     = sum_m term(m) * (1+|xi0+m|)^(-npprime)
      mindiv   = min_m |P(xi0+m)|
    A zero divisor makes c9 and lsum +inf for that candidate; argmax then
    points at the zero.
    """
    k, n = cands.shape
    w = mvecs.shape[0]
    c9 = np.empty(k)
    arg = np.empty(k, dtype=np.int64)
    mindiv = np.empty(k)
    lsum = np.empty(k)
    block = max(1, _CHUNK // max(1, w))
    for i0 in range(0, k, block):
        pts = cands[i0 : i0 + block, None, :] + mvecs[None, :, :]
        vals = np.abs(_eval_terms(coeffs, alphas, pts.reshape(-1, n))).reshape(-1, w)
        with np.errstate(divide="ignore"):
            term = vals ** (-inv_pm1)
        scaled = term * wfac[None, :]
        c9[i0 : i0 + block] = scaled.max(axis=1)
        arg[i0 : i0 + block] = scaled.argmax(axis=1)
        mindiv[i0 : i0 + block] = vals.min(axis=1)
        shifted = (1.0 + np.sqrt(np.sum(pts * pts, axis=2))) ** (-npprime)
        lsum[i0 : i0 + block] = np.sum(term * shifted, axis=1)
    return c9, arg, mindiv, lsum
