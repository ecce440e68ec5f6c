"""Numba-jitted kernel implementations.

Signature-compatible with _kernels_numpy. Serial loops with fused
accumulation: no tensor grid is materialized, reductions are in a fixed
order, so results are deterministic and match the numpy path to rounding.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, error_model="numpy")
def _eval_point(coeffs, alphas, x):
    z = 0.0 + 0.0j
    for t in range(coeffs.size):
        mono = 1.0
        for d in range(alphas.shape[1]):
            a = alphas[t, d]
            for _ in range(a):
                mono *= x[d]
        z += coeffs[t] * mono
    return z


@njit(cache=True, error_model="numpy")
def poly_moments(coeffs, alphas, axes_pad, sizes, exps):
    n = sizes.size
    total = 1
    for d in range(n):
        total *= sizes[d]
    sums = np.zeros(exps.size)
    bmin = np.inf
    bmax = 0.0
    zeros = 0
    x = np.empty(n)
    for flat in range(total):
        idx = flat
        for d in range(n - 1, -1, -1):
            x[d] = axes_pad[d, idx % sizes[d]]
            idx //= sizes[d]
        base = abs(_eval_point(coeffs, alphas, x))
        if base > 0.0:
            for j in range(exps.size):
                sums[j] += base ** exps[j]
        else:
            zeros += 1
        if base < bmin:
            bmin = base
        if base > bmax:
            bmax = base
    return sums, bmin, bmax, zeros


@njit(cache=True, error_model="numpy")
def power_moments(axes_pad, sizes, exps):
    n = sizes.size
    total = 1
    for d in range(n):
        total *= sizes[d]
    sums = np.zeros(exps.size)
    bmin = np.inf
    bmax = 0.0
    zeros = 0
    for flat in range(total):
        idx = flat
        s2 = 0.0
        for d in range(n - 1, -1, -1):
            xd = axes_pad[d, idx % sizes[d]]
            idx //= sizes[d]
            s2 += xd * xd
        base = np.sqrt(s2)
        if base > 0.0:
            for j in range(exps.size):
                sums[j] += base ** exps[j]
        else:
            zeros += 1
        if base < bmin:
            bmin = base
        if base > bmax:
            bmax = base
    return sums, bmin, bmax, zeros


@njit(cache=True, error_model="numpy")
def eq9_scan(coeffs, alphas, cands, mvecs, wfac, inv_pm1, npprime):
    k, n = cands.shape
    w = mvecs.shape[0]
    c9 = np.empty(k)
    arg = np.empty(k, dtype=np.int64)
    mindiv = np.empty(k)
    lsum = np.empty(k)
    x = np.empty(n)
    for i in range(k):
        best = -1.0
        besti = 0
        mind = np.inf
        s = 0.0
        for j in range(w):
            s2 = 0.0
            for d in range(n):
                x[d] = cands[i, d] + mvecs[j, d]
                s2 += x[d] * x[d]
            val = abs(_eval_point(coeffs, alphas, x))
            term = val ** (-inv_pm1)
            scaled = term * wfac[j]
            if scaled > best:
                best = scaled
                besti = j
            if val < mind:
                mind = val
            s += term * (1.0 + np.sqrt(s2)) ** (-npprime)
        c9[i] = best
        arg[i] = besti
        mindiv[i] = mind
        lsum[i] = s
    return c9, arg, mindiv, lsum
