"""Multivariate polynomials P(xi) with complex coefficients.

A polynomial is a finite map from multi-indices to nonzero complex
coefficients. This is the symbol side of the toolkit: evaluation,
translate/dilate reparametrization, and the degree-indexed reverse
Holder constant on the unit cube.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch

MultiIndex = tuple[int, ...]


def _normalize_terms(dim: int, terms) -> dict[MultiIndex, complex]:
    out: dict[MultiIndex, complex] = {}
    for alpha, coeff in dict(terms).items():
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != dim:
            raise DimensionMismatch(f"multi-index {alpha} has length {len(alpha)}, expected {dim}")
        if any(a < 0 for a in alpha):
            raise ValueError(f"multi-index {alpha} has a negative entry")
        c = complex(coeff)
        if c != 0:
            out[alpha] = out.get(alpha, 0j) + c
    # summing duplicates can cancel back to zero
    return {a: c for a, c in out.items() if c != 0}


@dataclass(frozen=True)
class Polynomial:
    """P(xi) = sum over stored alpha of c_alpha * xi^alpha."""

    dim: int
    terms: dict[MultiIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        object.__setattr__(self, "terms", _normalize_terms(self.dim, self.terms))

    @property
    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(a) for a in self.terms)

    @classmethod
    def monomial(cls, dim: int, alpha, coeff=1.0) -> "Polynomial":
        return cls(dim, {tuple(alpha): coeff})

    @classmethod
    def separable_powers(cls, powers) -> "Polynomial":
        """prod_j xi_j^{m_j} for a list of per-axis powers."""
        powers = tuple(int(m) for m in powers)
        return cls(len(powers), {powers: 1.0})

    def coefficient_arrays(self):
        """(alphas int64 (t, n), coeffs complex128 (t,)) in sorted term order."""
        alphas = sorted(self.terms)
        a = np.array(alphas if alphas else np.empty((0, self.dim)), dtype=np.int64).reshape(
            len(alphas), self.dim
        )
        c = np.array([self.terms[al] for al in alphas], dtype=np.complex128)
        return a, c


def eval_poly(P: Polynomial, xi) -> complex:
    """Exact evaluation of P at a single real point."""
    xi = np.asarray(xi, dtype=np.float64).reshape(-1)
    if xi.size != P.dim:
        raise DimensionMismatch(f"point has dim {xi.size}, polynomial has dim {P.dim}")
    total = 0j
    for alpha, c in P.terms.items():
        mono = 1.0
        for x, a in zip(xi, alpha):
            if a:
                mono *= x**a
        total += c * mono
    return total


def eval_poly_points(P: Polynomial, pts: np.ndarray) -> np.ndarray:
    """Vectorized evaluation at pts of shape (k, n); returns complex128 (k,)."""
    pts = np.asarray(pts, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1) if P.dim == 1 else pts.reshape(1, -1)
    if pts.shape[1] != P.dim:
        raise DimensionMismatch(f"points have dim {pts.shape[1]}, polynomial has dim {P.dim}")
    out = np.zeros(pts.shape[0], dtype=np.complex128)
    for alpha, c in P.terms.items():
        mono = np.ones(pts.shape[0])
        for d, a in enumerate(alpha):
            if a:
                mono = mono * pts[:, d] ** a
        out += c * mono
    return out


def translate_dilate(P: Polynomial, delta: float, sigma0) -> Polynomial:
    """Q with Q(xi) = P(delta*xi + sigma0)."""
    if delta <= 0:
        raise ValueError("delta must be > 0")
    sigma0 = np.asarray(sigma0, dtype=np.float64).reshape(-1)
    if sigma0.size != P.dim:
        raise DimensionMismatch(f"shift has dim {sigma0.size}, polynomial has dim {P.dim}")
    out: dict[MultiIndex, complex] = {}
    for alpha, c in P.terms.items():
        # expand prod_j (delta*xi_j + sigma_j)^{a_j} one variable at a time
        partial: dict[MultiIndex, complex] = {(0,) * P.dim: c}
        for d, a in enumerate(alpha):
            if a == 0:
                continue
            grown: dict[MultiIndex, complex] = {}
            for beta, cb in partial.items():
                for k in range(a + 1):
                    coeff = cb * math.comb(a, k) * delta**k * sigma0[d] ** (a - k)
                    if coeff == 0:
                        continue
                    nb = list(beta)
                    nb[d] += k
                    nb = tuple(nb)
                    grown[nb] = grown.get(nb, 0j) + coeff
            partial = grown
        for beta, cb in partial.items():
            out[beta] = out.get(beta, 0j) + cb
    return Polynomial(P.dim, out)


def _multi_indices_up_to(dim: int, degree: int) -> list[MultiIndex]:
    if dim == 1:
        return [(a,) for a in range(degree + 1)]
    out = []
    for a in range(degree + 1):
        for rest in _multi_indices_up_to(dim - 1, degree - a):
            out.append((a,) + rest)
    return sorted(out)


def _unit_cube_nodes(dim: int, nodes_per_axis: int) -> np.ndarray:
    k = np.arange(nodes_per_axis)
    axis = (2 * k + 1 - nodes_per_axis) / nodes_per_axis
    grids = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _rh_quotients(vand: np.ndarray, coeffs: np.ndarray, r: float) -> np.ndarray:
    """Discrete RH quotients for a batch of coefficient columns."""
    vals = np.abs(vand @ coeffs)
    mean_r = np.mean(vals**r, axis=0) ** (1.0 / r)
    mean_1 = np.mean(vals, axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(mean_1 > 0, mean_r / mean_1, 0.0)
    return q


def poly_rh_constant(
    n: int, d: int, r: float, budget: int, seed: int = 0, nodes_per_axis: int | None = None
) -> float:
    """Empirical lower bound on C(n, d, r): the sup over degree-<=d polynomials
    of (avg |Q|^r)^{1/r} / avg |Q| on the centered unit cube.

    Samples `budget` coefficient vectors on the unit sphere of coefficient
    space (the quotient is 0-homogeneous), then refines the best one by a
    deterministic compass search on the sphere.
    """
    if budget < 100:
        raise ValueError("budget must be >= 100")
    if r <= 1:
        raise ValueError("r must be > 1")
    if d == 0:
        return 1.0
    if nodes_per_axis is None:
        from .weights import default_nodes

        nodes_per_axis = default_nodes(n)
    indices = _multi_indices_up_to(n, d)
    pts = _unit_cube_nodes(n, nodes_per_axis)
    vand = np.empty((pts.shape[0], len(indices)), dtype=np.float64)
    for j, alpha in enumerate(indices):
        mono = np.ones(pts.shape[0])
        for dd, a in enumerate(alpha):
            if a:
                mono = mono * pts[:, dd] ** a
        vand[:, j] = mono

    rng = np.random.default_rng(seed)
    best_q = 0.0
    best_c = None
    chunk = 512
    done = 0
    while done < budget:
        k = min(chunk, budget - done)
        raw = rng.standard_normal((len(indices), k)) + 1j * rng.standard_normal((len(indices), k))
        raw /= np.linalg.norm(raw, axis=0, keepdims=True)
        q = _rh_quotients(vand, raw, r)
        i = int(np.argmax(q))
        if q[i] > best_q:
            best_q = float(q[i])
            best_c = raw[:, i].copy()
        done += k

    # compass refinement over real/imaginary coefficient coordinates
    step = 0.25
    while step > 1e-7:
        moved = False
        for j in range(len(indices)):
            for delta in (step, -step, 1j * step, -1j * step):
                cand = best_c.copy()
                cand[j] += delta
                cand /= np.linalg.norm(cand)
                q = float(_rh_quotients(vand, cand.reshape(-1, 1), r)[0])
                if q > best_q:
                    best_q, best_c = q, cand
                    moved = True
        if not moved:
            step *= 0.5
    return best_q


def check_rh_uniformity(P: Polynomial, r: float, cubes, q=None) -> float:
    """Max reverse-Holder quotient of |P| over a cube family.

    Finite-dimensional norm equivalence says this is bounded independently
    of cube center and radius; the bound is poly_rh_constant(n, deg P, r).
    """
    from .weights import Weight, reverse_holder_quotient

    cubes = list(cubes)
    if not cubes:
        raise ValueError("cube family must be nonempty")
    w = Weight.polymod(P)
    return max(reverse_holder_quotient(w, B, r, q) for B in cubes)
