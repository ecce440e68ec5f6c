"""Muckenhoupt-type quotients of weights over cube families.

Weights are nonnegative evaluable functions: |P(xi)|^e for a polynomial P,
|x|^alpha, positive constants, and finite products of those. Averages are
tensor midpoint quadrature means over axis-parallel cubes.

Blow-up is an answer, not an error: every quotient estimator returns
math.inf in band when the discrete quotient is non-finite, exceeds the
blow-up cap, or fails the node-doubling stability check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    NeverFinite,
    NotContained,
    ZeroInfimum,
    ZeroMass,
)
from .poly import Polynomial, eval_poly_points

# quotients beyond this are reported as +inf (non-integrable duals grow
# without bound under refinement; finite weights never get near it)
BLOWUP_CAP = 1e8

# relative change of a discrete average under node doubling below which
# the average counts as converged
STABILITY_RTOL = 0.1

_DEFAULT_NODES = {1: 64, 2: 32, 3: 12}
_DEFAULT_CENTER_STEPS = {1: 16, 2: 4, 3: 2}


def default_nodes(dim: int) -> int:
    if dim not in _DEFAULT_NODES:
        raise ValueError(f"quadrature-based analysis supports n <= 3, got n = {dim}")
    return _DEFAULT_NODES[dim]


@dataclass(frozen=True)
class QuadratureSpec:
    nodes_per_axis: int
    rule: str = "midpoint"

    def __post_init__(self):
        if self.nodes_per_axis < 2:
            raise ValueError("nodes_per_axis must be >= 2")
        if self.rule != "midpoint":
            raise ValueError(f"unknown quadrature rule {self.rule!r}")


def default_quadrature(dim: int) -> QuadratureSpec:
    return QuadratureSpec(default_nodes(dim))


@dataclass(frozen=True)
class Cube:
    """Axis-parallel cube: center and half of the edge length."""

    center: tuple[float, ...]
    halfwidth: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if self.halfwidth <= 0:
            raise ValueError("halfwidth must be > 0")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def volume(self) -> float:
        return (2.0 * self.halfwidth) ** self.dim

    def contains(self, other: "Cube", rtol: float = 1e-12) -> bool:
        if other.dim != self.dim:
            raise DimensionMismatch("cubes have different dimensions")
        slack = rtol * max(1.0, self.halfwidth)
        return all(
            abs(co - cs) + other.halfwidth <= self.halfwidth + slack
            for co, cs in zip(other.center, self.center)
        )


@dataclass(frozen=True)
class Weight:
    """One of |P|^e, |x|^alpha, a positive constant, or a product of weights."""

    kind: str
    dim: int
    alpha: float | None = None
    c: float | None = None
    poly: Polynomial | None = None
    exponent: float = 1.0
    factors: tuple["Weight", ...] = ()

    @classmethod
    def power(cls, alpha: float, dim: int = 1) -> "Weight":
        return cls(kind="power", dim=dim, alpha=float(alpha))

    @classmethod
    def constant(cls, c: float, dim: int = 1) -> "Weight":
        if not (c > 0):
            raise ValueError("constant weight requires c > 0")
        return cls(kind="constant", dim=dim, c=float(c))

    @classmethod
    def polymod(cls, poly: Polynomial, exponent: float = 1.0) -> "Weight":
        return cls(kind="polymod", dim=poly.dim, poly=poly, exponent=float(exponent))

    @classmethod
    def product(cls, *factors: "Weight") -> "Weight":
        if len(factors) == 1 and not isinstance(factors[0], Weight):
            factors = tuple(factors[0])
        if not factors:
            raise ValueError("product weight needs at least one factor")
        dims = {f.dim for f in factors}
        if len(dims) != 1:
            raise DimensionMismatch(f"product factors have mixed dimensions {sorted(dims)}")
        return cls(kind="product", dim=factors[0].dim, factors=tuple(factors))

    def eval(self, pts) -> np.ndarray:
        """Weight values at pts of shape (k, n); poles evaluate to +inf."""
        pts = np.asarray(pts, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if self.dim == 1 else pts.reshape(1, -1)
        if pts.shape[1] != self.dim:
            raise DimensionMismatch(f"points have dim {pts.shape[1]}, weight has dim {self.dim}")
        if self.kind == "constant":
            return np.full(pts.shape[0], self.c)
        if self.kind == "power":
            base = np.sqrt(np.sum(pts * pts, axis=1))
            with np.errstate(divide="ignore"):
                return base**self.alpha
        if self.kind == "polymod":
            base = np.abs(eval_poly_points(self.poly, pts))
            with np.errstate(divide="ignore"):
                return base**self.exponent
        vals = np.ones(pts.shape[0])
        for f in self.factors:
            vals = vals * f.eval(pts)
        return vals


@dataclass(frozen=True)
class ApReport:
    p: float
    sup_quotient: float
    worst_cube: Cube
    cubes_examined: int
    quadrature: QuadratureSpec


def _xpow(b: float, e: float) -> float:
    if e == 0.0:
        return 1.0
    if b == 0.0:
        return math.inf if e < 0 else 0.0
    if math.isinf(b):
        return 0.0 if e < 0 else math.inf
    return b**e


def _axes_arrays(cube: Cube, nodes: int):
    base = (2.0 * np.arange(nodes) + 1.0 - nodes) / nodes * cube.halfwidth
    pad = np.stack([c + base for c in cube.center])
    sizes = np.full(cube.dim, nodes, dtype=np.int64)
    return pad, sizes


def _cube_stats(w: Weight, cube: Cube, nodes: int, exps: tuple[float, ...]):
    """Midpoint means of w^e over the cube for each e, plus node min/max of w."""
    if w.dim != cube.dim:
        raise DimensionMismatch(f"weight dim {w.dim} vs cube dim {cube.dim}")
    if w.kind == "constant":
        return [_xpow(w.c, e) for e in exps], w.c, w.c

    if w.kind in ("power", "polymod"):
        meta = w.alpha if w.kind == "power" else w.exponent
        eff = np.array([meta * e for e in exps])
        pad, sizes = _axes_arrays(cube, nodes)
        if w.kind == "power":
            sums, bmin, bmax, zeros = kernels.power_moments(pad, sizes, eff)
        else:
            coeffs_alphas = w.poly.coefficient_arrays()
            sums, bmin, bmax, zeros = kernels.poly_moments(
                coeffs_alphas[1], coeffs_alphas[0], pad, sizes, eff
            )
        total = nodes**cube.dim
        means = []
        for s, e in zip(sums, eff):
            if e == 0.0:
                means.append(1.0)
            elif zeros > 0 and e < 0:
                means.append(math.inf)
            else:
                means.append(float(s) / total)
        lo, hi = _xpow(bmin, meta), _xpow(bmax, meta)
        if lo > hi:
            lo, hi = hi, lo
        return means, lo, hi

    # product (or any future evaluable family): generic chunked mesh path
    pad, sizes = _axes_arrays(cube, nodes)
    from ._kernels_numpy import _mesh_chunks

    total = nodes**cube.dim
    sums = np.zeros(len(exps))
    vmin, vmax = math.inf, 0.0
    for pts in _mesh_chunks(pad, sizes):
        vals = w.eval(pts)
        with np.errstate(divide="ignore", invalid="ignore"):
            for j, e in enumerate(exps):
                sums[j] += float(np.sum(_xpow_array(vals, e)))
        vmin = min(vmin, float(vals.min()))
        vmax = max(vmax, float(vals.max()))
    means = [float(s) / total for s in sums]
    return means, vmin, vmax


def _xpow_array(vals: np.ndarray, e: float) -> np.ndarray:
    if e == 0.0:
        return np.ones_like(vals)
    with np.errstate(divide="ignore"):
        out = vals**e
    if e < 0:
        out = np.where(np.isinf(vals), 0.0, out)
    return out


def _resolve_quadrature(w: Weight, q: QuadratureSpec | None) -> QuadratureSpec:
    return q if q is not None else default_quadrature(w.dim)


def ap_quotient(w: Weight, B: Cube, p: float, q: QuadratureSpec | None = None) -> float:
    """(avg_B w) * (avg_B w^{-1/(p-1)})^{p-1} with midpoint averages.

    Returns +inf in band when either average is non-finite or degenerate
    at quadrature scale; never raises for blow-up.
    """
    if p <= 1:
        raise ValueError("ap_quotient requires p > 1")
    q = _resolve_quadrature(w, q)
    (mw, md), _, _ = _cube_stats(w, B, q.nodes_per_axis, (1.0, -1.0 / (p - 1.0)))
    if not (math.isfinite(mw) and math.isfinite(md)) or mw == 0.0 or md == 0.0:
        return math.inf
    return mw * md ** (p - 1.0)


def a1_quotient(w: Weight, B: Cube, q: QuadratureSpec | None = None) -> float:
    """(avg_B w) / (min over nodes of w); +inf beyond the blow-up cap."""
    q = _resolve_quadrature(w, q)
    (mw,), vmin, _ = _cube_stats(w, B, q.nodes_per_axis, (1.0,))
    if vmin == 0.0:
        raise ZeroInfimum(f"weight vanishes at a quadrature node of cube {B}")
    if not math.isfinite(mw) or not math.isfinite(vmin):
        return math.inf
    ratio = mw / vmin
    return math.inf if ratio > BLOWUP_CAP else ratio


def _quotient_with_means(w: Weight, B: Cube, p: float, nodes: int):
    (mw, md), _, _ = _cube_stats(w, B, nodes, (1.0, -1.0 / (p - 1.0)))
    if not (math.isfinite(mw) and math.isfinite(md)) or mw == 0.0 or md == 0.0:
        return math.inf, mw, md
    return mw * md ** (p - 1.0), mw, md


def _stable_quotient(w: Weight, B: Cube, p: float, nodes: int) -> float:
    """Quotient at the requested resolution, or +inf if the constituent
    averages have not converged under node doubling (or the cap is hit)."""
    q1, mw1, md1 = _quotient_with_means(w, B, p, nodes)
    q2, mw2, md2 = _quotient_with_means(w, B, p, 2 * nodes)
    if not (math.isfinite(q1) and math.isfinite(q2)):
        return math.inf
    if q1 > BLOWUP_CAP or q2 > BLOWUP_CAP:
        return math.inf
    if abs(mw2 - mw1) / mw1 >= STABILITY_RTOL or abs(md2 - md1) / md1 >= STABILITY_RTOL:
        return math.inf
    return q1


def sup_ap_quotient(
    w: Weight,
    family,
    p: float,
    q: QuadratureSpec | None = None,
    check_stability: bool = True,
) -> ApReport:
    """Max A_p quotient over a finite cube family.

    With check_stability (the default), each cube's quotient is replaced by
    +inf unless both discrete averages are converged under node doubling;
    this is what lets a below-critical p report the blow-up flag instead of
    a meaningless finite number.
    """
    if p <= 1:
        raise ValueError("sup_ap_quotient requires p > 1")
    family = list(family)
    if not family:
        raise ValueError("cube family must be nonempty")
    q = _resolve_quadrature(w, q)
    best = -math.inf
    worst = family[0]
    for B in family:
        if check_stability:
            val = _stable_quotient(w, B, p, q.nodes_per_axis)
        else:
            val = ap_quotient(w, B, p, q)
        if val > best:
            best, worst = val, B
    return ApReport(
        p=float(p),
        sup_quotient=best,
        worst_cube=worst,
        cubes_examined=len(family),
        quadrature=q,
    )


def critical_exponent(
    w: Weight, family, q: QuadratureSpec | None = None, tol: float = 0.02
) -> float:
    """Bisection on p over [1, 64] for the smallest p with a finite, stable
    sup quotient. Returns the upper bisection endpoint (within tol of the
    transition), so constants land at about 1 + tol."""
    if tol <= 0:
        raise ValueError("tol must be > 0")
    family = list(family)
    q = _resolve_quadrature(w, q)

    def finite(p: float) -> bool:
        return math.isfinite(sup_ap_quotient(w, family, p, q).sup_quotient)

    lo, hi = 1.0, 64.0
    if not finite(hi):
        raise NeverFinite(f"sup quotient blows up even at p = {hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if finite(mid):
            hi = mid
        else:
            lo = mid
    return hi


def doubling_quotient(
    w: Weight, outer: Cube, inner: Cube, p: float, q: QuadratureSpec | None = None
) -> float:
    """(int_outer w) / ((s/t)^{np} int_inner w) for inner contained in outer,
    s and t the outer/inner halfwidths."""
    if w.dim != outer.dim or w.dim != inner.dim:
        raise DimensionMismatch("weight and cubes must share a dimension")
    if not outer.contains(inner):
        raise NotContained(f"{inner} is not contained in {outer}")
    q = _resolve_quadrature(w, q)
    (m_out,), _, _ = _cube_stats(w, outer, q.nodes_per_axis, (1.0,))
    (m_in,), _, _ = _cube_stats(w, inner, q.nodes_per_axis, (1.0,))
    if m_in == 0.0:
        raise ZeroMass("inner integral is zero at quadrature scale")
    if not (math.isfinite(m_out) and math.isfinite(m_in)):
        return math.inf
    ratio = (outer.halfwidth / inner.halfwidth) ** (w.dim * p)
    return (m_out * outer.volume) / (ratio * m_in * inner.volume)


def reverse_holder_quotient(
    w: Weight, B: Cube, r: float, q: QuadratureSpec | None = None
) -> float:
    """(avg_B w^r)^{1/r} / (avg_B w)."""
    if r <= 1:
        raise ValueError("reverse_holder_quotient requires r > 1")
    q = _resolve_quadrature(w, q)
    (mr, m1), _, _ = _cube_stats(w, B, q.nodes_per_axis, (float(r), 1.0))
    if m1 == 0.0:
        raise ZeroMass("weight averages to zero at quadrature scale")
    if not (math.isfinite(mr) and math.isfinite(m1)):
        return math.inf
    return mr ** (1.0 / r) / m1


def dual_weight(w: Weight, p: float) -> Weight:
    """Pointwise w^{-1/(p-1)}, kept inside the weight families in closed form."""
    if p <= 1:
        raise ValueError("dual_weight requires p > 1")
    e = -1.0 / (p - 1.0)
    if w.kind == "power":
        return Weight.power(w.alpha * e, w.dim)
    if w.kind == "constant":
        return Weight.constant(w.c**e, w.dim)
    if w.kind == "polymod":
        return Weight.polymod(w.poly, w.exponent * e)
    return Weight.product(*(dual_weight(f, p) for f in w.factors))


def _shell_boxes(dim: int, a: float, b: float):
    """Decompose {a <= |x|_inf <= b} into axis-parallel boxes, exactly."""
    segments = [(-b, -a), (-a, a), (a, b)]
    boxes = []
    for combo in np.ndindex(*(3,) * dim):
        if all(c == 1 for c in combo):
            continue
        boxes.append([segments[c] for c in combo])
    return boxes


def _box_integral(w: Weight, box, nodes: int, np_exp: float) -> float:
    """Midpoint integral of w(x) / (1 + |x|)^{np_exp} over a box of intervals."""
    axes = []
    vol = 1.0
    for lo, hi in box:
        width = hi - lo
        vol *= width
        k = np.arange(nodes)
        axes.append(lo + width * (2 * k + 1) / (2 * nodes))
    pad = np.stack(axes)
    sizes = np.full(len(box), nodes, dtype=np.int64)
    from ._kernels_numpy import _mesh_chunks

    total = nodes ** len(box)
    acc = 0.0
    for pts in _mesh_chunks(pad, sizes):
        vals = w.eval(pts)
        norms = np.sqrt(np.sum(pts * pts, axis=1))
        acc += float(np.sum(vals * (1.0 + norms) ** (-np_exp)))
    return acc / total * vol


def decay_integral(w: Weight, p: float, R: float, q: QuadratureSpec | None = None) -> float:
    """int_{|x|_inf <= R} w(x)/(1+|x|)^{np} dx by dyadic-shell summation.

    The core cube and each sup-norm shell are decomposed exactly into
    axis-parallel boxes, so no indicator function is ever sampled; |x| in
    the integrand is the Euclidean norm.
    """
    if R < 1:
        raise ValueError("decay_integral requires R >= 1")
    q = _resolve_quadrature(w, q)
    np_exp = w.dim * p
    total = _box_integral(w, [(-1.0, 1.0)] * w.dim, q.nodes_per_axis, np_exp)
    a = 1.0
    while a < R:
        b = min(2.0 * a, R)
        for box in _shell_boxes(w.dim, a, b):
            total += _box_integral(w, box, q.nodes_per_axis, np_exp)
        a = b
    return total


def dyadic_family(
    dim: int,
    kmax: int = 10,
    center_steps: int | None = None,
) -> list[Cube]:
    """Dyadic halfwidths 2^k, |k| <= kmax; centers j*halfwidth per axis for
    |j| <= center_steps. Covers scale extremes and the zero-set features
    (origin, coordinate hyperplanes) of the built-in families."""
    if center_steps is None:
        center_steps = _DEFAULT_CENTER_STEPS.get(dim, 1)
    offsets = range(-center_steps, center_steps + 1)
    cubes = []
    for k in range(-kmax, kmax + 1):
        h = 2.0**k
        for combo in sorted(np.ndindex(*(len(list(offsets)),) * dim)):
            js = [j - center_steps for j in combo]
            cubes.append(Cube(tuple(j * h for j in js), h))
    return cubes


def centered_family(dim: int, kmin: int = -8, kmax: int = 8) -> list[Cube]:
    """Origin-centered cubes with halfwidths 2^k, kmin <= k <= kmax."""
    return [Cube((0.0,) * dim, 2.0**k) for k in range(kmin, kmax + 1)]
