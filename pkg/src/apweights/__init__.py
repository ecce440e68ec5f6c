"""Numerical toolkit for Muckenhoupt A_p analysis of polynomial symbols,
small-divisor-avoiding shift certificates, and Fourier-multiplier solving
of the conjugated constant-coefficient equation on the torus."""

from .errors import (
    AllShiftsBad,
    ApweightsError,
    DimensionMismatch,
    NeverFinite,
    NotContained,
    ParseError,
    SmallDivisorBreach,
    WrongDomainTag,
    ZeroDivisor,
    ZeroInfimum,
    ZeroMass,
)
from .kernels import backend, set_backend
from .poly import (
    Polynomial,
    check_rh_uniformity,
    eval_poly,
    eval_poly_points,
    poly_rh_constant,
    translate_dilate,
)
from .shift import (
    LatticeWindow,
    ShiftCertificate,
    eq9_constant,
    find_shift,
    good_shift_fraction,
    is_window_limited,
    lattice_sum,
    recheck_certificate,
)
from .torus import (
    FREQUENCY,
    PHYSICAL,
    GridFunction,
    SolveReport,
    apply_conjugated,
    apriori_constant,
    modewise_margin,
    sobolev_norm,
    solve_conjugated,
    to_frequency,
    to_physical,
    verify_estimate,
)
from .weights import (
    BLOWUP_CAP,
    ApReport,
    Cube,
    QuadratureSpec,
    Weight,
    a1_quotient,
    ap_quotient,
    centered_family,
    critical_exponent,
    decay_integral,
    default_nodes,
    default_quadrature,
    doubling_quotient,
    dual_weight,
    dyadic_family,
    reverse_holder_quotient,
    sup_ap_quotient,
)

__version__ = "0.1.0"

__all__ = [
    "AllShiftsBad",
    "ApReport",
    "ApweightsError",
    "BLOWUP_CAP",
    "Cube",
    "DimensionMismatch",
    "FREQUENCY",
    "GridFunction",
    "LatticeWindow",
    "NeverFinite",
    "NotContained",
    "PHYSICAL",
    "ParseError",
    "Polynomial",
    "QuadratureSpec",
    "ShiftCertificate",
    "SmallDivisorBreach",
    "SolveReport",
    "Weight",
    "WrongDomainTag",
    "ZeroDivisor",
    "ZeroInfimum",
    "ZeroMass",
    "a1_quotient",
    "ap_quotient",
    "apply_conjugated",
    "apriori_constant",
    "backend",
    "centered_family",
    "check_rh_uniformity",
    "critical_exponent",
    "decay_integral",
    "default_nodes",
    "default_quadrature",
    "doubling_quotient",
    "dual_weight",
    "dyadic_family",
    "eq9_constant",
    "eval_poly",
    "eval_poly_points",
    "find_shift",
    "good_shift_fraction",
    "is_window_limited",
    "lattice_sum",
    "modewise_margin",
    "poly_rh_constant",
    "recheck_certificate",
    "reverse_holder_quotient",
    "set_backend",
    "sobolev_norm",
    "solve_conjugated",
    "sup_ap_quotient",
    "to_frequency",
    "to_physical",
    "translate_dilate",
    "verify_estimate",
]
