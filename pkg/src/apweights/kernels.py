"""Backend dispatch for the hot numerical kernels.

Two interchangeable implementations exist: a numba-jitted one and a pure
numpy one. Selection order:

  1. the APWEIGHTS_BACKEND environment variable ("numba", "numpy", "auto"),
  2. under "auto" (the default), numba when it imports, numpy otherwise.

set_backend() overrides at runtime (used by tests and benchmarks).
"""

from __future__ import annotations

import os

from . import _kernels_numpy

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

_impl = None
_name = ""


def _resolve(name: str):
    global _impl, _name
    name = name.lower()
    if name == "auto":
        name = "numba" if HAVE_NUMBA else "numpy"
    if name == "numba":
        if not HAVE_NUMBA:
            raise ImportError("APWEIGHTS_BACKEND=numba requested but numba is not importable")
        from . import _kernels_numba

        _impl, _name = _kernels_numba, "numba"
    elif name == "numpy":
        _impl, _name = _kernels_numpy, "numpy"
    else:
        raise ValueError(f"unknown backend {name!r}; expected auto, numba, or numpy")


_resolve(os.environ.get("APWEIGHTS_BACKEND", "auto"))


def backend() -> str:
    """Name of the active backend ("numba" or "numpy")."""
    return _name


def set_backend(name: str):
    _resolve(name)


def get_impl(name: str):
    """Fetch a specific implementation module without switching the default."""
    if name == "numpy":
        return _kernels_numpy
    if name == "numba":
        from . import _kernels_numba

        return _kernels_numba
    raise ValueError(f"unknown backend {name!r}")


def poly_moments(coeffs, alphas, axes_pad, sizes, exps):
    return _impl.poly_moments(coeffs, alphas, axes_pad, sizes, exps)


def power_moments(axes_pad, sizes, exps):
    return _impl.power_moments(axes_pad, sizes, exps)


def eq9_scan(coeffs, alphas, cands, mvecs, wfac, inv_pm1, npprime):
    return _impl.eq9_scan(coeffs, alphas, cands, mvecs, wfac, inv_pm1, npprime)
