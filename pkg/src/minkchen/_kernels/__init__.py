"""Batch evaluation kernels.

Two interchangeable backends compute the invariant table of
:mod:`._layout` from stacked partial derivatives: a compiled Cython module
and a pure-Python fallback.  The compiled one is used when it imports; set
``MINKCHEN_BACKEND=python`` to force the fallback.
"""

import os

from . import _pykernels
from ._layout import COLUMN_INDEX, COLUMNS, NCOLS, STATUS_NAMES

try:  # pragma: no cover - depends on the build
    from . import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels


def available_backends():
    return sorted(BACKENDS)


def default_backend():
    forced = os.environ.get("MINKCHEN_BACKEND")
    if forced:
        return forced
    return "cython" if "cython" in BACKENDS else "python"


def get_kernels(backend=None):
    name = backend or default_backend()
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} is not available (have {available_backends()})") from None


__all__ = ["COLUMNS", "COLUMN_INDEX", "NCOLS", "STATUS_NAMES", "available_backends",
           "default_backend", "get_kernels"]
