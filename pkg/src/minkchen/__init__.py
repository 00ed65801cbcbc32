"""Curvature invariants and Chen classification of spacelike rotational surfaces.

The library works in Minkowski 4-space (and in Euclidean 4-space for
comparison).  Profile curves live in :mod:`minkchen.curve`, the general
invariant pipeline in :mod:`minkchen.surface`, rotational surfaces and the
Chen classification in :mod:`minkchen.rotational`, and the ODE constructors
in :mod:`minkchen.construct`.
"""

from .curve import Ambient, ProfileCurve
from .errors import GeometryError
from .rotational import ChenVerdict, build, chen_classify, closed_form_invariants
from .surface import evaluate, evaluate_grid

__version__ = "0.1.0"

__all__ = [
    "Ambient",
    "ChenVerdict",
    "GeometryError",
    "ProfileCurve",
    "build",
    "chen_classify",
    "closed_form_invariants",
    "evaluate",
    "evaluate_grid",
    "__version__",
]
