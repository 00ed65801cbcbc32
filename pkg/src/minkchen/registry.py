"""Named test profiles shared by the verification suites and the test-suite.

Entries are analytic families on explicit domains, plus tabulated copies of
a few of them (sampled and re-interpolated) to exercise the spline path.
"""

from dataclasses import dataclass, field

import numpy as np

from .curve import Ambient, ProfileCurve, ambient_of


@dataclass(frozen=True)
class RegistryEntry:
    key: str
    ambient: Ambient
    family: str
    params: dict = field(default_factory=dict)
    domain: tuple = None
    tabulated: bool = False

    def profile(self, samples=401):
        analytic = ProfileCurve.family(self.family, self.ambient, self.domain, **self.params)
        if not self.tabulated:
            return analytic
        us = np.linspace(*analytic.domain, samples)
        pts = np.array([analytic.jet(u).p for u in us])
        return ProfileCurve.from_samples(self.ambient, us, pts[:, 0], pts[:, 1], pts[:, 2])


def _e(key, ambient, family, domain=None, tabulated=False, **params):
    return RegistryEntry(key, ambient_of(ambient), family, params, domain, tabulated)


REGISTRY = (
    _e("hyp-pseudocircle", "hyperbolic", "mink-pseudocircle", (-1.0, 1.0)),
    _e("hyp-pseudocircle-a2", "hyperbolic", "mink-pseudocircle", (-1.5, 1.5), a=2.0),
    _e("hyp-circle", "hyperbolic", "constant-r-theta", (-1.0, 1.0), R=1.0, omega=1.0),
    _e("hyp-spiral", "hyperbolic", "linear-r-theta", (-1.0, 1.0), R=1.5, omega=1.2, slope=0.3),
    _e("hyp-poly", "hyperbolic", "polynomial-r", (-1.0, 1.0), coeffs=[1.0, 0.2, 0.3]),
    _e("hyp-cosh", "hyperbolic", "planar", (-1.0, 1.0), r="cosh:0.5"),
    _e("ell-catenary", "elliptic", "catenary", (-1.0, 1.0)),
    _e("ell-catenary-a2", "elliptic", "catenary", (-1.5, 1.5), a=2.0),
    _e("ell-r2", "elliptic", "constant-r-theta", (-1.0, 1.0), R=2.0, omega=1.0),
    _e("ell-spiral", "elliptic", "linear-r-theta", (-1.0, 1.0), R=1.5, omega=0.7, slope=0.2),
    _e("ell-poly", "elliptic", "polynomial-r", (-1.0, 1.0), coeffs=[1.0, 0.2, 0.1]),
    _e("euc-clifford", "euclidean", "euclid-circle"),
    _e("euc-circle-r2", "euclidean", "euclid-circle", R=2.0),
    _e("euc-spiral", "euclidean", "linear-r-theta", (-1.0, 1.0), R=1.5, omega=1.3, slope=0.4),
    _e("euc-poly", "euclidean", "polynomial-r", (-1.0, 1.0), coeffs=[1.0, 0.1, 0.2]),
    _e("hyp-spiral-tab", "hyperbolic", "linear-r-theta", (-1.0, 1.0), True,
       R=1.5, omega=1.2, slope=0.3),
    _e("ell-spiral-tab", "elliptic", "linear-r-theta", (-1.0, 1.0), True,
       R=1.5, omega=0.7, slope=0.2),
)

BY_KEY = {e.key: e for e in REGISTRY}


def entries(ambient=None, analytic_only=False):
    out = []
    for e in REGISTRY:
        if ambient is not None and e.ambient is not ambient_of(ambient):
            continue
        if analytic_only and e.tabulated:
            continue
        out.append(e)
    return out


# --------------------------------------------------------------------------
# non-rotational patches with exact partials


def _graph(f3, f4, metric, box=(-0.5, 0.5)):
    """Patch ``(u, v, f3(u, v), f4(u, v))``; ``f`` returns value and partials
    ``(f, f_u, f_v, f_uu, f_uv, f_vv)``."""
    from .surface import AnalyticPatch

    def partials(u, v):
        a, b = f3(u, v), f4(u, v)
        base = ((u, v), (1.0, 0.0), (0.0, 1.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0))
        return tuple(np.array([*base[i], a[i], b[i]]) for i in range(6))

    return AnalyticPatch(partials, metric, box, box)


def _quad(c20, c11, c02, c30=0.0):
    def f(u, v):
        return (c20 * u * u + c11 * u * v + c02 * v * v + c30 * u ** 3,
                2 * c20 * u + c11 * v + 3 * c30 * u * u, c11 * u + 2 * c02 * v,
                2 * c20 + 6 * c30 * u, c11, 2 * c02)
    return f


def generic_patches():
    """Named non-rotational patches used by the verification suites."""
    from .mink import EUCLIDEAN, MINKOWSKI

    return {
        # generic spacelike graph in Minkowski space
        "mink-graph": _graph(_quad(0.3, 0.2, -0.1, 0.1), _quad(0.2, -0.1, 0.25), MINKOWSKI),
        # generic graph in Euclidean space
        "euc-graph": _graph(_quad(0.4, -0.3, 0.2, 0.2), _quad(-0.2, 0.5, 0.1), EUCLIDEAN),
        # holomorphic curve w -> (w, w^2/2): minimal in Euclidean space
        "euc-holomorphic": _graph(_quad(0.5, 0.0, -0.5), _quad(0.0, 1.0, 0.0), EUCLIDEAN),
        # harmonic height along a null direction: minimal (H = 0) in Minkowski space
        "mink-null-harmonic": _graph(_quad(0.5, 0.0, -0.5), _quad(0.5, 0.0, -0.5), MINKOWSKI),
        # non-harmonic height along a null direction: lightlike H
        "mink-null-lightlike": _graph(_quad(0.5, 0.0, 0.0), _quad(0.5, 0.0, 0.0), MINKOWSKI),
    }
