"""Rotational surfaces with a two-dimensional axis.

Three families are supported, selected by the ambient tag of the profile
``(x1(u), x2(u), r(u))``:

* hyperbolic: ``(x1, x2, r sinh v, r cosh v)`` in Minkowski space,
* elliptic:   ``(r cos v, r sin v, x1, x2)`` in Minkowski space,
* euclidean:  ``(x1, x2, r cos v, r sin v)`` in Euclidean R^4.

Besides the patch builder the module provides the closed-form invariants in
terms of the profile curvature data, the residuals of the moving-frame
derivative formulas, the Chen classification and a hyperplane witness for
the degenerate cases.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import fd
from .curve import Ambient, ambient_of, frenet_from_jet, kappa1_from_jet
from .errors import AmbientMismatch, MixedRegime, NotHyperplanar, PreconditionViolation
from .mink import EUCLIDEAN, MINKOWSKI, NormalFrame, inner, norm2
from .surface import Partials, SurfacePatch

HYPERBOLIC_V_RANGE = (-3.0, 3.0)
PERIODIC_V_RANGE = (0.0, 2.0 * math.pi)


class ChenVerdict(str, Enum):
    MINIMAL = "MinimalTrivialChen"
    HYPERPLANAR = "HyperplanarTrivialChen"
    NON_TRIVIAL = "NonTrivialChen"
    NOT_CHEN = "NotChen"


# --------------------------------------------------------------------------
# patch


def _orbit(ambient, v):
    """Orbit factors ``(f(v), f'(v))`` acting on the rotated coordinates."""
    if ambient is Ambient.HYPERBOLIC:
        s, c = math.sinh(v), math.cosh(v)
        return np.array([s, c]), np.array([c, s]), np.array([s, c])
    s, c = math.sin(v), math.cos(v)
    # value, first and second derivative of (cos v, sin v)
    return np.array([c, s]), np.array([-s, c]), np.array([-c, -s])


def _place(ambient, axis, rot):
    """Assemble a 4-vector from axis-plane and rotated-plane parts."""
    if ambient is Ambient.ELLIPTIC:
        return np.array([rot[0], rot[1], axis[0], axis[1]])
    return np.array([axis[0], axis[1], rot[0], rot[1]])


class RotationalPatch(SurfacePatch):
    """Rotational surface generated by ``profile``.

    The rotation angle ``v`` is unrestricted for stencil purposes;
    :attr:`v_grid` is the default sampling range.
    """

    def __init__(self, profile, v_grid=None):
        self.profile = profile
        self.ambient = profile.ambient
        self.metric = MINKOWSKI if self.ambient.lorentzian else EUCLIDEAN
        self.u_range = profile.domain
        self.v_range = None
        if v_grid is None:
            v_grid = HYPERBOLIC_V_RANGE if self.ambient is Ambient.HYPERBOLIC else PERIODIC_V_RANGE
        self.v_grid = tuple(float(x) for x in v_grid)

    def _from_jet(self, jet, v):
        f, df, ddf = _orbit(self.ambient, v)
        (x1, x2, r), (a1, a2, r1), (b1, b2, r2) = jet.p, jet.d1, jet.d2
        zero = (0.0, 0.0)
        amb = self.ambient
        return Partials(_place(amb, (x1, x2), r * f), _place(amb, (a1, a2), r1 * f),
                        _place(amb, zero, r * df), _place(amb, (b1, b2), r2 * f),
                        _place(amb, zero, r1 * df), _place(amb, zero, r * ddf))

    def partials(self, u, v):
        return self._from_jet(self.profile.jet(u), v)

    def partials_grid(self, us, vs):
        out = np.empty((len(us), len(vs), 5, 4))
        for i, u in enumerate(us):
            jet = self.profile.jet(u)
            for j, v in enumerate(vs):
                out[i, j] = self._from_jet(jet, v).stack()
        return out

    def v_samples(self, n):
        a, b = self.v_grid
        if self.ambient is Ambient.HYPERBOLIC:
            return np.linspace(a, b, int(n))
        return np.linspace(a, b, int(n), endpoint=False)


def build(profile, ambient=None, v_grid=None):
    """Rotational patch of ``profile``.

    Raises
    ------
    AmbientMismatch
        If ``ambient`` is given and differs from the profile's tag.
    """
    if ambient is not None and ambient_of(ambient) is not profile.ambient:
        raise AmbientMismatch(
            f"profile is tagged {profile.ambient.value}, surface requested as {ambient_of(ambient).value}")
    return RotationalPatch(profile, v_grid)


# --------------------------------------------------------------------------
# adapted frames


@dataclass(frozen=True)
class RotationalFrame:
    xbar: np.ndarray
    ybar: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    epsilon: int
    metric: np.ndarray

    def normal_frame(self):
        return NormalFrame(self.n1, self.n2, self.epsilon, self.metric)


def _frame_from_jet(ambient, jet, v):
    app = frenet_from_jet(jet, ambient.curve_metric)
    kappa = app.kappa
    f, df, _ = _orbit(ambient, v)
    (a1, a2, r1), (b1, b2, r2) = jet.d1, jet.d2
    k1 = a1 * b2 - a2 * b1
    r = jet.p[2]
    xbar = _place(ambient, (a1, a2), r1 * f)
    ybar = _place(ambient, (0.0, 0.0), df)
    n1 = _place(ambient, (b1, b2), r2 * f) / kappa
    if ambient is Ambient.ELLIPTIC:
        n2 = np.array([k1 * f[0], k1 * f[1], a2 * r2 - r1 * b2, a1 * r2 - r1 * b1]) / kappa
    elif ambient is Ambient.HYPERBOLIC:
        n2 = _place(ambient, (a2 * r2 - b2 * r1, r1 * b1 - a1 * r2), -k1 * f) / kappa
    else:
        n2 = _place(ambient, (a2 * r2 - b2 * r1, b1 * r1 - a1 * r2), k1 * f) / kappa
    eps = app.epsilon if ambient.lorentzian else 1
    metric = MINKOWSKI if ambient.lorentzian else EUCLIDEAN
    del r
    return RotationalFrame(xbar, ybar, n1, n2, eps, metric), app


def rotational_frame(profile, u, v):
    """The adapted frame ``(xbar, ybar, n1, n2)`` built from the profile.

    ``<n1, n1> = epsilon`` and ``<n2, n2> = -epsilon`` in Minkowski space;
    both are unit in the Euclidean case.
    """
    return _frame_from_jet(profile.ambient, profile.jet(u), v)[0]


def frame_torsion(profile, u):
    """Torsion measured against the frame's ``n2`` (``<n1', n2>/<n2, n2>``).

    This equals the Frenet torsion up to the sign relating ``n2`` to the
    Frenet binormal.
    """
    jet = profile.jet(u)
    fr, app = _frame_from_jet(profile.ambient, jet, 0.0)
    m = profile.metric
    # lift of the Frenet binormal at v = 0
    b4 = _place(profile.ambient, app.b[:2], app.b[2] * _orbit(profile.ambient, 0.0)[0])
    sign = 1.0 if float(b4 @ fr.n2) >= 0 else -1.0
    del m
    return sign * app.tau


# --------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class ClosedFormInvariants:
    """Invariants of a rotational surface as functions of ``u`` alone.

    ``sigma_*`` and ``H`` are coefficient pairs on ``(n1, n2)`` of the
    adapted frame.
    """

    u: float
    L: float
    M: float
    N: float
    k: float
    varkappa: float
    K: float
    sigma_xx: tuple
    sigma_xy: tuple
    sigma_yy: tuple
    H: tuple
    H_norm2: float
    lambda_: float
    epsilon: int
    kappa: float
    kappa1: float
    r: float
    r2: float


def closed_form_invariants(profile, u):
    """Closed-form ``L, M, N, k, varkappa, K``, ``sigma``, ``H`` and ``lambda`` at ``u``.

    Raises
    ------
    InflectionPoint
        If the profile acceleration is (numerically) null at ``u``.
    """
    amb = profile.ambient
    jet = profile.jet(u)
    app = frenet_from_jet(jet, profile.metric)
    kappa = app.kappa
    eps = app.epsilon if amb.lorentzian else 1
    k1 = kappa1_from_jet(jet)
    r, r2 = float(jet.p[2]), float(jet.d2[2])
    den = 2.0 * r * kappa
    a_h = (r * kappa ** 2 - eps * r2) / den
    a_xy = (r * kappa ** 2 + eps * r2) / den
    b = eps * k1 / den
    # the elliptic frame's n2 reverses the sign of <z_vv, n2>, hence of M
    # and of the n2 components
    if amb is Ambient.ELLIPTIC:
        h, xy, M = (a_h, b), (a_xy, -b), -eps * k1
    else:
        h, xy, M = (a_h, -b), (a_xy, b), eps * k1
    if amb is Ambient.EUCLIDEAN:
        # the oriented determinant carries the opposite sign without the
        # timelike axis
        M = -M
    s1, s2 = (eps, -eps) if amb.lorentzian else (1, 1)
    hq = s1 * h[0] ** 2 + s2 * h[1] ** 2
    ip = s1 * xy[0] * h[0] + s2 * xy[1] * h[1]
    if h == (0.0, 0.0) or hq == 0.0:
        lam = math.nan
    elif hq > 0:
        lam = ip / math.sqrt(hq)
    else:
        lam = -ip / math.sqrt(-hq)
    return ClosedFormInvariants(
        u=float(u), L=0.0, M=M, N=0.0, k=-k1 ** 2 / r ** 2, varkappa=0.0, K=-r2 / r,
        sigma_xx=h, sigma_xy=xy, sigma_yy=h, H=h, H_norm2=hq, lambda_=lam,
        epsilon=eps, kappa=kappa, kappa1=k1, r=r, r2=r2)


# --------------------------------------------------------------------------
# derivative formulas


DERIVATIVE_EQUATIONS = ("dx_xbar", "dx_ybar", "dy_xbar", "dy_ybar",
                        "dx_n1", "dy_n1", "dx_n2", "dy_n2")


def derivative_formula_residuals(profile, u, v, tau_offset=0.0, h=1e-3):
    """Residuals of the eight moving-frame derivative formulas (hyperbolic type).

    Each entry is the Euclidean norm of the numerically differentiated frame
    field minus the closed-form right-hand side.  Directional derivatives use
    ``d/dxbar = d/du`` and ``d/dybar = (1/r) d/dv``.  ``tau_offset`` perturbs
    the torsion fed to the right-hand sides (used to test the checker).

    Raises
    ------
    AmbientMismatch
        For profiles that are not of hyperbolic type.
    InflectionPoint
        If the profile acceleration is null at ``u``.
    """
    if profile.ambient is not Ambient.HYPERBOLIC:
        raise AmbientMismatch("derivative formulas are implemented for the hyperbolic type only")
    fr = rotational_frame(profile, u, v)
    cf = closed_form_invariants(profile, u)
    tau = frame_torsion(profile, u) + tau_offset
    kappa, eps, k1, r, r2 = cf.kappa, cf.epsilon, cf.kappa1, cf.r, cf.r2
    r1 = float(profile.jet(u).d1[2])

    def du(name):
        return fd.d1(lambda s: getattr(rotational_frame(profile, s, v), name), u, h)

    def dy(name):
        return fd.d1(lambda t: getattr(rotational_frame(profile, u, t), name), v, h) / r

    xb, yb, n1, n2 = fr.xbar, fr.ybar, fr.n1, fr.n2
    rhs = {
        "dx_xbar": kappa * n1,
        "dx_ybar": np.zeros(4),
        "dy_xbar": (r1 / r) * yb,
        "dy_ybar": -(r1 / r) * xb - (r2 / (r * kappa)) * eps * n1 - (k1 / (r * kappa)) * eps * n2,
        "dx_n1": -eps * kappa * xb + tau * n2,
        "dy_n1": (r2 / (r * kappa)) * yb,
        "dx_n2": tau * n1,
        "dy_n2": -(k1 / (r * kappa)) * yb,
    }
    lhs = {
        "dx_xbar": du("xbar"), "dx_ybar": du("ybar"), "dy_xbar": dy("xbar"), "dy_ybar": dy("ybar"),
        "dx_n1": du("n1"), "dy_n1": dy("n1"), "dx_n2": du("n2"), "dy_n2": dy("n2"),
    }
    return {name: float(np.linalg.norm(lhs[name] - rhs[name])) for name in DERIVATIVE_EQUATIONS}


# --------------------------------------------------------------------------
# Chen classification


@dataclass(frozen=True)
class ChenClassification:
    verdict: ChenVerdict
    residual_kappa1: float
    residual_case_i: float
    residual_case_iii: float
    tol: float
    samples: int

    def as_dict(self):
        return {"verdict": self.verdict.value, "residual_kappa1": self.residual_kappa1,
                "residual_case_i": self.residual_case_i,
                "residual_case_iii": self.residual_case_iii, "tol": self.tol,
                "samples": self.samples}


@dataclass(frozen=True)
class _ProfileSample:
    kappa: float
    epsilon: int
    kappa1: float
    r: float
    r2: float


def _profile_samples(profile, n):
    out = []
    for u in profile.grid(n):
        jet = profile.jet(u)
        app = frenet_from_jet(jet, profile.metric)
        eps = app.epsilon if profile.ambient.lorentzian else 1
        out.append(_ProfileSample(app.kappa, eps, kappa1_from_jet(jet), float(jet.p[2]),
                                  float(jet.d2[2])))
    return out


def case_iii_value(ambient, kappa, kappa1, r, r2):
    if ambient_of(ambient) is Ambient.EUCLIDEAN:
        return kappa ** 4 * r ** 2 - r2 ** 2 - kappa1 ** 2
    return r ** 2 * kappa ** 4 - r2 ** 2 + kappa1 ** 2


def chen_classify(profile, grid=64, tol=None):
    """Decide which Chen case the rotational surface of ``profile`` falls into.

    The conditions are global, so each must hold at every sample.

    Raises
    ------
    MixedRegime
        If ``kappa1`` is below the tolerance on part of the grid only.
    """
    if grid < 16:
        raise ValueError("grid must have at least 16 samples")
    smp = _profile_samples(profile, grid)
    scale = max(abs(s.r * s.kappa ** 2) for s in smp)
    if tol is None:
        tol = 1e-6 * (1.0 + scale)
    k1 = np.array([abs(s.kappa1) for s in smp])
    case_i = np.array([abs(s.r * s.kappa ** 2 - s.epsilon * s.r2) for s in smp])
    case_iii = np.array([abs(case_iii_value(profile.ambient, s.kappa, s.kappa1, s.r, s.r2))
                         for s in smp])
    small = k1 <= tol
    if small.any() and not small.all():
        raise MixedRegime(
            "kappa1 vanishes on part of the profile only",
            {"n_small": int(small.sum()), "n_samples": len(smp), "tol": tol})
    if small.all():
        verdict = ChenVerdict.MINIMAL if case_i.max() <= tol else ChenVerdict.HYPERPLANAR
    elif case_iii.max() <= tol:
        verdict = ChenVerdict.NON_TRIVIAL
    else:
        verdict = ChenVerdict.NOT_CHEN
    return ChenClassification(verdict, float(k1.max()), float(case_i.max()),
                              float(case_iii.max()), float(tol), len(smp))


@dataclass(frozen=True)
class HyperplaneWitness:
    normal: np.ndarray
    offset: float
    max_deviation: float
    max_normal_derivative: float
    samples: int = field(default=0)


def hyperplane_witness(profile, grid=32, tol=1e-8, h=1e-4):
    """Constant normal ``n2`` and the deviation of the surface from its hyperplane.

    Raises
    ------
    PreconditionViolation
        If ``kappa1`` does not vanish (the surface is not of the degenerate type).
    NotHyperplanar
        If sampled points leave the hyperplane by more than ``tol``.
    """
    cls = chen_classify(profile, max(grid, 16))
    if cls.verdict not in (ChenVerdict.HYPERPLANAR, ChenVerdict.MINIMAL):
        raise PreconditionViolation(f"witness requested for a {cls.verdict.value} profile")
    patch = build(profile)
    a, b = profile.domain
    us = np.linspace(a + 3 * h, b - 3 * h, grid)
    vs = patch.v_samples(grid)
    mid = 0.5 * (a + b)
    nu = rotational_frame(profile, mid, 0.5 * (vs[0] + vs[-1])).n2
    q = norm2(nu, patch.metric)
    nu = nu / math.sqrt(abs(q))
    proj = np.array([[inner(patch.point(u, v), nu, patch.metric) for v in vs] for u in us])
    offset = float(0.5 * (proj.max() + proj.min()))
    dev = float(np.max(np.abs(proj - offset)))
    worst = 0.0
    for u in us[:: max(1, grid // 8)]:
        r = float(profile.jet(u).p[2])
        for v in vs[:: max(1, grid // 8)]:
            gu = fd.d1(lambda s: rotational_frame(profile, s, v).n2, u, h)
            gv = fd.d1(lambda t: rotational_frame(profile, u, t).n2, v, h) / r
            worst = max(worst, float(np.linalg.norm(gu)), float(np.linalg.norm(gv)))
    if dev > tol * (1.0 + float(np.max(np.abs(proj)))):
        raise NotHyperplanar(f"surface leaves the hyperplane by {dev:.3e}")
    return HyperplaneWitness(nu, offset, dev, worst, len(us) * len(vs))
