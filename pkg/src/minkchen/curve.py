"""Unit-speed profile curves and their Frenet apparatus.

A profile is stored in the uniform coordinate order ``(x1, x2, r)``.  The
three-dimensional metric it lives in depends on the ambient tag:

* hyperbolic: ``x1'^2 + x2'^2 - r'^2`` (curve in span{e1, e2, e4});
* elliptic: ``r'^2 + x1'^2 - x2'^2`` (curve in span{e1, e3, e4});
* euclidean: ``x1'^2 + x2'^2 + r'^2``.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import integrate
from scipy.interpolate import BPoly, make_interp_spline

from .errors import InflectionPoint, InsufficientSamples, OutOfDomain
from .rspec import RSpec, parse_rspec

ACCELERATION_TOL = 1e-9
SPLINE_DEGREE = 5


class Ambient(str, Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    EUCLIDEAN = "euclidean"

    @property
    def curve_metric(self):
        return _CURVE_METRICS[self]

    @property
    def lorentzian(self):
        return self is not Ambient.EUCLIDEAN


_CURVE_METRICS = {
    Ambient.HYPERBOLIC: np.array([1.0, 1.0, -1.0]),
    Ambient.ELLIPTIC: np.array([1.0, -1.0, 1.0]),
    Ambient.EUCLIDEAN: np.array([1.0, 1.0, 1.0]),
}


def ambient_of(value):
    if isinstance(value, Ambient):
        return value
    try:
        return Ambient(str(value).lower())
    except ValueError:
        raise ValueError(f"unknown ambient {value!r}") from None


def inner3(a, b, metric):
    return float(a[0] * b[0] * metric[0] + a[1] * b[1] * metric[1] + a[2] * b[2] * metric[2])


@dataclass(frozen=True)
class CurveJet:
    u: float
    p: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray


# --------------------------------------------------------------------------
# analytic families


class AnalyticSource:
    """Closed-form profile; subclasses implement :meth:`_derivs`."""

    name = ""
    ambients = tuple(Ambient)

    def __init__(self, ambient, **params):
        self.ambient = ambient_of(ambient)
        if self.ambient not in self.ambients:
            raise ValueError(f"family {self.name!r} is not defined for {self.ambient.value} ambient")
        self.params = params

    def default_domain(self):
        return (-1.0, 1.0)

    def _derivs(self, u):
        """Return four 3-vectors: position and derivatives of order 1-3."""
        raise NotImplementedError

    def jet(self, u):
        p, a, b, c = self._derivs(float(u))
        return CurveJet(float(u), np.asarray(p, float), np.asarray(a, float),
                        np.asarray(b, float), np.asarray(c, float))

    def spec(self):
        return {"family": self.name, "params": dict(self.params)}


class PseudoCircle(AnalyticSource):
    """``x1 = a sinh(u/a), x2 = 0, r = a cosh(u/a)`` in the hyperbolic ambient."""

    name = "mink-pseudocircle"
    ambients = (Ambient.HYPERBOLIC,)

    def __init__(self, ambient=Ambient.HYPERBOLIC, a=1.0):
        super().__init__(ambient, a=float(a))
        if a <= 0:
            raise ValueError("a must be positive")

    def _derivs(self, u):
        a = self.params["a"]
        s, c = math.sinh(u / a), math.cosh(u / a)
        return ((a * s, 0.0, a * c), (c, 0.0, s),
                (s / a, 0.0, c / a), (c / a ** 2, 0.0, s / a ** 2))


class Catenary(AnalyticSource):
    """``r = sqrt(u^2 + a^2)``, ``x1 = a asinh(u/a)``, ``x2 = 0`` (elliptic)."""

    name = "catenary"
    ambients = (Ambient.ELLIPTIC,)

    def __init__(self, ambient=Ambient.ELLIPTIC, a=1.0):
        super().__init__(ambient, a=float(a))
        if a <= 0:
            raise ValueError("a must be positive")

    def _derivs(self, u):
        a = self.params["a"]
        r = math.sqrt(u * u + a * a)
        x1 = (a * math.asinh(u / a), a / r, -a * u / r ** 3, a * (3 * u * u - r * r) / r ** 5)
        rr = (r, u / r, a * a / r ** 3, -3 * a * a * u / r ** 5)
        return tuple((x1[i], 0.0, rr[i]) for i in range(4))


class EuclidCircle(AnalyticSource):
    """Circle of radius ``a`` in the axis plane, constant ``r = R`` (Euclidean)."""

    name = "euclid-circle"
    ambients = (Ambient.EUCLIDEAN,)

    def __init__(self, ambient=Ambient.EUCLIDEAN, a=1.0, R=1.0):
        super().__init__(ambient, a=float(a), R=float(R))
        if a <= 0 or R <= 0:
            raise ValueError("a and R must be positive")

    def default_domain(self):
        return (0.0, 2 * math.pi * self.params["a"])

    def _derivs(self, u):
        a, R = self.params["a"], self.params["R"]
        c, s = math.cos(u / a), math.sin(u / a)
        return ((a * c, a * s, R), (-s, c, 0.0),
                (-c / a, -s / a, 0.0), (s / a ** 2, -c / a ** 2, 0.0))


class LinearRTheta(AnalyticSource):
    """``r = R + slope*u`` with the axis-plane angle growing at rate ``omega``.

    Hyperbolic and Euclidean profiles wind on a circle, elliptic ones on a
    hyperbola; ``slope = 0`` gives the constant-radius profiles.
    """

    name = "linear-r-theta"

    def __init__(self, ambient, R=1.0, omega=1.0, slope=0.0):
        super().__init__(ambient, R=float(R), omega=float(omega), slope=float(slope))
        if omega == 0:
            raise ValueError("omega must be nonzero")
        if self.ambient is Ambient.HYPERBOLIC:
            self._amp = math.sqrt(1.0 + slope * slope)
        else:
            if abs(slope) >= 1:
                raise ValueError("|slope| must be < 1 for elliptic/euclidean profiles")
            self._amp = math.sqrt(1.0 - slope * slope)

    def _derivs(self, u):
        R, w = self.params["R"], self.params["omega"]
        s = self.params.get("slope", 0.0)
        A = self._amp
        rr = (R + s * u, s, 0.0, 0.0)
        if self.ambient is Ambient.ELLIPTIC:
            ch, sh = math.cosh(w * u), math.sinh(w * u)
            x1 = (A / w * sh, A * ch, A * w * sh, A * w * w * ch)
            x2 = (A / w * ch, A * sh, A * w * ch, A * w * w * sh)
        else:
            c, sn = math.cos(w * u), math.sin(w * u)
            x1 = (A / w * c, -A * sn, -A * w * c, A * w * w * sn)
            x2 = (A / w * sn, A * c, -A * w * sn, -A * w * w * c)
        return tuple((x1[i], x2[i], rr[i]) for i in range(4))


class ConstantRTheta(LinearRTheta):
    name = "constant-r-theta"

    def __init__(self, ambient, R=1.0, omega=1.0):
        super().__init__(ambient, R=R, omega=omega, slope=0.0)
        self.params = {"R": float(R), "omega": float(omega)}


class PlanarProfile(AnalyticSource):
    """Planar profile (``x2 = 0``) with prescribed ``r(u)``.

    ``x1`` follows from the unit-speed relation; its value is a quadrature
    from ``u = 0`` while its derivatives are closed form.
    """

    name = "polynomial-r"

    def __init__(self, ambient, coeffs=(1.0,), r=None):
        if r is None:
            rs = RSpec("poly", tuple(float(c) for c in coeffs))
            super().__init__(ambient, coeffs=list(rs.params))
        else:
            rs = parse_rspec(r) if isinstance(r, str) else r
            super().__init__(ambient, r=str(rs))
            self.name = "planar"
        self.rspec = rs
        self._sign = 1.0 if self.ambient is Ambient.HYPERBOLIC else -1.0

    def _speed(self, u):
        _, r1, _, _ = self.rspec.derivs(u)
        q2 = 1.0 + self._sign * r1 * r1
        if q2 <= 0:
            raise OutOfDomain(f"|r'| >= 1 at u={u}: no spacelike planar profile")
        return math.sqrt(q2)

    def _derivs(self, u):
        r0, r1, r2, r3 = self.rspec.derivs(u)
        q = self._speed(u)
        sg = self._sign
        q1 = sg * r1 * r2 / q
        q2 = sg * (r2 * r2 + r1 * r3) / q - (r1 * r2) ** 2 / q ** 3
        x1, _ = integrate.quad(self._speed, 0.0, u, epsabs=1e-14, epsrel=1e-13, limit=200)
        return ((x1, 0.0, r0), (q, 0.0, r1), (q1, 0.0, r2), (q2, 0.0, r3))


FAMILIES = {
    "mink-pseudocircle": PseudoCircle,
    "catenary": Catenary,
    "euclid-circle": EuclidCircle,
    "constant-r-theta": ConstantRTheta,
    "linear-r-theta": LinearRTheta,
    "polynomial-r": PlanarProfile,
    "planar": PlanarProfile,
}


def make_family(name, ambient, **params):
    try:
        cls = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown profile family {name!r}") from None
    return cls(ambient_of(ambient), **params)


# --------------------------------------------------------------------------
# tabulated profiles


class TabulatedSource:
    """Samples ``(u_i, x1_i, x2_i, r_i)`` interpolated by a quintic spline.

    When first and second derivatives at the samples are supplied (as the
    constructors do) a piecewise quintic Hermite interpolant is used instead,
    which keeps second derivatives accurate up to the ends of the range.
    """

    def __init__(self, u, x1, x2, r, d1=None, d2=None):
        u = np.asarray(u, dtype=float)
        pts = np.column_stack([np.asarray(x1, float), np.asarray(x2, float), np.asarray(r, float)])
        if u.ndim != 1 or pts.shape[0] != u.size:
            raise ValueError("sample arrays must be one-dimensional and of equal length")
        if u.size < SPLINE_DEGREE + 1:
            raise InsufficientSamples(f"need at least {SPLINE_DEGREE + 1} samples, got {u.size}")
        if np.any(np.diff(u) <= 0):
            raise ValueError("sample parameters must be strictly increasing")
        if (d1 is None) != (d2 is None):
            raise ValueError("give both derivative arrays or neither")
        self.u = u
        self.points = pts
        if d1 is None:
            self.d1 = self.d2 = None
            self._spline = make_interp_spline(u, pts, k=SPLINE_DEGREE)
        else:
            self.d1 = np.asarray(d1, dtype=float).reshape(u.size, 3)
            self.d2 = np.asarray(d2, dtype=float).reshape(u.size, 3)
            data = np.stack([pts, self.d1, self.d2], axis=1)
            self._spline = _VectorHermite(u, data)
        self._derivatives = [self._spline.derivative(n) for n in (1, 2, 3)]

    def default_domain(self):
        return (float(self.u[0]), float(self.u[-1]))

    def jet(self, u):
        u = float(u)
        slack = 1e-12 * (1.0 + abs(u))
        if u < self.u[0] - slack or u > self.u[-1] + slack:
            raise OutOfDomain(f"u={u} outside sample range [{self.u[0]}, {self.u[-1]}]")
        u = min(max(u, self.u[0]), self.u[-1])
        return CurveJet(u, self._spline(u), *(d(u) for d in self._derivatives))

    def arc_length(self, metric):
        """Cumulative arc length at the samples (adaptive composite Simpson)."""
        speed = lambda s: math.sqrt(abs(inner3(self._derivatives[0](s), self._derivatives[0](s), metric)))
        out = np.zeros_like(self.u)
        for i in range(1, self.u.size):
            out[i] = out[i - 1] + _simpson(speed, self.u[i - 1], self.u[i])
        return out

    def spec(self):
        out = {"u": self.u.tolist(), "x1": self.points[:, 0].tolist(),
               "x2": self.points[:, 1].tolist(), "r": self.points[:, 2].tolist()}
        if self.d1 is not None:
            out["d1"] = self.d1.tolist()
            out["d2"] = self.d2.tolist()
        return {"samples": out}


class _VectorHermite:
    """Componentwise :class:`scipy.interpolate.BPoly` Hermite interpolant.

    At a sample parameter the stored value and derivatives are returned
    as given, which avoids the ``eps/h^2`` rounding of evaluating a
    second derivative from polynomial coefficients on a fine grid.
    """

    def __init__(self, u, data, order=0, polys=None):
        # data[i, j, c]: j-th derivative of component c at u[i]
        self._u = u
        self._data = data
        self._order = order
        self._polys = polys or [BPoly.from_derivatives(u, data[:, :, c]) for c in range(3)]

    def derivative(self, n):
        return _VectorHermite(self._u, self._data, self._order + n,
                              [p.derivative(n) for p in self._polys])

    def __call__(self, u):
        if self._order <= 2:
            i = int(np.searchsorted(self._u, u))
            if i < self._u.size and self._u[i] == u:
                return self._data[i, self._order].copy()
        return np.array([float(p(u)) for p in self._polys])


def _simpson(f, a, b, rtol=1e-10):
    def composite(m):
        xs = np.linspace(a, b, 2 * m + 1)
        ys = np.array([f(x) for x in xs])
        return (b - a) / (6 * m) * (ys[0] + ys[-1] + 4 * ys[1:-1:2].sum() + 2 * ys[2:-1:2].sum())

    m = 1
    prev = composite(m)
    while m < 256:
        m *= 2
        cur = composite(m)
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return prev


# --------------------------------------------------------------------------
# profile curve


@dataclass(frozen=True)
class ProfileCurve:
    ambient: Ambient
    source: object
    domain: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "ambient", ambient_of(self.ambient))
        if self.domain is None:
            object.__setattr__(self, "domain", tuple(self.source.default_domain()))
        a, b = self.domain
        if not a < b:
            raise ValueError("domain must be a nonempty interval")
        object.__setattr__(self, "domain", (float(a), float(b)))

    @classmethod
    def family(cls, name, ambient, domain=None, **params):
        return cls(ambient_of(ambient), make_family(name, ambient, **params), domain)

    @classmethod
    def from_samples(cls, ambient, u, x1, x2, r, domain=None, reparametrize=True, d1=None,
                     d2=None):
        """Tabulated profile, reparametrized by arc length if it is not unit speed.

        ``d1``/``d2`` optionally give ``(x1, x2, r)`` derivatives at the
        samples; they are dropped if a reparametrization is needed.
        """
        ambient = ambient_of(ambient)
        src = TabulatedSource(u, x1, x2, r, d1, d2)
        if reparametrize:
            s = src.arc_length(ambient.curve_metric)
            drift = np.max(np.abs(s - (src.u - src.u[0])))
            if drift > 1e-9 * (1.0 + s[-1]):
                src = TabulatedSource(src.u[0] + s, x1, x2, r)
                domain = None
        return cls(ambient, src, domain)

    @classmethod
    def from_spec(cls, doc):
        """Build from a profile-spec document (see README)."""
        ambient = ambient_of(doc["ambient"])
        src = doc["source"]
        domain = tuple(doc["domain"]) if doc.get("domain") is not None else None
        if "family" in src:
            return cls.family(src["family"], ambient, domain, **src.get("params", {}))
        if "samples" in src:
            s = src["samples"]
            return cls.from_samples(ambient, s["u"], s["x1"], s["x2"], s["r"], domain,
                                    d1=s.get("d1"), d2=s.get("d2"))
        raise ValueError("profile source needs 'family' or 'samples'")

    def to_spec(self):
        return {"ambient": self.ambient.value, "source": self.source.spec(),
                "domain": list(self.domain)}

    @property
    def metric(self):
        return self.ambient.curve_metric

    def jet(self, u):
        a, b = self.domain
        slack = 1e-12 * (1.0 + abs(u))
        if u < a - slack or u > b + slack:
            raise OutOfDomain(f"u={u} outside profile domain [{a}, {b}]")
        return self.source.jet(u)

    def grid(self, n):
        a, b = self.domain
        return np.linspace(a, b, int(n))


# --------------------------------------------------------------------------
# Frenet apparatus


@dataclass(frozen=True)
class FrenetApparatus:
    t: np.ndarray
    n: np.ndarray
    b: np.ndarray
    kappa: float
    tau: float
    epsilon: int


def _binormal(t, n, metric):
    b = metric * np.cross(t, n)
    b = b / math.sqrt(abs(inner3(b, b, metric)))
    if np.linalg.det(np.array([t, n, b])) < 0:
        b = -b
    return b


def frenet_from_jet(jet, metric, tol=ACCELERATION_TOL):
    q = inner3(jet.d2, jet.d2, metric)
    if abs(q) <= tol:
        raise InflectionPoint(f"<t', t'> = {q:.3e} at u={jet.u}")
    eps = 1 if q > 0 else -1
    kappa = math.sqrt(abs(q))
    t = jet.d1
    n = jet.d2 / kappa
    b = _binormal(t, n, metric)
    # n' = (d3 - kappa' n) / kappa and <n, b> = 0
    tau = inner3(jet.d3, b, metric) / (kappa * inner3(b, b, metric))
    return FrenetApparatus(t, n, b, kappa, tau, eps)


def frenet(c, u, tol=ACCELERATION_TOL):
    """Frenet frame, curvature, torsion and causal sign of the normal.

    With ``epsilon = <n, n>`` the frame satisfies ``t' = kappa n``,
    ``n' = -epsilon kappa t + tau b`` and ``b' = tau n`` (Minkowski) or
    ``b' = -tau n`` (Euclidean).
    """
    return frenet_from_jet(c.jet(u), c.metric, tol)


def frenet_rhs(app, ambient):
    """Right-hand sides ``(t', n', b')`` of the Frenet system for ``app``."""
    ambient = ambient_of(ambient)
    k, tau, eps = app.kappa, app.tau, app.epsilon
    bsign = 1.0 if ambient.lorentzian else -1.0
    return k * app.n, -eps * k * app.t + tau * app.b, bsign * tau * app.n


def kappa1_from_jet(jet):
    return float(jet.d1[0] * jet.d2[1] - jet.d1[1] * jet.d2[0])


def kappa1(c, u):
    """Signed curvature ``x1' x2'' - x2' x1''`` of the axis-plane projection."""
    return kappa1_from_jet(c.jet(u))


@dataclass
class ValidationReport:
    passed: bool
    max_unit_speed_residual: float
    min_r: float
    min_abs_acceleration: float
    acceleration_sign_changes: bool
    failures: list

    def as_dict(self):
        return {"passed": self.passed, "max_unit_speed_residual": self.max_unit_speed_residual,
                "min_r": self.min_r, "min_abs_acceleration": self.min_abs_acceleration,
                "acceleration_sign_changes": self.acceleration_sign_changes,
                "failures": list(self.failures)}


def validate(c, samples=100, speed_tol=1e-6, tol=ACCELERATION_TOL):
    if samples < 2:
        raise ValueError("samples must be >= 2")
    metric = c.metric
    speed_res, rmin, accmin, signs = 0.0, math.inf, math.inf, set()
    for u in c.grid(samples):
        j = c.jet(u)
        speed_res = max(speed_res, abs(inner3(j.d1, j.d1, metric) - 1.0))
        rmin = min(rmin, float(j.p[2]))
        q = inner3(j.d2, j.d2, metric)
        accmin = min(accmin, abs(q))
        if abs(q) > tol:
            signs.add(q > 0)
    failures = []
    if speed_res > speed_tol:
        failures.append(f"unit-speed residual {speed_res:.3e} exceeds {speed_tol:.1e}")
    if rmin <= 0:
        failures.append(f"r <= 0 detected (min r = {rmin:.6g})")
    if accmin <= tol:
        failures.append(f"|<t', t'>| = {accmin:.3e} vanishes on the grid")
    if len(signs) > 1:
        failures.append("<t', t'> changes sign on the domain")
    return ValidationReport(not failures, speed_res, rmin, accmin, len(signs) > 1, failures)
