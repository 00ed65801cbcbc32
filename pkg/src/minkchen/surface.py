"""Curvature invariants of a spacelike parametric surface.

The pointwise pipeline takes the partial derivatives of ``z(u, v)`` up to
order two and produces the first and second fundamental forms, the invariants
``k`` (determinant) and ``varkappa`` (normal curvature), the Gauss curvature,
the mean curvature vector ``H``, the Chen invariant ``lambda`` and the allied
mean curvature vector ``a(H)``.  Grid evaluation goes through the compiled
kernel when it is available (see :mod:`minkchen._kernels`).
"""

import contextlib
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import fd
from .errors import (LightlikeMeanCurvature, MinimalPoint, NotSpacelike, StencilOutOfDomain,
                     UmbilicalPoint)
from .mink import MINKOWSKI, NormalFrame, det4, inner, norm2, orthonormal_normal_frame

CLASSIFY_TOL = 1e-9
MINIMAL_TOL = 1e-9
NULL_TOL = 1e-9
UMBILIC_TOL = 1e-9
CLAMP = 1e-12

_FAULTS = set()


@contextlib.contextmanager
def inject_fault(name):
    """Temporarily corrupt a formula; used by mutation tests of the verifier."""
    if name is None:
        yield
        return
    _FAULTS.add(name)
    try:
        yield
    finally:
        _FAULTS.discard(name)


class PointClass(str, Enum):
    FLAT = "Flat"
    ELLIPTIC = "Elliptic"
    HYPERBOLIC = "Hyperbolic"
    PARABOLIC = "Parabolic"


POINT_CLASS_CODES = {PointClass.FLAT: 0, PointClass.ELLIPTIC: 1,
                     PointClass.HYPERBOLIC: 2, PointClass.PARABOLIC: 3}
POINT_CLASS_BY_CODE = {v: k for k, v in POINT_CLASS_CODES.items()}


@dataclass(frozen=True)
class Partials:
    z: np.ndarray
    zu: np.ndarray
    zv: np.ndarray
    zuu: np.ndarray
    zuv: np.ndarray
    zvv: np.ndarray

    def stack(self):
        return np.array([self.zu, self.zv, self.zuu, self.zuv, self.zvv])


# --------------------------------------------------------------------------
# patches


class SurfacePatch:
    """Parametric surface ``(u, v) -> z`` in a diagonal ambient metric.

    ``u_range``/``v_range`` bound the parameter rectangle; ``None`` means the
    parameter is unrestricted (e.g. the rotation angle).
    """

    metric = MINKOWSKI
    u_range = None
    v_range = None

    def partials(self, u, v):
        raise NotImplementedError

    def point(self, u, v):
        return self.partials(u, v).z

    def partials_grid(self, us, vs):
        """Array of shape ``(len(us), len(vs), 5, 4)`` of ``zu, zv, zuu, zuv, zvv``."""
        out = np.empty((len(us), len(vs), 5, 4))
        for i, u in enumerate(us):
            for j, v in enumerate(vs):
                out[i, j] = self.partials(u, v).stack()
        return out

    def check_stencil(self, u, v, margin):
        for val, rng, name in ((u, self.u_range, "u"), (v, self.v_range, "v")):
            if rng is not None and not (rng[0] + margin <= val <= rng[1] - margin):
                raise StencilOutOfDomain(f"{name}={val} is within {margin} of the patch boundary")


class AnalyticPatch(SurfacePatch):
    """Patch whose partials come from a user callable returning six 4-vectors."""

    def __init__(self, func, metric=MINKOWSKI, u_range=None, v_range=None):
        self._func = func
        self.metric = metric
        self.u_range = u_range
        self.v_range = v_range

    def partials(self, u, v):
        return Partials(*(np.asarray(w, dtype=float) for w in self._func(u, v)))


class FunctionPatch(SurfacePatch):
    """Patch given only by its map; partials by fourth-order central stencils."""

    def __init__(self, func, metric=MINKOWSKI, u_range=None, v_range=None, h=1e-3):
        self._z = lambda u, v: np.asarray(func(u, v), dtype=float)
        self.metric = metric
        self.u_range = u_range
        self.v_range = v_range
        self.h = h

    def partials(self, u, v):
        z, h = self._z, self.h
        return Partials(
            z(u, v),
            fd.d1(lambda s: z(s, v), u, h),
            fd.d1(lambda t: z(u, t), v, h),
            fd.d2(lambda s: z(s, v), u, h),
            fd.d11(z, u, v, h, h),
            fd.d2(lambda t: z(u, t), v, h),
        )


# --------------------------------------------------------------------------
# fundamental forms


@dataclass(frozen=True)
class FirstFundamental:
    E: float
    F: float
    G: float
    W: float


@dataclass(frozen=True)
class SecondTensorCoeffs:
    c111: float
    c121: float
    c221: float
    c112: float
    c122: float
    c222: float


@dataclass(frozen=True)
class SecondFundamental:
    L: float
    M: float
    N: float


def first_form_from(zu, zv, metric=MINKOWSKI):
    E = inner(zu, zu, metric)
    F = inner(zu, zv, metric)
    G = inner(zv, zv, metric)
    w2 = E * G - F * F
    if E <= 0 or G <= 0 or w2 <= 0:
        raise NotSpacelike(f"induced metric not positive definite (E={E:.3e}, EG-F^2={w2:.3e})")
    return FirstFundamental(E, F, G, math.sqrt(w2))


def first_form(patch, u, v):
    p = patch.partials(u, v)
    return first_form_from(p.zu, p.zv, patch.metric)


def second_tensor_from(p, frame):
    m = frame.metric
    n1, n2 = frame.n1, frame.n2
    return SecondTensorCoeffs(inner(p.zuu, n1, m), inner(p.zuv, n1, m), inner(p.zvv, n1, m),
                              inner(p.zuu, n2, m), inner(p.zuv, n2, m), inner(p.zvv, n2, m))


def second_tensor(patch, u, v, frame):
    """The six products ``c_ij^k = <z_ij, n_k>``."""
    return second_tensor_from(patch.partials(u, v), frame)


def second_form(c, W):
    """Coefficients ``L, M, N`` from the 2x2 determinants of the ``c_ij^k``."""
    L = 2.0 / W * (c.c111 * c.c122 - c.c121 * c.c112)
    M = 1.0 / W * (c.c111 * c.c222 - c.c221 * c.c112)
    N = 2.0 / W * (c.c121 * c.c222 - c.c221 * c.c122)
    if "second-form-sign" in _FAULTS:
        L = -L
    return SecondFundamental(L, M, N)


def second_form_oracle(p, W, metric=MINKOWSKI):
    """Frame-free ``L, M, N`` from 4x4 determinants with the tangent pair.

    For an oriented orthonormal normal frame,
    ``det[[<A,n1>, <B,n1>], [<A,n2>, <B,n2>]] = -det(zu, zv, A, B) / W`` in
    Minkowski space (``+`` in Euclidean space), so no frame is needed.
    """
    s = -1.0 if metric[3] < 0 else 1.0
    W2 = W * W
    return SecondFundamental(2.0 * s * det4(p.zu, p.zv, p.zuu, p.zuv) / W2,
                             s * det4(p.zu, p.zv, p.zuu, p.zvv) / W2,
                             2.0 * s * det4(p.zu, p.zv, p.zuv, p.zvv) / W2)


def gamma_invariants(I, II):
    """Return ``(k, varkappa)``."""
    w2 = I.E * I.G - I.F * I.F
    k = (II.L * II.N - II.M * II.M) / w2
    varkappa = (I.E * II.N + I.G * II.L - 2.0 * I.F * II.M) / (2.0 * w2)
    return k, varkappa


# --------------------------------------------------------------------------
# curvature


def _first_form_values(patch, u, v):
    p = patch.partials(u, v)
    m = patch.metric
    return np.array([inner(p.zu, p.zu, m), inner(p.zu, p.zv, m), inner(p.zv, p.zv, m)])


def gauss_curvature(patch, u, v, h=2e-3):
    """Intrinsic Gauss curvature from sampled ``E, F, G`` (Brioschi formula).

    Only the first fundamental form enters, so this is independent of the
    normal frame and of the second derivatives of ``z``.
    """
    patch.check_stencil(u, v, 4 * h)
    efg = lambda s, t: _first_form_values(patch, s, t)
    E, F, G = efg(u, v)
    Eu, Fu, Gu = fd.d1(lambda s: efg(s, v), u, h)
    Ev, Fv, Gv = fd.d1(lambda t: efg(u, t), v, h)
    Evv = fd.d2(lambda t: efg(u, t)[0], v, h)
    Guu = fd.d2(lambda s: efg(s, v)[2], u, h)
    Fuv = fd.d11(lambda s, t: efg(s, t)[1], u, v, h, h)
    a = np.array([[-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev],
                  [Fv - 0.5 * Gu, E, F],
                  [0.5 * Gv, F, G]])
    b = np.array([[0.0, 0.5 * Ev, 0.5 * Gu],
                  [0.5 * Ev, E, F],
                  [0.5 * Gu, F, G]])
    return float((np.linalg.det(a) - np.linalg.det(b)) / (E * G - F * F) ** 2)


def sigma_coordinates(p, frame, c=None):
    """Normal parts ``sigma(z_u, z_u), sigma(z_u, z_v), sigma(z_v, z_v)``."""
    if c is None:
        c = second_tensor_from(p, frame)
    s1, s2 = frame.signs
    n1, n2 = frame.n1, frame.n2
    return (c.c111 / s1 * n1 + c.c112 / s2 * n2,
            c.c121 / s1 * n1 + c.c122 / s2 * n2,
            c.c221 / s1 * n1 + c.c222 / s2 * n2)


def gauss_equation_curvature(I, sigmas, metric=MINKOWSKI):
    s11, s12, s22 = sigmas
    return (inner(s11, s22, metric) - inner(s12, s12, metric)) / (I.W * I.W)


def mean_curvature(patch, u, v, I, c, frame):
    """Mean curvature vector ``H = (1/2) trace_g sigma``."""
    del patch, u, v  # the coefficients already carry the geometry
    s1, s2 = frame.signs
    w2 = 2.0 * I.W * I.W
    h1 = (I.E * c.c221 - 2.0 * I.F * c.c121 + I.G * c.c111) / w2
    h2 = (I.E * c.c222 - 2.0 * I.F * c.c122 + I.G * c.c112) / w2
    return h1 / s1 * frame.n1 + h2 / s2 * frame.n2


# --------------------------------------------------------------------------
# principal tangents, lambda and the allied vector


@dataclass(frozen=True)
class TangentFrames:
    xbar: np.ndarray
    ybar: np.ndarray
    x: np.ndarray
    y: np.ndarray
    # coefficients of x and y on (z_u, z_v)
    x_coords: tuple
    y_coords: tuple


def coordinate_frame(I, zu, zv):
    """Orthonormal ``xbar = z_u/|z_u|`` and ``ybar`` with ``<ybar, z_v> > 0``."""
    sE = math.sqrt(I.E)
    return zu / sE, (sE / I.W) * (zv - (I.F / I.E) * zu)


def _orient(a, b):
    if a < -1e-14 or (abs(a) <= 1e-14 and b < 0):
        return -a, -b
    return a, b


def principal_tangents(I, II, xbar, ybar, tol=UMBILIC_TOL):
    """Unit principal tangents as eigen-directions of ``II`` relative to ``I``.

    Both directions are oriented to have a nonnegative ``xbar`` component and
    ``x`` is the one with the larger ``ybar`` component, which reproduces
    ``x = (xbar + ybar)/sqrt(2)``, ``y = (xbar - ybar)/sqrt(2)`` on rotational
    surfaces.

    Raises
    ------
    UmbilicalPoint
        If ``II`` is proportional to ``I`` (including ``II = 0``).
    """
    sE = math.sqrt(I.E)
    # (alpha, beta) on (xbar, ybar)  ->  (a, b) on (z_u, z_v)
    A = np.array([[1.0 / sE, -I.F / (sE * I.W)], [0.0, sE / I.W]])
    II_m = np.array([[II.L, II.M], [II.M, II.N]])
    Io = A.T @ II_m @ A
    l_, m_, n_ = Io[0, 0], Io[0, 1], Io[1, 1]
    disc = math.hypot(0.5 * (l_ - n_), m_)
    if disc <= tol * (1.0 + abs(l_) + abs(n_)):
        raise UmbilicalPoint("second fundamental form is proportional to the first")
    phi = 0.5 * math.atan2(2.0 * m_, l_ - n_)
    d1 = _orient(math.cos(phi), math.sin(phi))
    d2 = _orient(-math.sin(phi), math.cos(phi))
    xo, yo = (d1, d2) if d1[1] >= d2[1] else (d2, d1)
    x = xo[0] * xbar + xo[1] * ybar
    y = yo[0] * xbar + yo[1] * ybar
    return TangentFrames(xbar, ybar, x, y, tuple(A @ np.array(xo)), tuple(A @ np.array(yo)))


def diagonal_tangents(I, xbar, ybar):
    """The pair ``x = (xbar + ybar)/sqrt(2)``, ``y = (xbar - ybar)/sqrt(2)``.

    Used at umbilical points, where every orthonormal pair is principal; on
    rotational surfaces it is the principal pair itself.
    """
    sE = math.sqrt(I.E)
    A = np.array([[1.0 / sE, -I.F / (sE * I.W)], [0.0, sE / I.W]])
    s = math.sqrt(0.5)
    xo, yo = np.array([s, s]), np.array([s, -s])
    return TangentFrames(xbar, ybar, s * (xbar + ybar), s * (xbar - ybar),
                         tuple(A @ xo), tuple(A @ yo))


def sigma_pair(sigmas, a, b):
    """``sigma(X, Y)`` for ``X = a0 z_u + a1 z_v`` and ``Y = b0 z_u + b1 z_v``."""
    s11, s12, s22 = sigmas
    return a[0] * b[0] * s11 + (a[0] * b[1] + a[1] * b[0]) * s12 + a[1] * b[1] * s22


def lambda_invariant(sigma_xy, H, metric=MINKOWSKI, minimal_tol=MINIMAL_TOL):
    """Chen invariant: ``<sigma(x,y), H>`` over ``sqrt(|<H,H>|)``, sign-flipped if H is timelike."""
    H = np.asarray(H, dtype=float)
    hn = float(np.linalg.norm(H))
    if hn <= minimal_tol:
        raise MinimalPoint("mean curvature vector vanishes")
    q = norm2(H, metric)
    if abs(q) <= NULL_TOL * hn * hn:
        raise LightlikeMeanCurvature("mean curvature vector is lightlike")
    ip = inner(sigma_xy, H, metric)
    if q > 0:
        return ip / math.sqrt(q)
    return -ip / math.sqrt(-q)


def allied_mean_curvature(k, varkappa, lam, l):
    """``a(H) = (sqrt(varkappa^2 - k)/2) * lambda * l``."""
    d = varkappa * varkappa - k
    if -CLAMP <= d < 0:
        d = 0.0
    if d < 0:
        raise ValueError(f"varkappa^2 - k = {d:.3e} is negative")
    return 0.5 * math.sqrt(d) * lam * np.asarray(l, dtype=float)


def l_direction(H, sigma_xy, frame, x, y):
    """Unit normal orthogonal to ``H``.

    Its sign makes ``<l,l> sign<H,H> <sigma(x,y), l>`` nonnegative, which
    makes the allied vector agree with the shape-operator trace definition;
    when ``sigma(x, y)`` is parallel to ``H`` (or not available) we fall
    back to ``det(x, y, H, l) > 0``.
    """
    m = frame.metric
    s1, s2 = frame.signs
    h1, h2 = frame.components(H)
    l = (h2 * s2) * frame.n1 - (h1 * s1) * frame.n2
    l = l / math.sqrt(abs(norm2(l, m)))
    c = math.copysign(1.0, norm2(l, m)) * math.copysign(1.0, norm2(H, m))
    if sigma_xy is not None:
        proj = c * inner(sigma_xy, l, m)
        if abs(proj) > 1e-12 * (1.0 + float(np.linalg.norm(sigma_xy))):
            return l if proj > 0 else -l
    return l if det4(x, y, H, l) > 0 else -l


def allied_trace(orthonormal_sigmas, H, l, metric=MINKOWSKI):
    """Allied vector from the shape-operator traces ``tr(A_1 A_2)``.

    ``orthonormal_sigmas`` holds ``sigma(e_a, e_b)`` for an orthonormal
    tangent basis, as ``(s11, s12, s22)``.  The normal basis is
    ``xi_1 = H/|H|``, ``xi_2 = l``; in the Lorentzian case the ``xi_2``
    term is weighted by ``<l, l>``.
    """
    s11, s12, s22 = orthonormal_sigmas
    hn = math.sqrt(abs(norm2(H, metric)))
    xi1 = H / hn
    pairs = ((s11, 1.0), (s12, 2.0), (s22, 1.0))
    tr = sum(w * inner(s, xi1, metric) * inner(s, l, metric) for s, w in pairs)
    return 0.5 * hn * norm2(l, metric) * tr * l


def classify_point(k, varkappa, tol=CLASSIFY_TOL):
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if k < -tol:
        return PointClass.HYPERBOLIC
    if k > tol:
        return PointClass.ELLIPTIC
    if abs(varkappa) <= tol:
        return PointClass.FLAT
    return PointClass.PARABOLIC


# --------------------------------------------------------------------------
# full pipeline


@dataclass
class InvariantSet:
    first: FirstFundamental
    coeffs: SecondTensorCoeffs
    second: SecondFundamental
    k: float
    varkappa: float
    K: float
    H: np.ndarray
    H_norm2: float
    lambda_: float
    allied: np.ndarray
    l: np.ndarray
    point_class: PointClass
    minimal_residual: float
    frame: NormalFrame
    tangents: TangentFrames = None
    sigma_xy: np.ndarray = None
    status: str = "ok"


def evaluate_partials(p, metric=MINKOWSKI, frame=None):
    """Run the pointwise pipeline on precomputed partials."""
    I = first_form_from(p.zu, p.zv, metric)
    if frame is None:
        frame = orthonormal_normal_frame(p.zu, p.zv, metric)
    c = second_tensor_from(p, frame)
    II = second_form(c, I.W)
    k, vk = gamma_invariants(I, II)
    sig = sigma_coordinates(p, frame, c)
    K = gauss_equation_curvature(I, sig, metric)
    H = mean_curvature(None, None, None, I, c, frame)
    hq = norm2(H, metric)
    nan4 = np.full(4, np.nan)
    out = InvariantSet(I, c, II, k, vk, K, H, hq, math.nan, nan4, nan4,
                       classify_point(k, vk), vk * vk - k, frame)

    minimal_tol = MINIMAL_TOL * (1.0 + float(np.linalg.norm(p.zuu)) + float(np.linalg.norm(p.zvv)))
    hn = float(np.linalg.norm(H))
    if hn <= minimal_tol:
        out.status = "minimal"
        return out
    if abs(hq) <= NULL_TOL * hn * hn:
        out.status = "lightlike"
        return out
    xbar, ybar = coordinate_frame(I, p.zu, p.zv)
    try:
        tf = principal_tangents(I, II, xbar, ybar)
    except UmbilicalPoint:
        # II proportional to I: any orthonormal pair is principal, and
        # varkappa^2 = k makes a(H) vanish
        out.status = "umbilical"
        tf = diagonal_tangents(I, xbar, ybar)
    sxy = sigma_pair(sig, tf.x_coords, tf.y_coords)
    lam = lambda_invariant(sxy, H, metric, minimal_tol)
    l = l_direction(H, sxy, frame, tf.x, tf.y)
    out.tangents = tf
    out.sigma_xy = sxy
    out.lambda_ = lam
    out.l = l
    if out.status == "umbilical":
        out.allied = np.zeros(4)
    else:
        out.allied = allied_mean_curvature(k, vk, lam, l)
    return out


def evaluate(patch, u, v, frame=None):
    """Full invariant record of ``patch`` at ``(u, v)``."""
    return evaluate_partials(patch.partials(u, v), patch.metric, frame)


def orthonormal_sigmas(inv, p):
    """``sigma`` on the principal basis ``(x, y)`` of an evaluated point."""
    sig = sigma_coordinates(p, inv.frame, inv.coeffs)
    tf = inv.tangents
    return (sigma_pair(sig, tf.x_coords, tf.x_coords), sigma_pair(sig, tf.x_coords, tf.y_coords),
            sigma_pair(sig, tf.y_coords, tf.y_coords))


# --------------------------------------------------------------------------
# grids


@dataclass
class GridInvariants:
    """Column-oriented invariants on a ``(nu, nv)`` grid."""

    us: np.ndarray
    vs: np.ndarray
    table: np.ndarray
    backend: str

    def __getitem__(self, name):
        from ._kernels import COLUMN_INDEX

        idx = COLUMN_INDEX[name]
        if isinstance(idx, slice):
            return self.table[..., idx]
        return self.table[..., idx]

    @property
    def point_classes(self):
        codes = self["point_class"].astype(int)
        return np.vectorize(lambda c: POINT_CLASS_BY_CODE[c].value)(codes)


def evaluate_grid(patch, us, vs, backend=None):
    """Evaluate the pipeline on the tensor grid ``us x vs`` with a batch kernel."""
    from ._kernels import get_kernels

    kern = get_kernels(backend)
    us = np.asarray(us, dtype=float)
    vs = np.asarray(vs, dtype=float)
    parts = patch.partials_grid(us, vs)
    flat = np.ascontiguousarray(parts.reshape(-1, 5, 4))
    rows = kern.invariant_rows(flat, np.ascontiguousarray(patch.metric, dtype=float))
    return GridInvariants(us, vs, np.asarray(rows).reshape(len(us), len(vs), -1), kern.NAME)
