"""Indefinite-metric linear algebra on 4-vectors.

Vectors are plain ``numpy`` arrays of shape ``(4,)`` in the coordinates
``(e1, e2, e3, e4)``.  The ambient metric is diagonal and given by its
signature array; :data:`MINKOWSKI` is ``dx1^2 + dx2^2 + dx3^2 - dx4^2`` and
:data:`EUCLIDEAN` is the positive definite metric used for the R^4 recap.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateTangentPlane, NormalSpaceNotLorentzian

MINKOWSKI = np.array([1.0, 1.0, 1.0, -1.0])
EUCLIDEAN = np.array([1.0, 1.0, 1.0, 1.0])

E1, E2, E3, E4 = np.eye(4)


class CausalClass(str, Enum):
    SPACELIKE = "Spacelike"
    TIMELIKE = "Timelike"
    LIGHTLIKE = "Lightlike"


def inner(u, v, metric=MINKOWSKI):
    """Signed sum ``u1 v1 + u2 v2 + u3 v3 - u4 v4`` (for the default metric)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(u[0] * v[0] * metric[0] + u[1] * v[1] * metric[1]
                 + u[2] * v[2] * metric[2] + u[3] * v[3] * metric[3])


def norm2(v, metric=MINKOWSKI):
    return inner(v, v, metric)


def default_causal_tol(v):
    return 1e-9 * (1.0 + float(np.sum(np.abs(v))))


def causal_character(v, tol=None, metric=MINKOWSKI):
    """Classify ``v`` as spacelike, timelike or lightlike.

    Parameters
    ----------
    v : array_like
        4-vector.
    tol : float, optional
        Classification tolerance on ``<v, v>``.  Defaults to
        ``1e-9 * (1 + |v|_1)``.
    """
    v = np.asarray(v, dtype=float)
    if tol is None:
        tol = default_causal_tol(v)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    q = norm2(v, metric)
    if q > tol:
        return CausalClass.SPACELIKE
    if q < -tol:
        return CausalClass.TIMELIKE
    return CausalClass.LIGHTLIKE


def det4(a, b, c, d):
    return float(np.linalg.det(np.array([a, b, c, d], dtype=float)))


@dataclass(frozen=True)
class NormalFrame:
    """Orthonormal frame ``{n1, n2}`` of the normal plane.

    In Minkowski space ``<n1, n1> = epsilon`` and ``<n2, n2> = -epsilon``; in
    the Euclidean ambient both are ``+1`` and ``epsilon`` is ``+1``.
    """

    n1: np.ndarray
    n2: np.ndarray
    epsilon: int = 1
    metric: np.ndarray = MINKOWSKI

    @property
    def signs(self):
        return norm2(self.n1, self.metric), norm2(self.n2, self.metric)

    def components(self, w):
        """Coefficients of the normal vector ``w`` on ``(n1, n2)``."""
        s1, s2 = self.signs
        return (inner(w, self.n1, self.metric) / s1,
                inner(w, self.n2, self.metric) / s2)

    def project(self, w):
        a, b = self.components(w)
        return a * self.n1 + b * self.n2

    def boosted(self, phi):
        """Frame rotated (Euclidean) or boosted (Minkowski) by ``phi``."""
        if self.metric[3] < 0:
            c, s = np.cosh(phi), np.sinh(phi)
        else:
            c, s = np.cos(phi), np.sin(phi)
            return NormalFrame(c * self.n1 + s * self.n2,
                               -s * self.n1 + c * self.n2,
                               self.epsilon, self.metric)
        return NormalFrame(c * self.n1 + s * self.n2, s * self.n1 + c * self.n2,
                           self.epsilon, self.metric)

    def reflected(self):
        """Frame with ``n2`` reversed (orientation-reversing)."""
        return NormalFrame(self.n1, -self.n2, self.epsilon, self.metric)


def _tangent_coefficients(zu, zv, w, metric, E, F, G, det):
    pu = inner(w, zu, metric)
    pv = inner(w, zv, metric)
    return (G * pu - F * pv) / det, (E * pv - F * pu) / det


_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def orthonormal_normal_frame(zu, zv, metric=MINKOWSKI, tol=1e-12):
    """Deterministic oriented orthonormal frame of the normal plane.

    The normal residuals of the standard basis vectors are computed and the
    pair spanning the largest area is orthonormalized by a pivoted
    indefinite Gram-Schmidt step.
    ``n1`` is spacelike, ``n2`` timelike (Minkowski), the largest component of
    ``n1`` is positive and ``det(zu, zv, n1, n2) > 0``.

    Raises
    ------
    DegenerateTangentPlane
        If the Gram determinant of ``(zu, zv)`` is not positive.
    NormalSpaceNotLorentzian
        If the normal plane does not carry a (1, 1) metric.
    """
    zu = np.asarray(zu, dtype=float)
    zv = np.asarray(zv, dtype=float)
    E = inner(zu, zu, metric)
    F = inner(zu, zv, metric)
    G = inner(zv, zv, metric)
    det = E * G - F * F
    if det <= tol * max(1.0, abs(E * G)) or E <= 0.0:
        raise DegenerateTangentPlane(f"tangent Gram determinant {det:.3e} is not positive")

    residuals = []
    for ei in np.eye(4):
        a, b = _tangent_coefficients(zu, zv, ei, metric, E, F, G, det)
        residuals.append(ei - a * zu - b * zv)
    # the pair of normal residuals spanning the largest (Euclidean) area
    best, pair = 0.0, None
    for i, j in _PAIRS:
        ra, rb = residuals[i], residuals[j]
        wedge = float(ra @ ra) * float(rb @ rb) - float(ra @ rb) ** 2
        if wedge > best * (1.0 + 1e-12):
            best, pair = wedge, (ra, rb)
    if pair is None or best <= 1e-24:
        raise DegenerateTangentPlane("could not complete the tangent plane to a basis")
    a, b = pair

    lorentzian = metric[3] < 0
    qa, qb, qab = norm2(a, metric), norm2(b, metric), inner(a, b, metric)
    qdet = qa * qb - qab * qab
    scale = float(a @ a) * float(b @ b)
    if lorentzian and qdet >= -1e-12 * scale:
        raise NormalSpaceNotLorentzian(f"normal Gram determinant {qdet:.3e} is not negative")
    if not lorentzian and qdet <= 1e-12 * scale:
        raise DegenerateTangentPlane("normal plane is degenerate")

    if not lorentzian:
        first, other = (a, b) if qa >= qb else (b, a)
        n1 = first / np.sqrt(norm2(first, metric))
        rest = other - inner(other, n1, metric) * n1
        n2 = rest / np.sqrt(norm2(rest, metric))
    else:
        thr_a = 1e-10 * float(a @ a)
        thr_b = 1e-10 * float(b @ b)
        if qa > thr_a or qb > thr_b:
            first, other = (a, b) if qa - thr_a >= qb - thr_b else (b, a)
            n1 = first / np.sqrt(norm2(first, metric))
            rest = other - inner(other, n1, metric) * n1
            n2 = rest / np.sqrt(-norm2(rest, metric))
        elif qa < -thr_a or qb < -thr_b:
            timelike, other = (a, b) if qa + thr_a <= qb + thr_b else (b, a)
            n2 = timelike / np.sqrt(-norm2(timelike, metric))
            rest = other + inner(other, n2, metric) * n2
            n1 = rest / np.sqrt(norm2(rest, metric))
        else:
            # both residuals null: their sum or difference is spacelike
            c = a + b if qab >= 0 else a - b
            n1 = c / np.sqrt(norm2(c, metric))
            rest = a - inner(a, n1, metric) * n1
            n2 = rest / np.sqrt(-norm2(rest, metric))

    if n1[int(np.argmax(np.abs(n1)))] < 0:
        n1 = -n1
    if det4(zu, zv, n1, n2) < 0:
        n2 = -n2
    return NormalFrame(n1, n2, 1, metric)


def normal_plane_residual(frame, vectors):
    """Largest Euclidean distance of ``vectors`` from the span of the frame."""
    worst = 0.0
    for w in vectors:
        w = np.asarray(w, dtype=float)
        worst = max(worst, float(np.linalg.norm(w - frame.project(w))))
    return worst
