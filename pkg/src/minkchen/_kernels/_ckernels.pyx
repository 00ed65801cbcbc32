# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch invariant kernel; a line-by-line port of ``_pykernels``."""

import numpy as np

from libc.math cimport atan2, cos, fabs, hypot, NAN, sin, sqrt

from ._layout import (CLAMP, CLASSIFY_TOL, MINIMAL_TOL, NCOLS, NULL_TOL, STATUS_LIGHTLIKE,
                      STATUS_MINIMAL, STATUS_NOT_SPACELIKE, STATUS_OK, STATUS_UMBILICAL,
                      UMBILIC_TOL)

NAME = "cython"

cdef double C_CLAMP = CLAMP
cdef double C_CLASSIFY = CLASSIFY_TOL
cdef double C_MINIMAL = MINIMAL_TOL
cdef double C_NULL = NULL_TOL
cdef double C_UMBILIC = UMBILIC_TOL
cdef int C_NCOLS = NCOLS
cdef double S_OK = STATUS_OK
cdef double S_MINIMAL = STATUS_MINIMAL
cdef double S_LIGHTLIKE = STATUS_LIGHTLIKE
cdef double S_UMBILICAL = STATUS_UMBILICAL
cdef double S_NOT_SPACELIKE = STATUS_NOT_SPACELIKE


cdef inline double _ip(const double* a, const double* b, const double* m) nogil:
    return a[0] * b[0] * m[0] + a[1] * b[1] * m[1] + a[2] * b[2] * m[2] + a[3] * b[3] * m[3]


cdef inline double _enorm(const double* a) nogil:
    return sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3])


cdef inline double _det3(double a00, double a01, double a02, double a10, double a11,
                         double a12, double a20, double a21, double a22) nogil:
    return (a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20)
            + a02 * (a10 * a21 - a11 * a20))


cdef inline double _det4(const double* a, const double* b, const double* c,
                         const double* d) nogil:
    return (a[0] * _det3(b[1], b[2], b[3], c[1], c[2], c[3], d[1], d[2], d[3])
            - a[1] * _det3(b[0], b[2], b[3], c[0], c[2], c[3], d[0], d[2], d[3])
            + a[2] * _det3(b[0], b[1], b[3], c[0], c[1], c[3], d[0], d[1], d[3])
            - a[3] * _det3(b[0], b[1], b[2], c[0], c[1], c[2], d[0], d[1], d[2]))


cdef inline void _normal_part(const double* x, const double* zu, const double* zv, double E,
                              double F, double G, double w2, const double* m,
                              double* out) nogil:
    cdef double pu = _ip(x, zu, m)
    cdef double pv = _ip(x, zv, m)
    cdef double a = (G * pu - F * pv) / w2
    cdef double b = (E * pv - F * pu) / w2
    cdef int i
    for i in range(4):
        out[i] = x[i] - a * zu[i] - b * zv[i]


cdef void _point(const double* p, const double* m, double* out) nogil:
    cdef const double* zu = p
    cdef const double* zv = p + 4
    cdef const double* zuu = p + 8
    cdef const double* zuv = p + 12
    cdef const double* zvv = p + 16
    cdef double s11[4]
    cdef double s12[4]
    cdef double s22[4]
    cdef double H[4]
    cdef double e[4]
    cdef double q[4]
    cdef double lv[4]
    cdef double xbar[4]
    cdef double ybar[4]
    cdef double sxy[4]
    cdef double xv4[4]
    cdef double yv4[4]
    cdef int i, j
    cdef double E, F, G, w2, W, sg, L, M, N, k, vk, K, hq, hn, best, c, nq, lq, csign
    cdef double sE, a00, a01, a11, lo, mo, no, disc, phi, d1a, d1b, d2a, d2b
    cdef double xa, xb, ya, yb, xu, xv, yu, yv, ip, lam, proj, d, coef, t
    cdef bint flip, umbilical

    for i in range(C_NCOLS):
        out[i] = NAN
    E = _ip(zu, zu, m)
    F = _ip(zu, zv, m)
    G = _ip(zv, zv, m)
    w2 = E * G - F * F
    out[0] = E
    out[1] = F
    out[2] = G
    if E <= 0.0 or G <= 0.0 or w2 <= 0.0:
        out[26] = S_NOT_SPACELIKE
        return
    W = sqrt(w2)
    out[3] = W

    _normal_part(zuu, zu, zv, E, F, G, w2, m, s11)
    _normal_part(zuv, zu, zv, E, F, G, w2, m, s12)
    _normal_part(zvv, zu, zv, E, F, G, w2, m, s22)
    for i in range(4):
        H[i] = (G * s11[i] - 2.0 * F * s12[i] + E * s22[i]) / (2.0 * w2)

    sg = -1.0 if m[3] < 0.0 else 1.0
    L = 2.0 * sg * _det4(zu, zv, zuu, zuv) / w2
    M = sg * _det4(zu, zv, zuu, zvv) / w2
    N = 2.0 * sg * _det4(zu, zv, zuv, zvv) / w2
    k = (L * N - M * M) / w2
    vk = (E * N + G * L - 2.0 * F * M) / (2.0 * w2)
    K = (_ip(s11, s22, m) - _ip(s12, s12, m)) / w2
    hq = _ip(H, H, m)
    out[4] = L
    out[5] = M
    out[6] = N
    out[7] = k
    out[8] = vk
    out[9] = K
    for i in range(4):
        out[10 + i] = H[i]
    out[14] = hq
    out[25] = vk * vk - k
    if k < -C_CLASSIFY:
        out[24] = 2
    elif k > C_CLASSIFY:
        out[24] = 1
    elif fabs(vk) <= C_CLASSIFY:
        out[24] = 0
    else:
        out[24] = 3

    hn = _enorm(H)
    if hn <= C_MINIMAL * (1.0 + _enorm(zuu) + _enorm(zvv)):
        out[26] = S_MINIMAL
        return
    if fabs(hq) <= C_NULL * hn * hn:
        out[26] = S_LIGHTLIKE
        return

    best = -1.0
    for j in range(4):
        for i in range(4):
            e[i] = 0.0
        e[j] = 1.0
        _normal_part(e, zu, zv, E, F, G, w2, m, q)
        c = _ip(q, H, m) / hq
        for i in range(4):
            q[i] = q[i] - c * H[i]
        nq = _enorm(q)
        if nq > best:
            best = nq
            for i in range(4):
                lv[i] = q[i]
    lq = sqrt(fabs(_ip(lv, lv, m)))
    for i in range(4):
        lv[i] = lv[i] / lq
    csign = (1.0 if _ip(lv, lv, m) > 0 else -1.0) * (1.0 if hq > 0 else -1.0)

    sE = sqrt(E)
    for i in range(4):
        xbar[i] = zu[i] / sE
        ybar[i] = (sE / W) * (zv[i] - (F / E) * zu[i])

    a00 = 1.0 / sE
    a01 = -F / (sE * W)
    a11 = sE / W
    lo = a00 * a00 * L
    mo = a00 * a01 * L + a00 * a11 * M
    no = a01 * a01 * L + 2.0 * a01 * a11 * M + a11 * a11 * N
    disc = hypot(0.5 * (lo - no), mo)
    umbilical = disc <= C_UMBILIC * (1.0 + fabs(lo) + fabs(no))
    if umbilical:
        xa = sqrt(0.5)
        xb = xa
        ya = xa
        yb = -ya
    else:
        phi = 0.5 * atan2(2.0 * mo, lo - no)
        d1a = cos(phi)
        d1b = sin(phi)
        d2a = -sin(phi)
        d2b = cos(phi)
        if d1a < -1e-14 or (fabs(d1a) <= 1e-14 and d1b < 0.0):
            d1a = -d1a
            d1b = -d1b
        if d2a < -1e-14 or (fabs(d2a) <= 1e-14 and d2b < 0.0):
            d2a = -d2a
            d2b = -d2b
        if d1b >= d2b:
            xa, xb, ya, yb = d1a, d1b, d2a, d2b
        else:
            xa, xb, ya, yb = d2a, d2b, d1a, d1b
    xu = a00 * xa + a01 * xb
    xv = a11 * xb
    yu = a00 * ya + a01 * yb
    yv = a11 * yb
    for i in range(4):
        sxy[i] = xu * yu * s11[i] + (xu * yv + xv * yu) * s12[i] + xv * yv * s22[i]
    ip = _ip(sxy, H, m)
    if hq > 0:
        lam = ip / sqrt(hq)
    else:
        lam = -ip / sqrt(-hq)

    proj = csign * _ip(sxy, lv, m)
    if fabs(proj) > 1e-12 * (1.0 + _enorm(sxy)):
        flip = proj < 0.0
    else:
        for i in range(4):
            xv4[i] = xa * xbar[i] + xb * ybar[i]
            yv4[i] = ya * xbar[i] + yb * ybar[i]
        flip = _det4(xv4, yv4, H, lv) < 0.0
    if flip:
        for i in range(4):
            lv[i] = -lv[i]

    out[15] = lam
    for i in range(4):
        out[20 + i] = lv[i]
    if umbilical:
        for i in range(4):
            out[16 + i] = 0.0
        out[26] = S_UMBILICAL
        return
    d = vk * vk - k
    if -C_CLAMP <= d < 0.0:
        d = 0.0
    if d >= 0.0:
        coef = 0.5 * sqrt(d) * lam
    else:
        coef = NAN
    for i in range(4):
        out[16 + i] = coef * lv[i]
    out[26] = S_OK


def invariant_rows(parts, metric):
    """Invariant table for stacked partials of shape ``(n, 5, 4)``."""
    cdef double[:, :, ::1] p = np.ascontiguousarray(parts, dtype=np.float64)
    cdef double[::1] m = np.ascontiguousarray(metric, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0]
    result = np.empty((n, C_NCOLS))
    cdef double[:, ::1] out = result
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            _point(&p[i, 0, 0], &m[0], &out[i, 0])
    return result
