"""Pure-Python reference implementation of the batch invariant kernel.

The kernel works without a normal frame: normal parts are obtained by
removing tangential components, ``L, M, N`` come from 4x4 determinants with
the tangent pair (equal to the values in an oriented orthonormal normal
frame) and ``l`` is built by orthogonalizing a projected basis vector
against ``H``.  :mod:`._ckernels` mirrors this file line by line.
"""

import math

import numpy as np

from ._layout import (CLAMP, CLASSIFY_TOL, MINIMAL_TOL, NCOLS, NULL_TOL, STATUS_LIGHTLIKE,
                      STATUS_MINIMAL, STATUS_NOT_SPACELIKE, STATUS_OK, STATUS_UMBILICAL,
                      UMBILIC_TOL)

NAME = "python"


def _ip(a, b, m):
    return a[0] * b[0] * m[0] + a[1] * b[1] * m[1] + a[2] * b[2] * m[2] + a[3] * b[3] * m[3]


def _enorm(a):
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3])


def _det3(a00, a01, a02, a10, a11, a12, a20, a21, a22):
    return (a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20)
            + a02 * (a10 * a21 - a11 * a20))


def _det4(a, b, c, d):
    # rows a, b, c, d; Laplace expansion along the first row
    return (a[0] * _det3(b[1], b[2], b[3], c[1], c[2], c[3], d[1], d[2], d[3])
            - a[1] * _det3(b[0], b[2], b[3], c[0], c[2], c[3], d[0], d[2], d[3])
            + a[2] * _det3(b[0], b[1], b[3], c[0], c[1], c[3], d[0], d[1], d[3])
            - a[3] * _det3(b[0], b[1], b[2], c[0], c[1], c[2], d[0], d[1], d[2]))


def _normal_part(x, zu, zv, E, F, G, w2, m):
    pu = _ip(x, zu, m)
    pv = _ip(x, zv, m)
    a = (G * pu - F * pv) / w2
    b = (E * pv - F * pu) / w2
    return [x[i] - a * zu[i] - b * zv[i] for i in range(4)]


def _point(p, m, out):
    zu, zv, zuu, zuv, zvv = p[0], p[1], p[2], p[3], p[4]
    for i in range(NCOLS):
        out[i] = math.nan
    E = _ip(zu, zu, m)
    F = _ip(zu, zv, m)
    G = _ip(zv, zv, m)
    w2 = E * G - F * F
    out[0], out[1], out[2] = E, F, G
    if E <= 0.0 or G <= 0.0 or w2 <= 0.0:
        out[26] = STATUS_NOT_SPACELIKE
        return
    W = math.sqrt(w2)
    out[3] = W

    s11 = _normal_part(zuu, zu, zv, E, F, G, w2, m)
    s12 = _normal_part(zuv, zu, zv, E, F, G, w2, m)
    s22 = _normal_part(zvv, zu, zv, E, F, G, w2, m)
    H = [(G * s11[i] - 2.0 * F * s12[i] + E * s22[i]) / (2.0 * w2) for i in range(4)]

    sg = -1.0 if m[3] < 0.0 else 1.0
    L = 2.0 * sg * _det4(zu, zv, zuu, zuv) / w2
    M = sg * _det4(zu, zv, zuu, zvv) / w2
    N = 2.0 * sg * _det4(zu, zv, zuv, zvv) / w2
    k = (L * N - M * M) / w2
    vk = (E * N + G * L - 2.0 * F * M) / (2.0 * w2)
    K = (_ip(s11, s22, m) - _ip(s12, s12, m)) / w2
    hq = _ip(H, H, m)
    out[4], out[5], out[6], out[7], out[8], out[9] = L, M, N, k, vk, K
    out[10], out[11], out[12], out[13] = H
    out[14] = hq
    out[25] = vk * vk - k
    if k < -CLASSIFY_TOL:
        out[24] = 2
    elif k > CLASSIFY_TOL:
        out[24] = 1
    elif abs(vk) <= CLASSIFY_TOL:
        out[24] = 0
    else:
        out[24] = 3

    hn = _enorm(H)
    if hn <= MINIMAL_TOL * (1.0 + _enorm(zuu) + _enorm(zvv)):
        out[26] = STATUS_MINIMAL
        return
    if abs(hq) <= NULL_TOL * hn * hn:
        out[26] = STATUS_LIGHTLIKE
        return

    # unit normal orthogonal to H, from the best projected basis vector
    best = -1.0
    lv = None
    for j in range(4):
        e = [0.0, 0.0, 0.0, 0.0]
        e[j] = 1.0
        q = _normal_part(e, zu, zv, E, F, G, w2, m)
        c = _ip(q, H, m) / hq
        q = [q[i] - c * H[i] for i in range(4)]
        nq = _enorm(q)
        if nq > best:
            best = nq
            lv = q
    lq = math.sqrt(abs(_ip(lv, lv, m)))
    lv = [lv[i] / lq for i in range(4)]
    csign = (1.0 if _ip(lv, lv, m) > 0 else -1.0) * (1.0 if hq > 0 else -1.0)

    sE = math.sqrt(E)
    xbar = [zu[i] / sE for i in range(4)]
    ybar = [(sE / W) * (zv[i] - (F / E) * zu[i]) for i in range(4)]

    # II on the orthonormal pair (xbar, ybar)
    a00 = 1.0 / sE
    a01 = -F / (sE * W)
    a11 = sE / W
    lo = a00 * a00 * L
    mo = a00 * a01 * L + a00 * a11 * M
    no = a01 * a01 * L + 2.0 * a01 * a11 * M + a11 * a11 * N
    disc = math.hypot(0.5 * (lo - no), mo)
    umbilical = disc <= UMBILIC_TOL * (1.0 + abs(lo) + abs(no))
    if umbilical:
        # every orthonormal pair is principal: use the diagonal pair
        xa = xb = ya = math.sqrt(0.5)
        yb = -ya
    else:
        phi = 0.5 * math.atan2(2.0 * mo, lo - no)
        d1a, d1b = math.cos(phi), math.sin(phi)
        d2a, d2b = -math.sin(phi), math.cos(phi)
        if d1a < -1e-14 or (abs(d1a) <= 1e-14 and d1b < 0.0):
            d1a, d1b = -d1a, -d1b
        if d2a < -1e-14 or (abs(d2a) <= 1e-14 and d2b < 0.0):
            d2a, d2b = -d2a, -d2b
        if d1b >= d2b:
            xa, xb, ya, yb = d1a, d1b, d2a, d2b
        else:
            xa, xb, ya, yb = d2a, d2b, d1a, d1b
    # coefficients on (zu, zv)
    xu, xv = a00 * xa + a01 * xb, a11 * xb
    yu, yv = a00 * ya + a01 * yb, a11 * yb
    sxy = [xu * yu * s11[i] + (xu * yv + xv * yu) * s12[i] + xv * yv * s22[i] for i in range(4)]
    ip = _ip(sxy, H, m)
    lam = ip / math.sqrt(hq) if hq > 0 else -ip / math.sqrt(-hq)

    proj = csign * _ip(sxy, lv, m)
    if abs(proj) > 1e-12 * (1.0 + _enorm(sxy)):
        flip = proj < 0.0
    else:
        xv4 = [xa * xbar[i] + xb * ybar[i] for i in range(4)]
        yv4 = [ya * xbar[i] + yb * ybar[i] for i in range(4)]
        flip = _det4(xv4, yv4, H, lv) < 0.0
    if flip:
        lv = [-x for x in lv]

    out[15] = lam
    out[20], out[21], out[22], out[23] = lv
    if umbilical:
        # varkappa^2 = k at umbilical points, so a(H) vanishes
        out[16] = out[17] = out[18] = out[19] = 0.0
        out[26] = STATUS_UMBILICAL
        return
    d = vk * vk - k
    if -CLAMP <= d < 0.0:
        d = 0.0
    coef = 0.5 * math.sqrt(d) * lam if d >= 0.0 else math.nan
    out[16], out[17], out[18], out[19] = (coef * x for x in lv)
    out[26] = STATUS_OK


def invariant_rows(parts, metric):
    """Invariant table for stacked partials of shape ``(n, 5, 4)``."""
    parts = np.asarray(parts, dtype=float)
    m = [float(x) for x in metric]
    out = np.empty((parts.shape[0], NCOLS))
    row = [0.0] * NCOLS
    for i in range(parts.shape[0]):
        _point(parts[i].tolist(), m, row)
        out[i] = row
    return out
