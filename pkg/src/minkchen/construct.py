"""Constructors for profile curves that realize prescribed invariants.

All three constructors reduce the unit-speed constraint to an angle: with
``rho = sqrt(1 + r'^2)`` (hyperbolic) or ``m = sqrt(1 - r'^2)`` (elliptic and
Euclidean) the axis-plane velocity is ``rho (cos t, sin t)``,
``m (cosh t, sinh t)`` or ``m (cos t, sin t)`` respectively, and the
projected curvature is ``kappa1 = rho^2 t'`` (or ``m^2 t'``).  The angle and
the axis-plane coordinates are advanced jointly by classical fixed-step RK4.

Every residual in a :class:`ConstructionReport` is recomputed from the
emitted tabulated profile through :mod:`minkchen.curve`,
:mod:`minkchen.rotational` and :mod:`minkchen.surface`.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import Ambient, ProfileCurve, ambient_of, frenet_from_jet, kappa1_from_jet
from .errors import (BlowUp, DegenerateAcceleration, NoAdmissibleRoot, PreconditionViolation,
                     GeometryError)
from .rotational import build, case_iii_value, chen_classify
from .rspec import parse_rspec
from .surface import evaluate_grid

DEFAULT_STEP = 1e-3
CHECK_POINTS = 201
MIN_SEGMENT = 6


@dataclass
class ConstructionReport:
    """Outcome of a construction.

    ``profile`` is the longest emitted segment; ``segments`` holds all of
    them (several when inadmissible subintervals were excised).
    """

    profile: ProfileCurve
    segments: list
    residual_condition: float
    residual_unit_speed: float
    branch: int
    failures: list
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        return {"residual_condition": self.residual_condition,
                "residual_unit_speed": self.residual_unit_speed,
                "branch": self.branch,
                "failures": [list(f) for f in self.failures],
                "segments": [list(s.domain) for s in self.segments],
                **self.extra}


# --------------------------------------------------------------------------
# angle reduction


@dataclass(frozen=True)
class AngleReduction:
    """Speed factor of the axis-plane velocity and its derivative at one ``u``."""

    rho: float
    drho: float
    r: float
    r1: float
    r2: float


def reduce(ambient, r_spec, u):
    """Angle reduction at ``u``; ``None`` where ``|r'| >= 1`` forbids it."""
    r, r1, r2, _ = r_spec.derivs(u)
    if ambient is Ambient.HYPERBOLIC:
        rho = math.sqrt(1.0 + r1 * r1)
        return AngleReduction(rho, r1 * r2 / rho, r, r1, r2)
    q = 1.0 - r1 * r1
    if q <= 0.0:
        return None
    m = math.sqrt(q)
    return AngleReduction(m, -r1 * r2 / m, r, r1, r2)


def velocity(ambient, rho, theta):
    """Axis-plane velocity ``(x1', x2')`` of unit-speed profiles."""
    if ambient is Ambient.ELLIPTIC:
        return rho * math.cosh(theta), rho * math.sinh(theta)
    return rho * math.cos(theta), rho * math.sin(theta)


def chen_quadratic(ambient, red):
    """Coefficients ``(a, b, c)`` of ``a w^2 + b w + c`` in ``w = theta'^2``.

    Obtained by substituting the angle reduction into the non-trivial Chen
    condition of the given ambient.
    """
    p, dp, r, r2 = red.rho, red.drho, red.r, red.r2
    p2, p4 = p * p, p ** 4
    if ambient is Ambient.HYPERBOLIC:
        A = dp * dp - r2 * r2
        return r * r * p4, 2.0 * r * r * p2 * A + p4, r * r * A * A - r2 * r2
    B = r2 * r2 + dp * dp
    if ambient is Ambient.ELLIPTIC:
        return r * r * p4, p4 - 2.0 * r * r * p2 * B, r * r * B * B - r2 * r2
    return r * r * p4, 2.0 * r * r * p2 * B - p4, r * r * B * B - r2 * r2


def admissible_roots(a, b, c):
    """Real roots ``w > 0`` (``w = 0`` would make ``kappa1`` vanish)."""
    scale = abs(a) + abs(b) + abs(c)
    floor = 1e-12 * (1.0 + scale)
    if abs(a) <= floor:
        roots = [-c / b] if abs(b) > floor else []
    else:
        disc = b * b - 4.0 * a * c
        if disc < -1e-12 * (b * b + abs(4.0 * a * c)):
            return []
        sq = math.sqrt(max(disc, 0.0))
        # numerically stable pair
        qv = -0.5 * (b + math.copysign(sq, b))
        roots = [qv / a, c / qv] if qv != 0.0 else [0.0, 0.0]
    return sorted(w for w in roots if w > floor)


def _select(roots, ref):
    if ref is None:
        return roots[0]
    return min(roots, key=lambda w: (abs(w - ref), w))


def acceleration_norm2(ambient, red, w):
    """``<t', t'>`` of the reduced profile at ``w = theta'^2``."""
    if ambient is Ambient.HYPERBOLIC:
        return red.drho ** 2 + red.rho ** 2 * w - red.r2 ** 2
    if ambient is Ambient.ELLIPTIC:
        return red.drho ** 2 - red.rho ** 2 * w + red.r2 ** 2
    return red.drho ** 2 + red.rho ** 2 * w + red.r2 ** 2


# --------------------------------------------------------------------------
# integration


def _grid(domain, step):
    a, b = (float(x) for x in domain)
    if not a < b:
        raise ValueError("domain must be a nonempty interval")
    if step <= 0:
        raise ValueError("step must be positive")
    n = max(1, int(round((b - a) / step)))
    return np.linspace(a, b, n + 1)


class _Inadmissible(Exception):
    pass


def _integrate_angle(ambient, r_spec, us, theta_rate, theta0=0.0, start=(0.0, 0.0)):
    """RK4 for ``(theta, x1, x2)`` with ``theta' = theta_rate(u, ref)``.

    ``theta_rate`` returns ``(value, new_ref)``; it raises :class:`_Inadmissible`
    when no admissible value exists, which ends the segment.
    Returns the index reached, the state arrays and ``theta'`` at the nodes.
    """
    n = us.size
    th = np.empty(n)
    x1 = np.empty(n)
    x2 = np.empty(n)
    rates = np.empty(n)
    th[0], (x1[0], x2[0]) = theta0, start
    rates[0], ref = theta_rate(us[0], None)

    def rhs(u, theta, ref):
        red = reduce(ambient, r_spec, u)
        if red is None:
            raise _Inadmissible(u)
        rate, _ = theta_rate(u, ref)
        v1, v2 = velocity(ambient, red.rho, theta)
        return rate, v1, v2

    last = 0
    for i in range(n - 1):
        u, h = us[i], us[i + 1] - us[i]
        try:
            k1 = rhs(u, th[i], ref)
            k2 = rhs(u + 0.5 * h, th[i] + 0.5 * h * k1[0], ref)
            k3 = rhs(u + 0.5 * h, th[i] + 0.5 * h * k2[0], ref)
            k4 = rhs(u + h, th[i] + h * k3[0], ref)
            rates[i + 1], ref = theta_rate(us[i + 1], ref)
        except _Inadmissible:
            break
        th[i + 1] = th[i] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        x1[i + 1] = x1[i] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        x2[i + 1] = x2[i] + h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        last = i + 1
    k = last + 1
    return last, th[:k], x1[:k], x2[:k], rates[:k]


def _profile_from(ambient, r_spec, us, x1, x2, th, rates):
    """Tabulated profile carrying the exact node derivatives of the reduction."""
    n = us.size
    r = np.empty(n)
    d1 = np.empty((n, 3))
    d2 = np.empty((n, 3))
    for i, u in enumerate(us):
        red = reduce(ambient, r_spec, u)
        t, w = th[i], rates[i]
        if ambient is Ambient.ELLIPTIC:
            c, s = math.cosh(t), math.sinh(t)
            d2[i, :2] = (red.drho * c + red.rho * w * s, red.drho * s + red.rho * w * c)
        else:
            c, s = math.cos(t), math.sin(t)
            d2[i, :2] = (red.drho * c - red.rho * w * s, red.drho * s + red.rho * w * c)
        d1[i, :2] = (red.rho * c, red.rho * s)
        r[i] = red.r
        d1[i, 2] = red.r1
        d2[i, 2] = red.r2
    return ProfileCurve.from_samples(ambient, us, x1, x2, r, reparametrize=False, d1=d1, d2=d2)


def _check_positive_r(r_spec, us):
    rmin = min(r_spec.derivs(u)[0] for u in us)
    if rmin <= 0:
        raise PreconditionViolation(f"r must be positive on the domain (min r = {rmin:.3e})")


def _check_us(profile, n=CHECK_POINTS):
    """Evenly spread integrator nodes (including both ends) for post-hoc checks."""
    nodes = profile.source.u
    idx = np.unique(np.round(np.linspace(0, nodes.size - 1, min(n, nodes.size))).astype(int))
    return nodes[idx]


def _midcell_us(profile, n=CHECK_POINTS):
    """Midpoints between integrator nodes, where interpolation error shows."""
    nodes = profile.source.u
    idx = np.unique(np.round(np.linspace(0, nodes.size - 2, min(n, nodes.size - 1))).astype(int))
    return 0.5 * (nodes[idx] + nodes[idx + 1])


def _chen_condition(profile, us):
    worst = 0.0
    for u in us:
        jet = profile.jet(u)
        app = frenet_from_jet(jet, profile.metric)
        val = case_iii_value(profile.ambient, app.kappa, kappa1_from_jet(jet), jet.p[2], jet.d2[2])
        worst = max(worst, abs(val))
    return worst


def _minimal_condition(profile, us):
    worst = 0.0
    for u in us:
        jet = profile.jet(u)
        app = frenet_from_jet(jet, profile.metric)
        eps = app.epsilon if profile.ambient.lorentzian else 1
        worst = max(worst, abs(jet.p[2] * app.kappa ** 2 - eps * jet.d2[2]))
    return worst


def _unit_speed_residual(profile):
    m = profile.metric
    worst = 0.0
    for u in _check_us(profile):
        d = profile.jet(u).d1
        worst = max(worst, abs(float(d[0] * d[0] * m[0] + d[1] * d[1] * m[1] + d[2] * d[2] * m[2]) - 1.0))
    return worst


def _pipeline_grid(profile, nu=33, nv=5):
    patch = build(profile)
    return evaluate_grid(patch, _check_us(profile, nu), patch.v_samples(nv))


# --------------------------------------------------------------------------
# Chen profiles


def construct_chen_profile(ambient, r_spec, domain, step=DEFAULT_STEP, branch=1, theta0=0.0):
    """Profile whose rotational surface satisfies the non-trivial Chen condition.

    At each ``u`` the condition becomes a quadratic in ``w = theta'^2``; the
    admissible (positive) root continuous with the previous one is taken and
    ``theta' = branch * sqrt(w)`` is integrated.  Subintervals without an
    admissible root are excised and reported in ``failures``.

    Raises
    ------
    NoAdmissibleRoot
        If no admissible segment of usable length exists.
    DegenerateAcceleration
        If ``<t', t'>`` vanishes or changes sign inside a segment.
    """
    ambient = ambient_of(ambient)
    if isinstance(r_spec, str):
        r_spec = parse_rspec(r_spec)
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    us = _grid(domain, step)
    _check_positive_r(r_spec, us)

    max_root_residual = 0.0

    def w_at(u, ref):
        nonlocal max_root_residual
        red = reduce(ambient, r_spec, u)
        if red is None:
            raise _Inadmissible(u)
        a, b, c = chen_quadratic(ambient, red)
        roots = admissible_roots(a, b, c)
        if not roots:
            raise _Inadmissible(u)
        w = _select(roots, ref)
        val = abs(a * w * w + b * w + c)
        max_root_residual = max(max_root_residual, val / (1.0 + abs(a) + abs(b) + abs(c)))
        return w

    def rate(u, ref):
        w = w_at(u, ref)
        return branch * math.sqrt(w), w

    segments, failures = [], []
    i = 0
    n = us.size
    while i < n:
        try:
            w_at(us[i], None)
        except _Inadmissible:
            j = i
            while j + 1 < n:
                try:
                    w_at(us[j + 1], None)
                    break
                except _Inadmissible:
                    j += 1
            failures.append((float(us[i]), float(us[min(j + 1, n - 1)])))
            i = j + 1
            continue
        last, th, x1, x2, rates = _integrate_angle(ambient, r_spec, us[i:], rate, theta0)
        seg_us = us[i:i + last + 1]
        if seg_us.size >= MIN_SEGMENT:
            _check_acceleration(ambient, r_spec, seg_us, rates)
            segments.append(_profile_from(ambient, r_spec, seg_us, x1, x2, th, rates))
        else:
            failures.append((float(seg_us[0]), float(seg_us[-1])))
        if i + last + 1 < n:
            nxt = i + last + 1
            failures.append((float(us[i + last]), float(us[nxt])))
            i = nxt
        else:
            i = n

    failures = _merge(failures)
    if not segments:
        raise NoAdmissibleRoot(f"no admissible root on {tuple(domain)} for r = {r_spec}")

    cond = max(_chen_condition(seg, _check_us(seg)) for seg in segments)
    speed = max(_unit_speed_residual(seg) for seg in segments)
    main = max(segments, key=lambda s: s.domain[1] - s.domain[0])
    extra = {"max_root_residual": max_root_residual,
             "midcell_residual_condition": float(max(_chen_condition(seg, _midcell_us(seg))
                                                     for seg in segments))}
    try:
        extra["verdict"] = chen_classify(main).verdict.value
    except GeometryError as exc:
        extra["verdict"] = type(exc).__name__
    g = _pipeline_grid(main)
    lam = g["lambda"]
    extra["max_abs_lambda"] = float(np.nanmax(np.abs(lam))) if np.isfinite(lam).any() else math.nan
    return ConstructionReport(main, segments, cond, speed, branch, failures, extra)


def _check_acceleration(ambient, r_spec, us, rates):
    acc = np.array([acceleration_norm2(ambient, reduce(ambient, r_spec, u), w * w)
                    for u, w in zip(us, rates)])
    if np.any(np.abs(acc) <= 1e-12) or (acc.max() > 0 and acc.min() < 0):
        raise DegenerateAcceleration("<t', t'> changes sign along the constructed profile")


def _merge(intervals):
    out = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


# --------------------------------------------------------------------------
# constant k


def construct_constant_k_profile(ambient, r_spec, k0, domain, branch=1, step=DEFAULT_STEP,
                                 theta0=0.0):
    """Profile with ``k = k0 < 0`` via ``kappa1 = branch * r * sqrt(-k0)``.

    Raises
    ------
    DegenerateAcceleration
        If ``<t', t'>`` vanishes or changes sign.
    """
    ambient = ambient_of(ambient)
    if isinstance(r_spec, str):
        r_spec = parse_rspec(r_spec)
    if not k0 < 0:
        raise PreconditionViolation("k0 must be negative")
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    us = _grid(domain, step)
    _check_positive_r(r_spec, us)
    c = math.sqrt(-k0)

    def rate(u, ref):
        red = reduce(ambient, r_spec, u)
        if red is None:
            raise _Inadmissible(u)
        return branch * red.r * c / red.rho ** 2, None

    for u in us:
        if reduce(ambient, r_spec, u) is None:
            raise PreconditionViolation(f"|r'| >= 1 at u={u}")
    last, th, x1, x2, rates = _integrate_angle(ambient, r_spec, us, rate, theta0)
    _check_acceleration(ambient, r_spec, us, rates)
    prof = _profile_from(ambient, r_spec, us, x1, x2, th, rates)

    g = _pipeline_grid(prof)
    k = g["k"]
    K = g["K"]
    extra = {"k_mean": float(np.mean(k)), "k_std": float(np.std(k)),
             "K_mean": float(np.mean(K)), "K_std": float(np.std(K))}
    return ConstructionReport(prof, [prof], float(np.max(np.abs(k - k0))),
                              _unit_speed_residual(prof), branch, [], extra)


# --------------------------------------------------------------------------
# minimal profiles


def minimal_rhs(ambient, r, r1):
    """``r''`` from the minimality ODE of the planar (``kappa1 = 0``) profile."""
    if ambient is Ambient.HYPERBOLIC:
        return -(1.0 + r1 * r1) / r
    return (1.0 - r1 * r1) / r


def construct_minimal_profile(ambient, r0, r0p, domain, step=DEFAULT_STEP):
    """Planar profile (``x2 = 0``) whose rotational surface is minimal.

    The state ``(r, r', x1)`` is advanced by RK4 from ``(r0, r0p, 0)``.

    Raises
    ------
    BlowUp
        If ``r`` collapses or ``r'`` degenerates (``|r'| -> 1`` in the
        elliptic/Euclidean case, ``|r'| -> inf`` in the hyperbolic case)
        inside the domain.  The exception carries the reached endpoint as
        ``reached`` and, when long enough, the truncated report as
        ``partial``.
    """
    ambient = ambient_of(ambient)
    if r0 <= 0:
        raise PreconditionViolation("r0 must be positive")
    hyperbolic = ambient is Ambient.HYPERBOLIC
    if not hyperbolic and abs(r0p) >= 1:
        raise PreconditionViolation("|r0p| must be below 1")
    us = _grid(domain, step)
    r_floor = BLOWUP_R_FRACTION * r0

    def f(y):
        r, r1, _ = y
        if r <= r_floor or (hyperbolic and abs(r1) >= BLOWUP_SLOPE) or (
                not hyperbolic and 1.0 - abs(r1) <= BLOWUP_MARGIN):
            raise _Inadmissible(y)
        speed = math.sqrt(1.0 + r1 * r1) if hyperbolic else math.sqrt(1.0 - r1 * r1)
        return np.array([r1, minimal_rhs(ambient, r, r1), speed])

    ys = [np.array([float(r0), float(r0p), 0.0])]
    for i in range(us.size - 1):
        h = us[i + 1] - us[i]
        y = ys[-1]
        try:
            k1 = f(y)
            k2 = f(y + 0.5 * h * k1)
            k3 = f(y + 0.5 * h * k2)
            k4 = f(y + h * k3)
            y_new = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            f(y_new)
        except _Inadmissible:
            break
        ys.append(y_new)
    ys = np.array(ys)
    seg_us = us[: len(ys)]
    report = None
    if seg_us.size >= MIN_SEGMENT:
        report = _minimal_report(ambient, seg_us, ys)
    if seg_us.size < us.size:
        exc = BlowUp(f"minimal profile degenerates after u={seg_us[-1]:.6g}")
        exc.reached = float(seg_us[-1])
        exc.partial = report
        raise exc
    return report


BLOWUP_R_FRACTION = 1e-3
BLOWUP_SLOPE = 1e3
BLOWUP_MARGIN = 1e-6


def _minimal_report(ambient, us, ys):
    r, r1 = ys[:, 0], ys[:, 1]
    n = us.size
    r2 = np.array([minimal_rhs(ambient, a, b) for a, b in zip(r, r1)])
    if ambient is Ambient.HYPERBOLIC:
        speed = np.sqrt(1.0 + r1 * r1)
        dspeed = r1 * r2 / speed
    else:
        speed = np.sqrt(1.0 - r1 * r1)
        dspeed = -r1 * r2 / speed
    zeros = np.zeros(n)
    d1 = np.column_stack([speed, zeros, r1])
    d2 = np.column_stack([dspeed, zeros, r2])
    prof = ProfileCurve.from_samples(ambient, us, ys[:, 2], zeros, r, reparametrize=False,
                                     d1=d1, d2=d2)
    cond = _minimal_condition(prof, _check_us(prof))
    g = _pipeline_grid(prof)
    extra = {"reached": float(us[-1]),
             "midcell_residual_condition": float(_minimal_condition(prof, _midcell_us(prof))),
             "max_H_norm": float(np.max(np.linalg.norm(g["H"], axis=-1)))}
    try:
        extra["verdict"] = chen_classify(prof).verdict.value
    except GeometryError as exc:
        extra["verdict"] = type(exc).__name__
    return ConstructionReport(prof, [prof], cond, _unit_speed_residual(prof), 0, [], extra)
