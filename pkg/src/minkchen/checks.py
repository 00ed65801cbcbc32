"""Cross-validation suites run by ``minkchen verify``.

Every suite returns a list of :class:`CheckResult` rows, one per profile
(or patch) and quantity, carrying the worst residual seen and the
threshold it was held to.  The suites only read the registry, so a default
run is deterministic.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import rotational as rot
from . import surface as S
from .curve import Ambient
from .errors import GeometryError
from .mink import inner
from .registry import entries, generic_patches

SUITES = ("pipeline", "flatness", "allied", "derivative", "gauss", "second-form", "minimality")

PIPELINE_TOL = 1e-7
PIPELINE_TOL_TABULATED = 1e-4
FLATNESS_TOL = 1e-8
ALLIED_TOL = 1e-8
TRACE_TOL = 1e-7
DERIVATIVE_TOL = 1e-6
GAUSS_TOL = 1e-5
SECOND_FORM_TOL = 1e-9
MINIMALITY_TOL = 1e-7


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    max_residual: float
    threshold: float
    points: int

    @property
    def passed(self):
        # NaN residuals count as failures
        return bool(self.max_residual <= self.threshold)

    def as_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _interior(domain, n):
    a, b = domain
    return np.linspace(a, b, n + 2)[1:-1]


def _patch(entry):
    profile = entry.profile()
    return profile, rot.build(profile)


def _grid(profile, patch, nu, nv):
    return _interior(profile.domain, nu), patch.v_samples(nv)


def _rel(a, b):
    return abs(a - b) / (1.0 + abs(b))


# --------------------------------------------------------------------------
# suites


def check_pipeline(nu=6, nv=5, backend=None):
    """General pipeline against the rotational closed forms."""
    out = []
    for e in entries():
        profile, patch = _patch(e)
        us, vs = _grid(profile, patch, nu, nv)
        g = S.evaluate_grid(patch, us, vs, backend)
        worst = dict.fromkeys(("k", "varkappa", "K", "H_norm2", "abs_lambda"), 0.0)
        for i, u in enumerate(us):
            cf = rot.closed_form_invariants(profile, u)
            for j in range(len(vs)):
                worst["k"] = max(worst["k"], _rel(g["k"][i, j], cf.k))
                worst["varkappa"] = max(worst["varkappa"], abs(g["varkappa"][i, j]))
                worst["K"] = max(worst["K"], _rel(g["K"][i, j], cf.K))
                worst["H_norm2"] = max(worst["H_norm2"], _rel(g["H_norm2"][i, j], cf.H_norm2))
                lam = g["lambda"][i, j]
                if math.isfinite(lam) and math.isfinite(cf.lambda_):
                    worst["abs_lambda"] = max(worst["abs_lambda"],
                                              _rel(abs(lam), abs(cf.lambda_)))
        tol = PIPELINE_TOL_TABULATED if e.tabulated else PIPELINE_TOL
        n = len(us) * len(vs)
        out.extend(CheckResult("pipeline", f"{e.key}:{q}", r, tol, n) for q, r in worst.items())
    return out


def check_flatness(nu=8, nv=8, backend=None):
    """``varkappa`` vanishes on every rotational patch."""
    out = []
    for e in entries():
        profile, patch = _patch(e)
        us, vs = _grid(profile, patch, nu, nv)
        g = S.evaluate_grid(patch, us, vs, backend)
        r = float(np.max(np.abs(g["varkappa"])))
        out.append(CheckResult("flatness", e.key, r, FLATNESS_TOL, g.table.shape[0] * g.table.shape[1]))
    return out


def check_allied(nu=5, nv=4, backend=None):
    """Allied vector: frame route against the batch kernel, plus the trace formula.

    The frame route (:func:`surface.evaluate`) and the batch kernel build
    ``l`` and ``lambda`` independently.  In Euclidean space the allied vector
    is also recomputed from shape-operator traces.
    """
    out = []
    for e in entries():
        profile, patch = _patch(e)
        us, vs = _grid(profile, patch, nu, nv)
        g = S.evaluate_grid(patch, us, vs, backend)
        ident = trace = orth = 0.0
        n = 0
        for i, u in enumerate(us):
            for j, v in enumerate(vs):
                inv = S.evaluate(patch, u, v)
                if inv.status not in ("ok", "umbilical"):
                    continue
                n += 1
                ident = max(ident, float(np.linalg.norm(inv.allied - g["allied"][i, j])))
                orth = max(orth, abs(inner(inv.allied, inv.H, patch.metric)))
                if e.ambient is Ambient.EUCLIDEAN and inv.status == "ok":
                    sig = S.orthonormal_sigmas(inv, patch.partials(u, v))
                    a_tr = S.allied_trace(sig, inv.H, inv.l, patch.metric)
                    trace = max(trace, float(np.linalg.norm(a_tr - inv.allied)))
        if n == 0:
            continue
        out.append(CheckResult("allied", f"{e.key}:identity", ident, ALLIED_TOL, n))
        out.append(CheckResult("allied", f"{e.key}:orthogonal", orth, ALLIED_TOL, n))
        if e.ambient is Ambient.EUCLIDEAN:
            out.append(CheckResult("allied", f"{e.key}:trace", trace, TRACE_TOL, n))
    for name, patch in generic_patches().items():
        us = _interior(patch.u_range, nu)
        vs = _interior(patch.v_range, nv)
        g = S.evaluate_grid(patch, us, vs, backend)
        ident, n = 0.0, 0
        for i, u in enumerate(us):
            for j, v in enumerate(vs):
                inv = S.evaluate(patch, u, v)
                if inv.status != "ok":
                    continue
                n += 1
                ident = max(ident, float(np.linalg.norm(inv.allied - g["allied"][i, j])))
                if patch.metric[3] > 0:
                    sig = S.orthonormal_sigmas(inv, patch.partials(u, v))
                    a_tr = S.allied_trace(sig, inv.H, inv.l, patch.metric)
                    ident = max(ident, float(np.linalg.norm(a_tr - inv.allied)))
        if n:
            out.append(CheckResult("allied", f"{name}:identity", ident, ALLIED_TOL, n))
    return out


def check_derivative(nu=4, nv=4):
    """The eight moving-frame derivative formulas on hyperbolic-type profiles."""
    out = []
    for e in entries(Ambient.HYPERBOLIC, analytic_only=True):
        profile = e.profile()
        worst = dict.fromkeys(rot.DERIVATIVE_EQUATIONS, 0.0)
        us = _interior(profile.domain, nu)
        vs = _interior(rot.HYPERBOLIC_V_RANGE, nv)
        for u in us:
            for v in vs:
                res = rot.derivative_formula_residuals(profile, u, v)
                for k, r in res.items():
                    worst[k] = max(worst[k], r)
        out.append(CheckResult("derivative", e.key, max(worst.values()), DERIVATIVE_TOL,
                               len(us) * len(vs)))
    return out


def check_gauss(nu=5, nv=2):
    """Intrinsic (metric-only) Gauss curvature against ``-r''/r``."""
    out = []
    for e in entries():
        profile, patch = _patch(e)
        us, vs = _grid(profile, patch, nu, nv)
        worst = 0.0
        for u in us:
            jet = profile.jet(u)
            target = -float(jet.d2[2]) / float(jet.p[2])
            for v in vs:
                worst = max(worst, abs(S.gauss_curvature(patch, u, v) - target))
        out.append(CheckResult("gauss", e.key, worst, GAUSS_TOL, len(us) * len(vs)))
    return out


def _second_form_residual(patch, us, vs):
    worst = 0.0
    for u in us:
        for v in vs:
            p = patch.partials(u, v)
            I = S.first_form_from(p.zu, p.zv, patch.metric)
            frame = S.orthonormal_normal_frame(p.zu, p.zv, patch.metric)
            II = S.second_form(S.second_tensor_from(p, frame), I.W)
            ref = S.second_form_oracle(p, I.W, patch.metric)
            scale = 1.0 + abs(ref.L) + abs(ref.M) + abs(ref.N)
            worst = max(worst, (abs(II.L - ref.L) + abs(II.M - ref.M) + abs(II.N - ref.N)) / scale)
    return worst


def check_second_form(nu=4, nv=4):
    """Frame-based ``L, M, N`` against the frame-free determinant oracle.

    Rotational patches have ``L = N = 0``, so non-rotational graphs are
    included to make a sign error in ``L`` or ``N`` observable.
    """
    out = []
    for e in entries(analytic_only=True):
        profile, patch = _patch(e)
        us, vs = _grid(profile, patch, nu, nv)
        out.append(CheckResult("second-form", e.key, _second_form_residual(patch, us, vs),
                               SECOND_FORM_TOL, len(us) * len(vs)))
    for name, patch in generic_patches().items():
        us = _interior(patch.u_range, nu)
        vs = _interior(patch.v_range, nv)
        out.append(CheckResult("second-form", name, _second_form_residual(patch, us, vs),
                               SECOND_FORM_TOL, len(us) * len(vs)))
    return out


def check_minimality(nu=6, nv=5, backend=None):
    """Where ``H`` vanishes, ``varkappa^2 - k`` vanishes too."""
    out = []
    cases = [(e.key, _patch(e)[1]) for e in entries()]
    cases += list(generic_patches().items())
    for name, patch in cases:
        if patch.v_range is None:
            vs = patch.v_samples(nv)
        else:
            vs = _interior(patch.v_range, nv)
        us = _interior(patch.u_range, nu)
        g = S.evaluate_grid(patch, us, vs, backend)
        hn = np.linalg.norm(g["H"], axis=-1)
        mask = hn <= 1e-9
        if not mask.any():
            continue
        r = float(np.max(np.abs(g["minimal_residual"][mask])))
        out.append(CheckResult("minimality", name, r, MINIMALITY_TOL, int(mask.sum())))
    return out


_RUNNERS = {
    "pipeline": check_pipeline,
    "flatness": check_flatness,
    "allied": check_allied,
    "derivative": check_derivative,
    "gauss": check_gauss,
    "second-form": check_second_form,
    "minimality": check_minimality,
}


def run(suites=None, fault=None):
    """Run the named suites (all by default), optionally under an injected fault.

    Raises
    ------
    ValueError
        For an unknown suite name.
    """
    names = SUITES if not suites else tuple(suites)
    bad = [s for s in names if s not in _RUNNERS]
    if bad:
        raise ValueError(f"unknown suite(s): {', '.join(bad)}")
    results = []
    with S.inject_fault(fault):
        for s in names:
            try:
                results.extend(_RUNNERS[s]())
            except GeometryError as exc:
                results.append(CheckResult(s, f"error:{type(exc).__name__}", math.inf, 0.0, 0))
    return results
