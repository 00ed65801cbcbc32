"""Acceptance criteria, one test each.

Every test logs a ``PASS criterion N`` or ``FAIL criterion N`` line, which
is repeated in the ``acceptance criteria`` section of the pytest summary.
Run ``pytest tests/test_acceptance.py -v`` to see only these.
"""

import math
import subprocess
import sys

import numpy as np

from minkchen import construct as con
from minkchen import rotational as rot
from minkchen import surface as S
from minkchen.curve import Ambient, ProfileCurve, kappa1
from minkchen.mink import inner
from minkchen.registry import BY_KEY, REGISTRY, entries, generic_patches


def _interior(a, b, n):
    return np.linspace(a, b, n + 2)[1:-1]


def _grid(entry, nu, nv):
    profile = entry.profile()
    patch = rot.build(profile)
    us, vs = np.linspace(*profile.domain, nu), patch.v_samples(nv)
    return profile, patch, us, vs, S.evaluate_grid(patch, us, vs)


def test_flat_normal_connection(criterion):
    with criterion(1, "varkappa vanishes on hyperbolic and elliptic rotational surfaces") as note:
        hyp = entries(Ambient.HYPERBOLIC)
        ell = entries(Ambient.ELLIPTIC)
        assert len(hyp) >= 5 and len(ell) >= 5
        worst = 0.0
        for e in hyp + ell:
            g = _grid(e, 32, 32)[-1]
            vk = g["varkappa"]
            assert np.isfinite(vk).all(), e.key
            worst = max(worst, float(np.max(np.abs(vk))))
        note["detail"] = f"{len(hyp)} hyperbolic + {len(ell)} elliptic profiles, max |varkappa| = {worst:.2e}"
        assert worst <= 1e-8


def test_closed_form_agreement(criterion):
    with criterion(2, "pipeline k and K match -kappa1^2/r^2 and -r''/r") as note:
        wk = wK = 0.0
        analytic = entries(analytic_only=True)
        for e in analytic:
            profile, _, us, vs, g = _grid(e, 16, 8)
            for i, u in enumerate(us):
                jet = profile.jet(u)
                r, r2 = float(jet.p[2]), float(jet.d2[2])
                k_ref = -kappa1(profile, u) ** 2 / r ** 2
                K_ref = -r2 / r
                k, K = g["k"][i], g["K"][i]
                wk = max(wk, float(np.max(np.abs(k - k_ref) / (1 + np.abs(k)))))
                wK = max(wK, float(np.max(np.abs(K - K_ref) / (1 + np.abs(K)))))
        note["detail"] = f"{len(analytic)} analytic profiles, k {wk:.2e}, K {wK:.2e}"
        assert wk <= 1e-7 and wK <= 1e-7


def test_gauss_oracle(criterion):
    with criterion(3, "intrinsic K agrees with -r''/r on every registry profile") as note:
        worst = 0.0
        for e in REGISTRY:
            profile = e.profile()
            patch = rot.build(profile)
            for u in _interior(*profile.domain, 6):
                jet = profile.jet(u)
                target = -float(jet.d2[2]) / float(jet.p[2])
                for v in patch.v_samples(3):
                    worst = max(worst, abs(S.gauss_curvature(patch, u, v) - target))
        note["detail"] = f"{len(REGISTRY)} profiles, max deviation {worst:.2e}"
        assert worst <= 1e-5


def test_allied_identity(criterion):
    with criterion(4, "allied vector identity and Euclidean trace formula") as note:
        ident = trace = 0.0
        n = 0
        cases = [(e.key, rot.build(e.profile())) for e in REGISTRY]
        cases += list(generic_patches().items())
        for name, patch in cases:
            us = _interior(*patch.u_range, 5)
            vs = patch.v_samples(4) if patch.v_range is None else _interior(*patch.v_range, 4)
            g = S.evaluate_grid(patch, us, vs)
            for i, u in enumerate(us):
                for j, v in enumerate(vs):
                    inv = S.evaluate(patch, u, v)
                    if inv.status not in ("ok", "umbilical"):
                        continue
                    n += 1
                    # frame route: the closed expression; batch kernel: independent code path
                    d = inv.varkappa ** 2 - inv.k
                    rhs = 0.5 * math.sqrt(max(d, 0.0)) * inv.lambda_ * inv.l
                    ident = max(ident, float(np.linalg.norm(g["allied"][i, j] - rhs)))
                    if patch.metric[3] > 0 and inv.status == "ok":
                        sig = S.orthonormal_sigmas(inv, patch.partials(u, v))
                        a_tr = S.allied_trace(sig, inv.H, inv.l, patch.metric)
                        trace = max(trace, float(np.linalg.norm(a_tr - g["allied"][i, j])))
        note["detail"] = f"{n} non-null points, identity {ident:.2e}, trace {trace:.2e}"
        assert n > 0
        assert ident <= 1e-8 and trace <= 1e-7


def test_worked_profile_verdicts(criterion):
    with criterion(5, "the four worked profiles classify as expected") as note:
        V = rot.ChenVerdict
        pc = BY_KEY["hyp-pseudocircle"].profile()
        assert rot.chen_classify(pc).verdict is V.HYPERPLANAR
        dev = rot.hyperplane_witness(pc).max_deviation
        assert dev <= 1e-8

        cat = ProfileCurve.family("catenary", "elliptic")
        assert rot.chen_classify(cat).verdict is V.MINIMAL
        g = S.evaluate_grid(rot.build(cat), cat.grid(16), rot.build(cat).v_samples(16))
        hmax = float(np.max(np.linalg.norm(g["H"], axis=-1)))
        assert hmax <= 1e-7

        circ = ProfileCurve.family("euclid-circle", "euclidean", R=1.0)
        assert rot.chen_classify(circ).verdict is V.NON_TRIVIAL
        patch = rot.build(circ)
        g = S.evaluate_grid(patch, _interior(*circ.domain, 16), patch.v_samples(16))
        lam_c = float(np.max(np.abs(g["lambda"])))
        assert lam_c <= 1e-8

        r2 = ProfileCurve.family("constant-r-theta", "elliptic", (-1.0, 1.0), R=2.0, omega=1.0)
        assert rot.chen_classify(r2).verdict is V.NOT_CHEN
        patch = rot.build(r2)
        g = S.evaluate_grid(patch, r2.grid(16), patch.v_samples(16))
        lam_r2 = float(np.max(np.abs(g["lambda"] - 5 / (4 * math.sqrt(3)))))
        assert lam_r2 <= 1e-6
        note["detail"] = (f"witness {dev:.1e}, |H| {hmax:.1e}, |lambda| {lam_c:.1e}, "
                          f"lambda error {lam_r2:.1e}")


def test_constructor_soundness(criterion):
    with criterion(6, "constant-k, minimal and Chen constructors") as note:
        ck = con.construct_constant_k_profile("hyperbolic", "const:1", -1.0, (0.0, 2.0))
        assert ck.residual_condition <= 1e-8 and ck.extra["k_std"] <= 1e-8

        mn = con.construct_minimal_profile("elliptic", 1.0, 0.0, (0.0, 2.0))
        rdev = max(abs(mn.profile.jet(u).p[2] - math.sqrt(u * u + 1))
                   for u in np.linspace(0.0, 2.0, 201))
        assert rdev <= 1e-6

        tdev = 0.0
        for branch in (1, -1):
            ch = con.construct_chen_profile("euclidean", "const:1", (0.0, 2.0), branch=branch)
            # with r = 1 the speed factor is 1, so kappa1 = theta'
            tdev = max(tdev, max(abs(kappa1(ch.profile, u) - branch)
                                 for u in ch.profile.source.u))
            assert rot.chen_classify(ch.profile).verdict is rot.ChenVerdict.NON_TRIVIAL
        assert tdev <= 1e-9
        note["detail"] = (f"|k+1| {ck.residual_condition:.1e}, std(k) {ck.extra['k_std']:.1e}, "
                          f"r error {rdev:.1e}, theta' error {tdev:.1e}")


def test_derivative_formulas(criterion):
    with criterion(7, "moving-frame derivative formulas on the pseudocircle surface") as note:
        profile = BY_KEY["hyp-pseudocircle"].profile()
        worst = 0.0
        for u in _interior(*profile.domain, 16):
            for v in np.linspace(*rot.HYPERBOLIC_V_RANGE, 16):
                res = rot.derivative_formula_residuals(profile, u, v)
                assert len(res) == 8
                worst = max(worst, max(res.values()))
        note["detail"] = f"16x16 grid, max residual {worst:.2e}"
        assert worst <= 1e-6


def test_minimality_consistency(criterion):
    with criterion(8, "varkappa^2 - k vanishes wherever H does") as note:
        cases = [rot.build(e.profile()) for e in REGISTRY] + list(generic_patches().values())
        worst, n = 0.0, 0
        for patch in cases:
            us = np.linspace(*patch.u_range, 16)
            vs = patch.v_samples(16) if patch.v_range is None else np.linspace(*patch.v_range, 16)
            g = S.evaluate_grid(patch, us, vs)
            mask = np.linalg.norm(g["H"], axis=-1) <= 1e-9
            if mask.any():
                n += int(mask.sum())
                vk, k = g["varkappa"][mask], g["k"][mask]
                worst = max(worst, float(np.max(np.abs(vk * vk - k))))
        note["detail"] = f"{n} minimal points, max |varkappa^2 - k| {worst:.2e}"
        assert n > 0 and worst <= 1e-7


def test_determinism(criterion, tmp_path):
    with criterion(9, "repeated verify and analyze runs are byte-identical") as note:
        snapshots = []
        for run in ("first", "second"):
            out = tmp_path / run
            for argv in (["verify", "--out", str(out)],
                         ["analyze", "--ambient", "elliptic", "--family", "constant-r-theta",
                          "--R", "2", "--grid", "32x32", "--out", str(out)]):
                subprocess.run([sys.executable, "-m", "minkchen.cli", *argv], check=True,
                               capture_output=True)
            snapshots.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
        assert sorted(snapshots[0]) == ["invariants.csv", "summary.json", "verify.json"]
        note["detail"] = f"{len(snapshots[0])} files compared"
        assert snapshots[0] == snapshots[1]


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
