import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from minkchen import cli
from minkchen.curve import ProfileCurve


def run(*argv):
    return cli.main([str(a) for a in argv])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def load(path):
    with open(path) as fh:
        return json.load(fh)


class TestAnalyze:
    def test_elliptic_r2(self, tmp_path):
        code = run("analyze", "--ambient", "elliptic", "--family", "constant-r-theta", "--R", 2,
                   "--grid", "32x32", "--out", tmp_path)
        assert code == 0
        agg = load(tmp_path / "summary.json")["aggregates"]
        assert agg["k_min"] == pytest.approx(-0.25, abs=1e-9)
        assert agg["k_max"] == pytest.approx(-0.25, abs=1e-9)

    def test_pseudocircle_flat(self, tmp_path):
        assert run("analyze", "--ambient", "hyperbolic", "--family", "mink-pseudocircle",
                   "--grid", "16x16", "--out", tmp_path) == 0
        rows = read_csv(tmp_path / "invariants.csv")
        assert len(rows) == 256
        assert {r["point_class"] for r in rows} == {"Flat"}
        assert all(float(r["K"]) == pytest.approx(-1.0, abs=1e-9) for r in rows)

    def test_columns(self, tmp_path):
        run("analyze", "--ambient", "euclidean", "--family", "euclid-circle", "--grid", "4x4",
            "--out", tmp_path)
        with open(tmp_path / "invariants.csv", newline="") as fh:
            header = next(csv.reader(fh))
        assert header == ["u", "v", "E", "F", "G", "L", "M", "N", "k", "varkappa", "K", "Hn1",
                          "Hn2", "H_norm2", "lambda", "point_class"]

    def test_aggregates_match_table(self, tmp_path):
        run("analyze", "--ambient", "hyperbolic", "--family", "linear-r-theta", "--R", 1.5,
            "--omega", 1.2, "--slope", 0.3, "--grid", "6x5", "--out", tmp_path)
        rows = read_csv(tmp_path / "invariants.csv")
        agg = load(tmp_path / "summary.json")["aggregates"]
        ks = [float(r["k"]) for r in rows]
        assert agg["k_min"] == min(ks)
        assert agg["k_max"] == max(ks)
        assert agg["abs_lambda_max"] == max(abs(float(r["lambda"])) for r in rows)

    def test_lf_line_endings(self, tmp_path):
        run("analyze", "--ambient", "elliptic", "--family", "catenary", "--grid", "3x3",
            "--out", tmp_path)
        data = (tmp_path / "invariants.csv").read_bytes()
        assert b"\r" not in data and data.endswith(b"\n")

    @pytest.mark.parametrize("grid", ["1x1", "2x1", "abc", "0x4"])
    def test_bad_grid(self, tmp_path, grid):
        assert run("analyze", "--ambient", "elliptic", "--family", "catenary", "--grid", grid,
                   "--out", tmp_path) == 2

    def test_u_range_outside_tabulated_domain(self, tmp_path):
        from minkchen.registry import BY_KEY

        spec = tmp_path / "tab.json"
        spec.write_text(json.dumps(BY_KEY["ell-spiral-tab"].profile().to_spec()))
        assert run("analyze", "--profile", spec, "--u-range=-5,5", "--out", tmp_path) == 2

    def test_u_range_sets_family_domain(self, tmp_path):
        assert run("analyze", "--ambient", "elliptic", "--family", "catenary",
                   "--u-range=0,2", "--grid", "3x3", "--out", tmp_path) == 0
        us = {float(r["u"]) for r in read_csv(tmp_path / "invariants.csv")}
        assert us == {0.0, 1.0, 2.0}

    def test_missing_profile(self, tmp_path):
        assert run("analyze", "--ambient", "elliptic", "--out", tmp_path) == 2

    def test_ambient_mismatch(self, tmp_path):
        spec = tmp_path / "p.json"
        spec.write_text(json.dumps(ProfileCurve.family("catenary", "elliptic").to_spec()))
        assert run("analyze", "--ambient", "hyperbolic", "--profile", spec,
                   "--out", tmp_path) == 2

    def test_geometric_failure(self, tmp_path, capsys):
        # r vanishes identically, so profile validation fails
        spec = tmp_path / "p.json"
        us = np.linspace(-1, 1, 41)
        doc = {"ambient": "euclidean",
               "source": {"samples": {"u": us.tolist(), "x1": us.tolist(),
                                      "x2": [0.0] * 41, "r": (0.0 * us).tolist()}}}
        spec.write_text(json.dumps(doc))
        assert run("analyze", "--profile", spec, "--out", tmp_path) == 3
        assert "minkchen:" in capsys.readouterr().err


class TestClassify:
    @pytest.mark.parametrize("args,verdict", [
        (["--ambient", "elliptic", "--family", "catenary"], "MinimalTrivialChen"),
        (["--ambient", "hyperbolic", "--family", "mink-pseudocircle"], "HyperplanarTrivialChen"),
        (["--ambient", "euclidean", "--family", "euclid-circle"], "NonTrivialChen"),
        (["--ambient", "elliptic", "--family", "constant-r-theta", "--R", "2"], "NotChen"),
    ])
    def test_verdicts(self, tmp_path, capsys, args, verdict):
        assert run("classify", *args, "--out", tmp_path) == 0
        assert capsys.readouterr().out.strip() == verdict
        doc = load(tmp_path / "classification.json")
        assert doc["classification"]["verdict"] == verdict

    def test_witness(self, tmp_path):
        run("classify", "--ambient", "hyperbolic", "--family", "mink-pseudocircle",
            "--out", tmp_path)
        w = load(tmp_path / "classification.json")["hyperplane_witness"]
        assert w["max_deviation"] <= 1e-8
        assert abs(w["normal"][1]) == pytest.approx(1.0)

    def test_mixed_regime(self, tmp_path, capsys, mixed_regime_profile):
        spec = tmp_path / "mixed.json"
        spec.write_text(json.dumps(mixed_regime_profile.to_spec()))
        assert run("classify", "--profile", spec) == 3
        err = capsys.readouterr().err
        assert "MixedRegime" in err and "n_small" in err


class TestConstruct:
    def test_constant_k(self, tmp_path):
        assert run("construct", "--target", "constant-k", "--ambient", "hyperbolic",
                   "--r", "const:1", "--k0", -1, "--out", tmp_path) == 0
        rep = load(tmp_path / "report.json")["report"]
        assert rep["residual_condition"] <= 1e-8

    def test_minimal(self, tmp_path):
        assert run("construct", "--target", "minimal", "--ambient", "elliptic", "--r0", 1,
                   "--r0p", 0, "--out", tmp_path) == 0
        prof = ProfileCurve.from_spec(load(tmp_path / "profile.json"))
        for u in np.linspace(0, 2, 11):
            assert prof.jet(u).p[2] == pytest.approx(math.sqrt(u * u + 1), abs=1e-6)

    def test_no_admissible_root(self, tmp_path):
        assert run("construct", "--target", "chen", "--ambient", "hyperbolic", "--r", "const:1",
                   "--out", tmp_path) == 4

    def test_blow_up_keeps_partial_report(self, tmp_path):
        assert run("construct", "--target", "minimal", "--ambient", "hyperbolic", "--r0", 1,
                   "--r0p", 0, "--out", tmp_path) == 3
        doc = load(tmp_path / "report.json")
        assert "blowup" in doc and doc["report"]["reached"] < 2.0

    @pytest.mark.parametrize("argv", [
        ["--target", "chen", "--r", "const:1"],
        ["--target", "chen", "--ambient", "euclidean"],
        ["--target", "chen", "--ambient", "euclidean", "--r", "nonsense:1"],
        ["--target", "constant-k", "--ambient", "euclidean", "--r", "const:1"],
        ["--target", "minimal", "--ambient", "elliptic", "--r0", "1"],
        ["--target", "chen", "--ambient", "euclidean", "--r", "const:1", "--branch", "2"],
        ["--target", "chen", "--ambient", "euclidean", "--r", "const:1", "--domain", "2,0"],
    ])
    def test_config_errors(self, tmp_path, argv):
        assert run("construct", *argv, "--out", tmp_path) == 2

    @pytest.mark.parametrize("argv,verdict", [
        (["--target", "chen", "--ambient", "euclidean", "--r", "const:1"], "NonTrivialChen"),
        (["--target", "minimal", "--ambient", "elliptic", "--r0", "1", "--r0p", "0"],
         "MinimalTrivialChen"),
    ])
    def test_round_trip(self, tmp_path, capsys, argv, verdict):
        assert run("construct", *argv, "--out", tmp_path) == 0
        capsys.readouterr()
        assert run("classify", "--profile", tmp_path / "profile.json") == 0
        assert capsys.readouterr().out.strip() == verdict


class TestExport:
    def test_counts(self, tmp_path):
        assert run("export", "--ambient", "elliptic", "--family", "catenary", "--grid", "16x16",
                   "--out", tmp_path) == 0
        lines = (tmp_path / "surface.obj").read_text().splitlines()
        assert sum(ln.startswith("v ") for ln in lines) == 256
        assert sum(ln.startswith("f ") for ln in lines) == 450
        assert len(read_csv(tmp_path / "surface_vertices.csv")) == 256

    def test_faces_reference_vertices(self, tmp_path):
        run("export", "--ambient", "euclidean", "--family", "euclid-circle", "--grid", "5x4",
            "--out", tmp_path)
        lines = (tmp_path / "surface.obj").read_text().splitlines()
        idx = [int(t) for ln in lines if ln.startswith("f ") for t in ln.split()[1:]]
        assert min(idx) == 1 and max(idx) == 20

    def test_drop_e2_isometry(self, tmp_path):
        # planar hyperbolic profile: x2 vanishes, so dropping e2 loses nothing
        assert run("export", "--ambient", "hyperbolic", "--family", "planar", "--r", "cosh:0.5",
                   "--grid", "6x5", "--out", tmp_path) == 0
        verts = np.array([[float(t) for t in ln.split()[1:]]
                          for ln in (tmp_path / "surface.obj").read_text().splitlines()
                          if ln.startswith("v ")])
        from minkchen import rotational as rot

        prof = ProfileCurve.family("planar", "hyperbolic", r="cosh:0.5")
        patch = rot.build(prof)
        us = np.linspace(*prof.domain, 6)
        vs = np.linspace(*patch.v_grid, 5)
        pts = np.array([patch.point(u, v) for u in us for v in vs])
        assert np.max(np.abs(pts[:, 1])) == 0.0
        sig3 = np.array([1.0, 1.0, -1.0])
        d4 = pts[:, None, :] - pts[None, :, :]
        d3 = verts[:, None, :] - verts[None, :, :]
        g4 = np.einsum("ijk,k,ijk->ij", d4, np.array([1.0, 1.0, 1.0, -1.0]), d4)
        g3 = np.einsum("ijk,k,ijk->ij", d3, sig3, d3)
        assert np.allclose(g3, g4, rtol=0, atol=1e-12)

    def test_stereographic(self, tmp_path):
        assert run("export", "--ambient", "euclidean", "--family", "euclid-circle",
                   "--projection", "stereographic", "--grid", "4x4", "--out", tmp_path) == 0
        text = (tmp_path / "surface.obj").read_text()
        assert "projection=stereographic" in text

    @pytest.mark.parametrize("argv", [["--projection", "orthographic"], ["--drop", "7"]])
    def test_bad_projection(self, tmp_path, argv):
        assert run("export", "--ambient", "euclidean", "--family", "euclid-circle", *argv,
                   "--out", tmp_path) == 2


class TestVerify:
    def test_gauss_only(self, tmp_path, capsys):
        assert run("verify", "--suite", "gauss", "--out", tmp_path) == 0
        doc = load(tmp_path / "verify.json")
        assert {c["suite"] for c in doc["checks"]} == {"gauss"}
        out = capsys.readouterr().out
        assert all(ln.startswith(("PASS", "FAIL")) for ln in out.splitlines()[:-1])

    def test_comma_separated(self, tmp_path):
        assert run("verify", "--suite", "gauss,flatness", "--out", tmp_path) == 0
        doc = load(tmp_path / "verify.json")
        assert {c["suite"] for c in doc["checks"]} == {"gauss", "flatness"}

    def test_injected_fault_fails(self, capsys):
        assert run("verify", "--suite", "second-form", "--inject-fault", "second-form-sign") == 1
        assert "FAIL  second-form/mink-graph" in capsys.readouterr().out

    def test_unknown_suite(self):
        assert run("verify", "--suite", "nope") == 2


class TestDeterminism:
    def test_repeat_runs_identical(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            d = tmp_path / name
            run("analyze", "--ambient", "hyperbolic", "--family", "linear-r-theta", "--R", 1.5,
                "--omega", 1.2, "--slope", 0.3, "--grid", "8x8", "--out", d)
            run("verify", "--suite", "flatness,gauss", "--out", d)
            outs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
        assert outs[0] == outs[1]

    def test_floats_round_trip(self, tmp_path):
        run("analyze", "--ambient", "elliptic", "--family", "constant-r-theta", "--R", 2,
            "--grid", "3x3", "--out", tmp_path)
        for r in read_csv(tmp_path / "invariants.csv"):
            assert repr(float(r["k"])) == r["k"]


def test_console_script_version():
    out = subprocess.run([sys.executable, "-m", "minkchen.cli", "--version"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.startswith("minkchen ")
