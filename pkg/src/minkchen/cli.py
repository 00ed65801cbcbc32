"""Command-line front end: ``minkchen {analyze,classify,construct,export,verify}``.

Every command is deterministic: floats are written with :func:`repr`
(shortest round-trip form), JSON keys are sorted, files use LF line endings
and nothing time- or host-dependent is recorded.

Exit codes: 0 success, 1 failed verification checks, 2 invalid
configuration, 3 geometric precondition failure, 4 empty admissible set.
"""

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import checks
from . import construct as con
from . import rotational as rot
from . import surface as S
from .curve import FAMILIES, Ambient, ProfileCurve, ambient_of, validate
from .errors import BlowUp, GeometryError, MixedRegime, NoAdmissibleRoot
from .rspec import parse_rspec

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG = 2
EXIT_GEOMETRY = 3
EXIT_NO_ROOT = 4

CSV_COLUMNS = ("u", "v", "E", "F", "G", "L", "M", "N", "k", "varkappa", "K", "Hn1", "Hn2",
               "H_norm2", "lambda", "point_class")
_FAMILY_PARAMS = ("R", "a", "omega", "slope", "coeffs", "r")


class ConfigError(Exception):
    """Invalid command-line configuration (exit code 2)."""


# --------------------------------------------------------------------------
# formatting and output


def fmt(x):
    """Shortest round-trip decimal form of a float."""
    return repr(float(x))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if hasattr(x, "value"):
        return x.value
    return x


def dumps(doc):
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _out_dir(args):
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    return out


# --------------------------------------------------------------------------
# configuration parsing


def parse_pair(text, flag):
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError:
        raise ConfigError(f"{flag} expects 'a,b', got {text!r}") from None
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise ConfigError(f"{flag} must be a finite interval with a < b")
    return a, b


def parse_grid(text):
    try:
        nu, nv = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise ConfigError(f"--grid expects NUxNV, got {text!r}") from None
    if nu < 2 or nv < 2:
        raise ConfigError("--grid must be at least 2x2")
    return nu, nv


def family_params(args):
    params = {}
    for name in _FAMILY_PARAMS:
        val = getattr(args, name, None)
        if val is None:
            continue
        if name == "coeffs":
            try:
                val = [float(c) for c in val.split(",")]
            except ValueError:
                raise ConfigError(f"--coeffs expects comma-separated numbers, got {val!r}") from None
        params[name] = val
    return params


def load_profile(args):
    """Profile from ``--profile`` or ``--family``; raises :class:`ConfigError`."""
    if bool(args.profile) == bool(args.family):
        raise ConfigError("give exactly one of --profile or --family")
    if args.profile:
        try:
            with open(args.profile, encoding="utf-8") as fh:
                doc = json.load(fh)
            profile = ProfileCurve.from_spec(doc)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"cannot load profile {args.profile!r}: {exc}") from None
        if args.ambient and ambient_of(args.ambient) is not profile.ambient:
            raise ConfigError(f"--ambient {args.ambient} does not match the profile's "
                              f"{profile.ambient.value!r} tag")
        return profile
    if not args.ambient:
        raise ConfigError("--family requires --ambient")
    domain = parse_pair(args.u_range, "--u-range") if args.u_range else None
    try:
        return ProfileCurve.family(args.family, args.ambient, domain, **family_params(args))
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad family configuration: {exc}") from None


def _u_grid(args, profile, n):
    a, b = profile.domain
    if args.u_range:
        lo, hi = parse_pair(args.u_range, "--u-range")
        slack = 1e-12 * (1.0 + abs(lo) + abs(hi))
        if lo < a - slack or hi > b + slack:
            raise ConfigError(f"--u-range {lo},{hi} leaves the profile domain [{a}, {b}]")
        a, b = lo, hi
    return np.linspace(a, b, n)


def _v_grid(args, patch, n):
    if args.v_range:
        return np.linspace(*parse_pair(args.v_range, "--v-range"), n)
    return patch.v_samples(n)


def _config_echo(args, profile):
    echo = {"command": args.command, "ambient": profile.ambient.value,
            "profile": args.profile, "family": args.family, "params": family_params(args),
            "domain": list(profile.domain)}
    for name in ("grid", "u_range", "v_range", "tol", "projection", "drop", "backend"):
        if hasattr(args, name):
            echo[name] = getattr(args, name)
    return echo


def _require_valid(profile):
    rep = validate(profile)
    if not rep.passed:
        raise GeometryError("profile precondition failed: " + "; ".join(rep.failures))


# --------------------------------------------------------------------------
# commands


def _analysis_rows(profile, patch, us, vs, backend, tol):
    g = S.evaluate_grid(patch, us, vs, backend)
    ptol = S.CLASSIFY_TOL if tol is None else tol
    rows = []
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            frame = rot.rotational_frame(profile, u, v).normal_frame()
            hn1, hn2 = frame.components(g["H"][i, j])
            k, vk = g["k"][i, j], g["varkappa"][i, j]
            rows.append([u, v, g["E"][i, j], g["F"][i, j], g["G"][i, j], g["L"][i, j],
                         g["M"][i, j], g["N"][i, j], k, vk, g["K"][i, j], hn1, hn2,
                         g["H_norm2"][i, j], g["lambda"][i, j],
                         S.classify_point(k, vk, ptol).value])
    return rows, g.backend


def _aggregates(rows):
    col = {name: i for i, name in enumerate(CSV_COLUMNS)}

    def span(values):
        vals = [v for v in values if math.isfinite(v)]
        return (min(vals), max(vals)) if vals else (None, None)

    agg = {}
    for key, values in (("k", [r[col["k"]] for r in rows]),
                        ("K", [r[col["K"]] for r in rows]),
                        ("abs_lambda", [abs(r[col["lambda"]]) for r in rows]),
                        ("H_norm2", [r[col["H_norm2"]] for r in rows])):
        agg[f"{key}_min"], agg[f"{key}_max"] = span(values)
    classes = sorted({r[col["point_class"]] for r in rows})
    agg["point_classes"] = classes
    return agg


def _classification(profile, tol):
    try:
        return rot.chen_classify(profile, tol=tol).as_dict()
    except MixedRegime as exc:
        return {"verdict": None, "error": str(exc), "detail": exc.detail}


def cmd_analyze(args):
    profile = load_profile(args)
    nu, nv = parse_grid(args.grid)
    _require_valid(profile)
    patch = rot.build(profile)
    us, vs = _u_grid(args, profile, nu), _v_grid(args, patch, nv)
    rows, backend = _analysis_rows(profile, patch, us, vs, args.backend, args.tol)
    out = _out_dir(args)
    _write_csv(os.path.join(out, "invariants.csv"), CSV_COLUMNS,
               [[fmt(x) if not isinstance(x, str) else x for x in r] for r in rows])
    args.backend = backend
    summary = {"version": __version__, "table": "invariants.csv", "points": len(rows),
               "aggregates": _aggregates(rows),
               "classification": _classification(profile, args.tol),
               "config": _config_echo(args, profile)}
    _write_text(os.path.join(out, "summary.json"), dumps(summary))
    agg = summary["aggregates"]
    print(f"analyzed {len(rows)} points: k in [{agg['k_min']}, {agg['k_max']}], "
          f"K in [{agg['K_min']}, {agg['K_max']}]")
    return EXIT_OK


def cmd_classify(args):
    profile = load_profile(args)
    _require_valid(profile)
    cls = rot.chen_classify(profile, tol=args.tol)
    doc = {"version": __version__, "classification": cls.as_dict(),
           "config": _config_echo(args, profile)}
    if cls.verdict in (rot.ChenVerdict.HYPERPLANAR, rot.ChenVerdict.MINIMAL):
        w = rot.hyperplane_witness(profile)
        doc["hyperplane_witness"] = {"normal": w.normal, "offset": w.offset,
                                     "max_deviation": w.max_deviation,
                                     "max_normal_derivative": w.max_normal_derivative,
                                     "samples": w.samples}
    if args.out:
        _write_text(os.path.join(_out_dir(args), "classification.json"), dumps(doc))
    print(cls.verdict.value)
    return EXIT_OK


def _write_construction(args, report, blowup=None):
    out = _out_dir(args)
    _write_text(os.path.join(out, "profile.json"), dumps(report.profile.to_spec()))
    for i, seg in enumerate(report.segments if len(report.segments) > 1 else []):
        _write_text(os.path.join(out, f"profile-{i + 1}.json"), dumps(seg.to_spec()))
    doc = {"version": __version__, "target": args.target, "report": report.as_dict(),
           "config": {k: getattr(args, k) for k in ("ambient", "target", "r", "k0", "r0", "r0p",
                                                    "domain", "step", "branch", "theta0")}}
    if blowup is not None:
        doc["blowup"] = str(blowup)
    _write_text(os.path.join(out, "report.json"), dumps(doc))


def cmd_construct(args):
    if not args.ambient:
        raise ConfigError("construct requires --ambient")
    domain = parse_pair(args.domain, "--domain")
    if args.step <= 0:
        raise ConfigError("--step must be positive")
    if args.branch not in (1, -1):
        raise ConfigError("--branch must be 1 or -1")
    amb = ambient_of(args.ambient)
    try:
        if args.target == "minimal":
            if args.r0 is None or args.r0p is None:
                raise ConfigError("--target minimal requires --r0 and --r0p")
            report = con.construct_minimal_profile(amb, args.r0, args.r0p, domain, args.step)
        else:
            if not args.r:
                raise ConfigError(f"--target {args.target} requires --r")
            try:
                r_spec = parse_rspec(args.r)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            if args.target == "chen":
                report = con.construct_chen_profile(amb, r_spec, domain, args.step, args.branch,
                                                    args.theta0)
            else:
                if args.k0 is None:
                    raise ConfigError("--target constant-k requires --k0")
                report = con.construct_constant_k_profile(amb, r_spec, args.k0, domain,
                                                          args.branch, args.step, args.theta0)
    except BlowUp as exc:
        if exc.partial is not None:
            _write_construction(args, exc.partial, exc)
        raise
    _write_construction(args, report)
    print(f"constructed {len(report.segments)} segment(s); "
          f"residual_condition={fmt(report.residual_condition)}")
    return EXIT_OK


_DEFAULT_DROP = {Ambient.HYPERBOLIC: 2, Ambient.ELLIPTIC: 4, Ambient.EUCLIDEAN: 4}


def project(points, projection, drop):
    """Project 4D points to 3D by dropping coordinate ``drop`` (1-based) or stereographically.

    The stereographic map is taken from the pole ``c e4`` with ``c`` one
    plus the largest Euclidean norm of the point set, so it is regular on
    the whole set.
    """
    pts = np.asarray(points, dtype=float)
    if projection == "drop":
        keep = [i for i in range(4) if i != drop - 1]
        return pts[:, keep]
    if projection == "stereographic":
        c = 1.0 + float(np.max(np.linalg.norm(pts, axis=1)))
        return c * pts[:, :3] / (c - pts[:, 3:4])
    raise ConfigError(f"unknown projection {projection!r}")


def cmd_export(args):
    if args.projection not in ("drop", "stereographic"):
        raise ConfigError(f"--projection must be 'drop' or 'stereographic', got {args.projection!r}")
    if args.drop is not None and args.drop not in (1, 2, 3, 4):
        raise ConfigError("--drop must be one of 1, 2, 3, 4")
    profile = load_profile(args)
    nu, nv = parse_grid(args.grid)
    _require_valid(profile)
    patch = rot.build(profile)
    us = _u_grid(args, profile, nu)
    vs = np.linspace(*(parse_pair(args.v_range, "--v-range") if args.v_range
                       else patch.v_grid), nv)
    drop = args.drop or _DEFAULT_DROP[profile.ambient]
    pts = np.array([patch.point(u, v) for u in us for v in vs])
    xyz = project(pts, args.projection, drop)
    g = S.evaluate_grid(patch, us, vs, args.backend)

    lines = [f"# minkchen {__version__} {profile.ambient.value} {nu}x{nv} "
             f"projection={args.projection}" + (f" drop=e{drop}" if args.projection == "drop" else "")]
    lines += ["v " + " ".join(fmt(c) for c in p) for p in xyz]
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b, c, d = a + 1, a + nv, a + nv + 1
            lines.append(f"f {a} {c} {d}")
            lines.append(f"f {a} {d} {b}")
    out = _out_dir(args)
    _write_text(os.path.join(out, "surface.obj"), "\n".join(lines) + "\n")
    rows = []
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            k, vk = g["k"][i, j], g["varkappa"][i, j]
            rows.append([str(i * nv + j + 1), fmt(u), fmt(v), fmt(k), fmt(g["K"][i, j]),
                         S.classify_point(k, vk).value])
    _write_csv(os.path.join(out, "surface_vertices.csv"),
               ("vertex", "u", "v", "k", "K", "point_class"), rows)
    print(f"wrote {len(xyz)} vertices and {2 * (nu - 1) * (nv - 1)} faces")
    return EXIT_OK


def cmd_verify(args):
    suites = []
    for s in args.suite or []:
        suites.extend(x.strip() for x in s.split(",") if x.strip())
    bad = [s for s in suites if s not in checks.SUITES]
    if bad:
        raise ConfigError(f"unknown suite(s): {', '.join(bad)}; "
                          f"choose from {', '.join(checks.SUITES)}")
    results = checks.run(suites or None, fault=args.inject_fault)
    ok = all(r.passed for r in results)
    width = max(len(f"{r.suite}/{r.name}") for r in results)
    for r in results:
        label = f"{r.suite}/{r.name}"
        print(f"{'PASS' if r.passed else 'FAIL'}  {label:<{width}}  "
              f"max={r.max_residual:.3e}  tol={r.threshold:.1e}")
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    if args.out:
        doc = {"version": __version__, "passed": ok, "suites": suites or list(checks.SUITES),
               "checks": [r.as_dict() for r in results]}
        _write_text(os.path.join(_out_dir(args), "verify.json"), dumps(doc))
    return EXIT_OK if ok else EXIT_CHECKS_FAILED


# --------------------------------------------------------------------------
# argument parsing


def _profile_options():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("profile")
    g.add_argument("--ambient", choices=[a.value for a in Ambient])
    g.add_argument("--profile", help="profile-spec JSON file")
    g.add_argument("--family", choices=sorted(FAMILIES), help="analytic profile family")
    g.add_argument("--R", type=float, help="family radius parameter")
    g.add_argument("--a", type=float, help="family scale parameter")
    g.add_argument("--omega", type=float, help="angular rate of the axis-plane curve")
    g.add_argument("--slope", type=float, help="slope of r for linear-r-theta")
    g.add_argument("--coeffs", help="comma-separated polynomial coefficients of r")
    g.add_argument("--r", help="r-spec for the planar family (const:R, cosh:a, poly:..., sqrtquad)")
    g.add_argument("--u-range", help="u interval 'a,b' (defaults to the profile domain)")
    g.add_argument("--v-range", help="v interval 'a,b'")
    g.add_argument("--grid", default="16x16", help="grid size NUxNV (default 16x16)")
    g.add_argument("--tol", type=float, help="classification tolerance")
    g.add_argument("--out", help="output directory")
    g.add_argument("--backend", choices=["python", "cython"],
                   help="batch kernel (default: compiled if available)")
    return p


def build_parser():
    parser = argparse.ArgumentParser(prog="minkchen", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"minkchen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _profile_options()

    sub.add_parser("analyze", parents=[common],
                   help="invariant table (CSV) and summary (JSON) on a grid")
    sub.add_parser("classify", parents=[common], help="Chen classification of a profile")

    c = sub.add_parser("construct", help="integrate a profile for a target condition")
    c.add_argument("--target", required=True, choices=["chen", "constant-k", "minimal"])
    c.add_argument("--ambient", choices=[a.value for a in Ambient])
    c.add_argument("--r", help="r-spec (chen, constant-k)")
    c.add_argument("--k0", type=float, help="target k (constant-k)")
    c.add_argument("--r0", type=float, help="initial r (minimal)")
    c.add_argument("--r0p", type=float, help="initial r' (minimal)")
    c.add_argument("--domain", default="0,2", help="u interval 'a,b' (default 0,2)")
    c.add_argument("--step", type=float, default=con.DEFAULT_STEP, help="RK4 step")
    c.add_argument("--branch", type=int, default=1, help="sign of theta' (1 or -1)")
    c.add_argument("--theta0", type=float, default=0.0, help="initial angle")
    c.add_argument("--out", help="output directory")

    e = sub.add_parser("export", parents=[common], help="OBJ mesh plus per-vertex CSV")
    e.add_argument("--projection", default="drop", help="'drop' (default) or 'stereographic'")
    e.add_argument("--drop", type=int, help="coordinate dropped by the drop projection (1-4)")

    v = sub.add_parser("verify", help="run the cross-validation suites")
    v.add_argument("--suite", action="append",
                   help=f"suite(s) to run, repeatable or comma-separated: {', '.join(checks.SUITES)}")
    v.add_argument("--out", help="also write verify.json into this directory")
    v.add_argument("--inject-fault", help=argparse.SUPPRESS)
    return parser


_COMMANDS = {"analyze": cmd_analyze, "classify": cmd_classify, "construct": cmd_construct,
             "export": cmd_export, "verify": cmd_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"minkchen: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoAdmissibleRoot as exc:
        print(f"minkchen: no admissible root: {exc}", file=sys.stderr)
        return EXIT_NO_ROOT
    except MixedRegime as exc:
        print(f"minkchen: {type(exc).__name__}: {exc}", file=sys.stderr)
        print(dumps({"error": type(exc).__name__, "detail": exc.detail}), end="", file=sys.stderr)
        return EXIT_GEOMETRY
    except GeometryError as exc:
        print(f"minkchen: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY


if __name__ == "__main__":
    sys.exit(main())
