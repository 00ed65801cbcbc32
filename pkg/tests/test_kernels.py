import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from minkchen import surface as S
from minkchen.errors import GeometryError
from minkchen._kernels import (COLUMN_INDEX, COLUMNS, NCOLS, STATUS_NAMES, available_backends,
                               default_backend, get_kernels)
from minkchen.mink import EUCLIDEAN, MINKOWSKI
from minkchen.registry import REGISTRY, generic_patches

coef = st.floats(-0.5, 0.5, allow_nan=False)


def _graph_partials(c):
    """Partials of (u, v, f, g) at the origin with f, g given by first and second derivatives."""
    fu, fv, fuu, fuv, fvv, gu, gv, guu, guv, gvv = c
    return S.Partials(np.zeros(4), np.array([1.0, 0.0, fu, gu]), np.array([0.0, 1.0, fv, gv]),
                      np.array([0.0, 0.0, fuu, guu]), np.array([0.0, 0.0, fuv, guv]),
                      np.array([0.0, 0.0, fvv, gvv]))


def _compare(inv, row):
    C = COLUMN_INDEX
    assert STATUS_NAMES[int(row[C["status"]])] == inv.status
    for name, val in (("k", inv.k), ("varkappa", inv.varkappa), ("K", inv.K),
                      ("H_norm2", inv.H_norm2)):
        assert row[C[name]] == pytest.approx(val, abs=1e-10)
    assert np.allclose(row[C["H"]], inv.H, atol=1e-10)
    if inv.status in ("ok", "umbilical"):
        assert row[C["lambda"]] == pytest.approx(inv.lambda_, abs=1e-9)
        assert np.allclose(row[C["l"]], inv.l, atol=1e-9)
        assert np.allclose(row[C["allied"]], inv.allied, atol=1e-9)


class TestLayout:
    def test_column_count(self):
        assert len(COLUMNS) == NCOLS == 27
        assert COLUMN_INDEX["H"] == slice(10, 14)

    def test_backends(self):
        assert "python" in available_backends()
        assert default_backend() in available_backends()

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("MINKCHEN_BACKEND", "python")
        assert get_kernels().NAME == "python"

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            get_kernels("fortran")


class TestPythonKernel:
    @given(st.lists(coef, min_size=10, max_size=10), st.sampled_from(["mink", "euc"]))
    def test_matches_frame_route(self, c, amb):
        metric = MINKOWSKI if amb == "mink" else EUCLIDEAN
        p = _graph_partials(c)
        try:
            inv = S.evaluate_partials(p, metric)
        except GeometryError:
            # non-spacelike tangent planes are reported by the kernel instead
            row = get_kernels("python").invariant_rows(p.stack()[None], metric)[0]
            assert STATUS_NAMES[int(row[COLUMN_INDEX["status"]])] == "not-spacelike"
            return
        row = get_kernels("python").invariant_rows(p.stack()[None], metric)[0]
        _compare(inv, row)

    @pytest.mark.parametrize("entry", REGISTRY, ids=lambda e: e.key)
    def test_registry(self, entry):
        from minkchen import rotational as rot

        prof = entry.profile()
        patch = rot.build(prof)
        us, vs = np.linspace(*prof.domain, 4)[1:-1], patch.v_samples(3)
        g = S.evaluate_grid(patch, us, vs, "python")
        for i, u in enumerate(us):
            for j, v in enumerate(vs):
                _compare(S.evaluate(patch, u, v), g.table[i, j])

    def test_not_spacelike_row(self):
        parts = np.zeros((1, 5, 4))
        parts[0, 0] = [1, 0, 0, 0]
        parts[0, 1] = [0, 0, 0, 1]
        row = get_kernels("python").invariant_rows(parts, MINKOWSKI)[0]
        assert STATUS_NAMES[int(row[COLUMN_INDEX["status"]])] == "not-spacelike"
        assert np.isnan(row[COLUMN_INDEX["k"]])


@pytest.mark.skipif("cython" not in available_backends(), reason="compiled kernel not built")
class TestBackendAgreement:
    @pytest.mark.parametrize("entry", REGISTRY, ids=lambda e: e.key)
    def test_registry_tables(self, entry):
        from minkchen import rotational as rot

        prof = entry.profile()
        patch = rot.build(prof)
        us, vs = np.linspace(*prof.domain, 9), patch.v_samples(7)
        a = S.evaluate_grid(patch, us, vs, "python").table
        b = S.evaluate_grid(patch, us, vs, "cython").table
        assert np.array_equal(np.isnan(a), np.isnan(b))
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12, equal_nan=True)

    @pytest.mark.parametrize("name", sorted(generic_patches()))
    def test_generic_tables(self, name):
        patch = generic_patches()[name]
        us = vs = np.linspace(-0.4, 0.4, 5)
        a = S.evaluate_grid(patch, us, vs, "python").table
        b = S.evaluate_grid(patch, us, vs, "cython").table
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12, equal_nan=True)

    @given(st.lists(coef, min_size=10, max_size=10))
    def test_random_partials(self, c):
        p = _graph_partials(c).stack()[None]
        a = get_kernels("python").invariant_rows(p, MINKOWSKI)
        b = get_kernels("cython").invariant_rows(p, MINKOWSKI)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12, equal_nan=True)
