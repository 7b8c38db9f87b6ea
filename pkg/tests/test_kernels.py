import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sparsepredict import _kernels as K

pytestmark = pytest.mark.skipif(K.numba is None, reason="numba not installed")


def _grid(seed, rows, m):
    rng = np.random.default_rng(seed)
    return np.ascontiguousarray(rng.standard_normal((rows, m)) + 1j * rng.standard_normal((rows, m)))


@given(st.integers(0, 2**32 - 1), st.integers(1, 9), st.integers(0, 6))
def test_fwht_numba_matches_numpy(seed, rows, p):
    a = _grid(seed, rows, 1 << p)
    np.testing.assert_allclose(K.nb_fwht_rows(a.copy()), K.np_fwht_rows(a.copy()), atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(1, 9), st.integers(0, 6), st.sampled_from([1.0, -1.0]))
def test_outer_phase_numba_matches_numpy(seed, rows, p, scale):
    a = _grid(seed, rows, 1 << p)
    omega = np.random.default_rng(seed + 1).random(rows)
    np.testing.assert_allclose(
        K.nb_outer_phase(a.copy(), omega, scale), K.np_outer_phase(a.copy(), omega, scale), atol=1e-12
    )


@given(st.integers(0, 2**32 - 1), st.integers(1, 9), st.integers(0, 6))
def test_column_phase_numba_matches_numpy(seed, rows, p):
    a = _grid(seed, rows, 1 << p)
    turns = np.random.default_rng(seed + 2).random(1 << p)
    np.testing.assert_allclose(K.nb_column_phase(a.copy(), turns), K.np_column_phase(a.copy(), turns), atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.integers(1, 9), st.integers(0, 6))
def test_xor_shift_numba_matches_numpy_and_is_involution(seed, rows, p):
    m = 1 << p
    a = _grid(seed, rows, m)
    shifts = np.random.default_rng(seed + 3).integers(0, m, rows).astype(np.int64)
    b = K.nb_xor_shift(a, shifts)
    np.testing.assert_array_equal(b, K.np_xor_shift(a, shifts))
    np.testing.assert_array_equal(K.nb_xor_shift(b, shifts), a)


@given(st.floats(0, 1, exclude_max=True), st.integers(0, 7))
def test_geometric_sum_numba_matches_numpy(delta, p):
    m = 1 << p
    assert abs(K.nb_geometric_sum(delta, m) - K.np_geometric_sum(delta, m)) < 1e-9


def test_fwht_is_involution(rng):
    a = np.ascontiguousarray(rng.standard_normal((3, 32)) + 0j)
    np.testing.assert_allclose(K.fwht_rows(K.fwht_rows(a.copy())), a, atol=1e-12)


def test_backend_reports_selection():
    assert K.backend() in ("numba", "numpy")
    assert (K.backend() == "numba") == K.USE_NUMBA


def test_numpy_fallback_selected_by_env(tmp_path):
    import subprocess
    import sys

    code = "import sparsepredict._kernels as k; print(k.backend(), k.fwht_rows is k.np_fwht_rows)"
    env = {"SPARSEPREDICT_NUMBA": "0", "PATH": "/usr/bin:/bin"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]
