import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ultraweight import _kernels_py, kernels
from ultraweight.scenarios import hull_oracle

try:
    from ultraweight import _kernels as _compiled
except ImportError:
    _compiled = None

needs_compiled = pytest.mark.skipif(_compiled is None, reason="compiled kernels not built")

finite_values = arrays(np.float64, st.integers(3, 40), elements=st.floats(-50, 50, allow_nan=False))


@given(finite_values)
def test_hull_vertices_lie_on_the_minorant(y):
    ext = _kernels_py.lower_hull(y)
    assert ext[0] == 0 and ext[-1] == y.shape[0] - 1
    hull = np.interp(np.arange(y.shape[0]), ext, y[ext])
    assert np.all(hull <= y + 1e-9 * (1 + np.abs(y)))
    slopes = np.diff(y[ext]) / np.diff(ext)
    assert np.all(np.diff(slopes) > -1e-9)


@given(finite_values)
def test_hull_interpolant_equals_chord_oracle(y):
    ext = _kernels_py.lower_hull(y)
    hull = np.interp(np.arange(y.shape[0]), ext, y[ext])
    np.testing.assert_allclose(hull, hull_oracle(y), rtol=0, atol=1e-9)


@given(arrays(np.float64, st.integers(2, 30), elements=st.floats(-20, 20)),
       arrays(np.float64, st.integers(2, 30), elements=st.floats(-20, 20)))
def test_maxplus_conv_matches_double_loop(a, b):
    c, arg = _kernels_py.maxplus_conv(a, b, 1)
    n_out = min(a.shape[0], b.shape[0])
    for n in range(n_out):
        cands = [a[j] + b[n - j] for j in range(1, n)]
        if cands:
            assert c[n] == pytest.approx(max(cands))
            assert 1 <= arg[n] <= n - 1
        else:
            assert arg[n] == -1


def test_assoc_max_respects_the_cap():
    y = np.array([0.0, 0.0, 0.0, 0.0])
    vals, arg = _kernels_py.assoc_max(y, np.array([1.0, 1.0]), np.array([1, 3]))
    assert arg.tolist() == [1, 3]
    assert vals.tolist() == [1.0, 3.0]


def test_legendre_sweep_pointer_matches_argmax():
    s = np.linspace(0, 10, 201)
    phi = s**2 / 2
    t = np.linspace(0, 9, 50)
    idx = _kernels_py.legendre_sweep(phi, s, t)
    full = np.argmax(t[:, None] * s[None, :] - phi[None, :], axis=1)
    assert np.array_equal(idx, full)


@needs_compiled
@given(finite_values)
def test_backends_agree_on_hull(y):
    assert np.array_equal(_compiled.lower_hull(np.ascontiguousarray(y)), _kernels_py.lower_hull(y))


@needs_compiled
@given(arrays(np.float64, st.integers(3, 25), elements=st.floats(-10, 10)))
def test_backends_agree_on_fdb_table(logm):
    a = _compiled.fdb_table(np.ascontiguousarray(logm))
    b = _kernels_py.fdb_table(logm)
    np.testing.assert_allclose(a[0], b[0], rtol=0, atol=1e-12)
    assert np.array_equal(a[1], b[1])


@needs_compiled
def test_backends_agree_on_conv_assoc_and_sweep(rng):
    a, b = rng.normal(size=60), rng.normal(size=60)
    for x, y in zip(_compiled.maxplus_conv(a, b, 1), _kernels_py.maxplus_conv(a, b, 1)):
        np.testing.assert_array_equal(x, y)
    y = np.cumsum(rng.uniform(0, 3, 80))
    u = np.linspace(-1, 5, 40)
    cap = np.full(40, 79, dtype=np.int64)
    for x, z in zip(_compiled.assoc_max(y, u, cap), _kernels_py.assoc_max(y, u, cap)):
        np.testing.assert_array_equal(x, z)
    s = np.linspace(0, 5, 300)
    phi = np.exp(s) - 1
    t = np.linspace(0, 100, 77)
    np.testing.assert_array_equal(_compiled.legendre_sweep(phi, s, t), _kernels_py.legendre_sweep(phi, s, t))


def test_dispatch_reports_a_backend():
    assert kernels.BACKEND in ("cython", "python")
