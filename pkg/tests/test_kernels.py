"""Compiled and numpy kernels against scipy and against each other."""

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from conftest import BACKENDS

from risfso import _backend
from risfso.specfun import MeijerSpec, _mb_problem, _contour


def _wrap(d):
    return np.angle(np.exp(1j * d))


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_clgamma_matches_scipy_loggamma(name):
    rng = np.random.default_rng(0)
    z = rng.uniform(-20, 40, 400) + 1j * rng.uniform(-300, 300, 400)
    got = BACKENDS[name].clgamma(z)
    ref = special.loggamma(z)
    assert np.max(np.abs(got.real - ref.real) / np.maximum(1.0, np.abs(ref.real))) < 1e-12
    assert np.max(np.abs(_wrap(got.imag - ref.imag))) < 1e-9


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_clgamma_real_axis(name):
    x = np.linspace(0.05, 150.0, 300)
    got = BACKENDS[name].clgamma(x.astype(complex)).real
    assert np.allclose(got, special.gammaln(x), rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("name", sorted(BACKENDS))
@given(p=st.floats(0.05, 30.0), x=st.floats(0.0, 80.0))
def test_gammaincc_array_matches_scipy(name, p, x):
    got = BACKENDS[name].gammaincc_array(p, np.array([x]))[0]
    ref = special.gammaincc(p, x)
    assert abs(got - ref) <= 1e-12 * max(ref, 1e-300) + 1e-300 or abs(got - ref) < 1e-14


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")
def test_backends_agree_on_mellin_barnes():
    spec = MeijerSpec(2, 1, (1 - 3.52,), (5.52, 2.34), 2.5)
    prob = _mb_problem(spec)
    args = [np.asarray(v, dtype=float) for v in prob[:6]]
    out = [BACKENDS[n].mellin_barnes(*args, np.log(spec.z), 0.5, 0.05, 1e-17, 10 ** 6)
           for n in ("numpy", "cython")]
    assert out[0][2] == out[1][2]
    assert abs(out[0][0] - out[1][0]) < 1e-12
    assert abs(out[0][1] / out[1][1] - 1.0) < 1e-12


def test_backend_name():
    assert _backend.BACKEND in ("cython", "numpy")


def test_contour_matches_mpmath_on_each_backend(backend):
    import mpmath as mp

    spec = MeijerSpec(3, 1, (1 - 3.52, 2.0), (1.0, 5.52, 2.34), 0.7)
    ref = float(mp.re(mp.meijerg([[1 - 3.52], [2.0]], [[1.0, 5.52, 2.34], []], 0.7)))
    assert abs(_contour(spec) / ref - 1.0) < 1e-12
