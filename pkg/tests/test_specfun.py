"""Special functions: log-gamma, incomplete gamma, pFq series, Meijer G."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy import integrate, special

from risfso.channel import HopParams, LinkParams, moment_table
from risfso.metrics import (SecrecyScenario, asc_bivariate_spec, average_secrecy_capacity,
                            average_secrecy_capacity_closed_form)
from risfso.channel import match_gamma
from risfso.specfun import (PATH_EPS, BivariateMeijerSpec, GammaPoleError, GBlock, MeijerSpec,
                            PoleCollisionError, SeriesDivergenceError, classify_poles, epsilon_split,
                            evaluation_path, gauss_hypergeometric_series, leading_sum, leading_terms,
                            log_gamma, meijer_g, meijer_g_bivariate, signed_log_gamma,
                            upper_incomplete_gamma)
from risfso.validation import random_meijer_spec


def mp_meijer(spec):
    return float(mp.re(mp.meijerg([list(spec.a[:spec.n]), list(spec.a[spec.n:])],
                                  [list(spec.b[:spec.m]), list(spec.b[spec.m:])], spec.z)))


# ---------------------------------------------------------------------------
# log-gamma

def test_log_gamma_known_values():
    assert abs(log_gamma(1.0)) < 1e-16
    assert abs(log_gamma(0.5).real - 0.5723649429247001) < 1e-15


def test_log_gamma_recursion_oracle():
    x = 10.3
    ref = log_gamma(1.3).real + math.fsum(math.log(1.3 + k) for k in range(9))
    assert abs(log_gamma(x).real - ref) < 1e-13 * abs(ref)


@given(st.floats(1e-3, 170.0))
def test_log_gamma_real_matches_lgamma(x):
    assert abs(log_gamma(x).real - math.lgamma(x)) <= 2e-15 * max(1.0, abs(math.lgamma(x)))


@given(st.floats(-30.0, 30.0), st.floats(-50.0, 50.0))
def test_log_gamma_complex_matches_scipy(x, y):
    z = complex(x, y)
    assume(abs(z - round(x)) > 1e-3 or x > 0)
    got, ref = log_gamma(z), special.loggamma(z)
    assert abs(got.real - ref.real) <= 1e-11 * max(1.0, abs(ref.real))
    assert abs(np.angle(np.exp(1j * (got.imag - ref.imag)))) < 1e-9


@given(st.floats(-40.0, -0.01))
def test_signed_log_gamma_negative_arguments(x):
    assume(abs(x - round(x)) > 1e-6)
    lg, sign = signed_log_gamma(x)
    assert sign == int(np.sign(special.gamma(x)))
    assert abs(lg - special.gammaln(x)) <= 1e-12 * max(1.0, abs(lg))


def test_signed_log_gamma_pole():
    with pytest.raises(GammaPoleError):
        signed_log_gamma(-3.0)


# ---------------------------------------------------------------------------
# incomplete gamma

def test_upper_incomplete_gamma_examples():
    assert abs(upper_incomplete_gamma(1.0, 2.0) - math.exp(-2.0)) < 1e-16
    assert abs(upper_incomplete_gamma(3.7, 0.0) / math.gamma(3.7) - 1.0) < 1e-15
    ref, _ = integrate.quad(lambda t: t ** 1.5 * math.exp(-t), 1.3, math.inf, epsabs=0, epsrel=1e-13)
    assert abs(upper_incomplete_gamma(2.5, 1.3) / ref - 1.0) < 1e-12


@given(st.floats(0.05, 40.0), st.floats(0.0, 100.0))
def test_upper_incomplete_gamma_matches_scipy(p, x):
    ref = special.gammaincc(p, x) * special.gamma(p)
    assume(ref > 1e-280)
    assert abs(upper_incomplete_gamma(p, x) / ref - 1.0) < 2e-13


# ---------------------------------------------------------------------------
# hypergeometric series

def test_series_examples():
    assert abs(gauss_hypergeometric_series([], [], 0.7).value - math.exp(0.7)) < 1e-15
    assert abs(gauss_hypergeometric_series([2.0], [], 0.25).value - 16.0 / 9.0) < 1e-15
    assert abs(gauss_hypergeometric_series([1.0, 1.0], [2.0], 0.5).value - 2.0 * math.log(2.0)) < 1e-15


def test_series_truncation_bound_and_terms():
    res = gauss_hypergeometric_series([0.5, 1.5], [2.5], 0.9, rtol=1e-12)
    ref = special.hyp2f1(0.5, 1.5, 2.5, 0.9)
    assert abs(res.value - ref) <= max(res.truncation_bound, 1e-15 * ref) * 10
    assert res.terms > 10


def test_series_terminates_on_negative_integer_numerator():
    res = gauss_hypergeometric_series([-3.0, 1.5], [2.5], 7.0)
    ref = mp.hyp2f1(-3, 1.5, 2.5, 7.0)
    assert abs(res.value - float(ref)) < 1e-12 * abs(float(ref))
    assert res.truncation_bound == 0.0


@pytest.mark.parametrize("a,b,z", [([1.0, 1.0, 1.0], [2.0], 0.1), ([1.0, 1.0], [2.0], 1.0)])
def test_series_divergence_reported(a, b, z):
    with pytest.raises(SeriesDivergenceError):
        gauss_hypergeometric_series(a, b, z)


@given(st.floats(0.1, 4.0), st.floats(0.1, 4.0), st.floats(0.2, 5.0), st.floats(-0.9, 0.9))
def test_series_2f1_matches_scipy(a, b, c, z):
    ref = special.hyp2f1(a, b, c, z)
    assert abs(gauss_hypergeometric_series([a, b], [c], z).value - ref) <= 1e-11 * max(1.0, abs(ref))


# ---------------------------------------------------------------------------
# Meijer G

def test_meijer_examples():
    assert abs(meijer_g(MeijerSpec(1, 0, (), (0.0,), 1.0)) - math.exp(-1.0)) < 1e-15
    assert abs(meijer_g(MeijerSpec(1, 1, (1.0,), (1.0,), 1.0)) - 0.5) < 1e-15


def test_meijer_identities_on_log_grid(backend):
    for z in np.geomspace(1e-6, 50.0, 80):
        assert abs(meijer_g(MeijerSpec(1, 0, (), (0.0,), z)) - math.exp(-z)) <= 1e-12 * max(1.0, math.exp(-z))
        assert abs(meijer_g(MeijerSpec(1, 1, (1.0,), (1.0,), z)) - z / (1 + z)) <= 1e-12


def test_dual_contour_turbulence_g():
    a, b, lam = 5.52, 2.34, 3.52
    spec = MeijerSpec(2, 1, (1 - lam,), (a, b), a * b / (lam - 1))
    v0 = meijer_g(spec, "contour")
    for off in (-1.5, 0.7, 2.0):
        assert abs(meijer_g(spec, "contour", contour_offset=off) / v0 - 1.0) < 1e-11
    assert abs(meijer_g(spec) / mp_meijer(spec) - 1.0) < 1e-12


CASES = [
    MeijerSpec(3, 1, (1 - 3.52, 2.0), (1.0, 5.52, 2.34), 0.7),
    MeijerSpec(1, 1, (0.5,), (0.0, -0.5), 0.3),
    MeijerSpec(2, 1, (1 - 0.2582,), (0.0, 0.5, -0.2582), 0.01),
    MeijerSpec(2, 2, (1 - 1 - 0.2582, 1 - 0.2582), (0.0, 0.5, -0.2582), 0.01),
    MeijerSpec(4, 1, (-0.258, 1 - 0.258), (-0.258, -0.258, 0.0, 0.5), 0.3),
    MeijerSpec(3, 2, (1 - 0.6, 1 - 1.2, 1.0), (0.0, 0.6, 1.2), 2.0),
    MeijerSpec(3, 2, (1 - 0.6, 1 - 1.2, 1.0), (0.0, 0.6, 1.2), 0.2),
    MeijerSpec(6, 2, (1 - 3.52, 1 - 3.52, 2.0, 2.0), (1.0, 5.52, 2.34, 1.0, 5.52, 2.34), 0.8),
]


@pytest.mark.parametrize("spec", CASES, ids=range(len(CASES)))
def test_meijer_matches_mpmath(spec, backend):
    assert abs(meijer_g(spec) / mp_meijer(spec) - 1.0) < 1e-9


def test_slater_vs_contour_random_specs():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        spec = random_meijer_spec(rng)
        s, c = meijer_g(spec, "slater"), meijer_g(spec, "contour")
        assert abs(s - c) <= 1e-7 * abs(c)


@given(st.floats(-0.8, 0.8), st.floats(0.05, 5.0))
def test_translation_identity(c, z):
    spec = MeijerSpec(2, 1, (1 - 3.52,), (5.52, 2.34), z)
    lhs = meijer_g(spec.shifted(c))
    rhs = z ** c * meijer_g(spec)
    assert abs(lhs / rhs - 1.0) < 1e-9


def test_inversion_round_trip_product_form():
    link = LinkParams(HopParams(5.52, 2.34), HopParams(4.2, 1.9, 1.7, 0.8))
    t = moment_table(link)
    for w in (0.05, 0.6, 3.0, 40.0):
        spec = MeijerSpec(2, 6, tuple(1.0 - v for v in t.R), tuple(1.0 - v for v in t.P), 1.0 / w)
        assert spec.p > spec.q
        direct = meijer_g(spec)
        inv = meijer_g(spec.inverted(), "contour")
        assert abs(direct / inv - 1.0) < 1e-8
        assert abs(spec.inverted().z - w) < 1e-15 * w


def test_orders_validated():
    with pytest.raises(ValueError):
        MeijerSpec(3, 0, (), (0.0, 1.0), 1.0)
    with pytest.raises(ValueError):
        MeijerSpec(1, 0, (), (0.0,), -1.0)


def test_pole_collision_rejected():
    with pytest.raises(PoleCollisionError):
        meijer_g(MeijerSpec(1, 1, (2.5,), (0.5,), 1.0))


def test_pole_classification_groups():
    cls = classify_poles(MeijerSpec(3, 0, (), (0.2, 1.2, 0.7), 0.5))
    sizes = sorted(g.multiplicity for g in cls.groups)
    assert sizes == [1, 2]
    assert not cls.simple
    assert cls == classify_poles(MeijerSpec(3, 0, (), (0.2, 1.2, 0.7), 0.5))


@given(st.floats(0.05, 2.0), st.floats(0.05, 2.0), st.floats(0.05, 2.0), st.floats(0.05, 0.9),
       st.floats(-1.0, 1.0), st.floats(-1.0, 1.0))
def test_path_stable_under_small_perturbation(b1, b2, b3, z, d1, d2):
    spec = MeijerSpec(2, 1, (0.3,), (b1, b2, b3), z)
    # the test is only meaningful away from the classification threshold itself
    gaps = [abs(x - round(x)) for x in (b1 - b2, b2 - b3 - 1.0, b1 - b3 - 1.0)]
    assume(all(abs(g - PATH_EPS) > PATH_EPS / 5 for g in gaps))
    eps = PATH_EPS / 10
    moved = MeijerSpec(2, 1, (0.3,), (b1 + d1 * eps, b2 + d2 * eps, b3), z)
    assert evaluation_path(spec) == evaluation_path(moved)


def test_epsilon_split_matches_contour_on_double_pole():
    spec = MeijerSpec(2, 1, (0.7,), (0.0, 1.0, -0.4), 0.4)
    assert not classify_poles(spec).simple
    assert evaluation_path(spec) == "contour"
    split = meijer_g(spec, "slater")
    assert abs(split / meijer_g(spec, "contour") - 1.0) < 1e-5
    assert abs(meijer_g(spec) / mp_meijer(spec) - 1.0) < 1e-10
    assert epsilon_split(spec).b[:2] != spec.b[:2]


def test_leading_terms_power_law():
    spec = MeijerSpec(2, 1, (1 - 0.4,), (0.0, 1.0 / 2, -0.4 / 2), 1e-3)
    base = leading_terms(spec)
    doubled = leading_terms(MeijerSpec(spec.m, spec.n, spec.a, spec.b, 2e-3))
    assert [p for _, p in base] == [p for _, p in doubled]
    for (c, p) in base:
        ratio = (c * (2e-3) ** p) / (c * (1e-3) ** p)
        assert abs(ratio - 2.0 ** p) < 1e-14 * 2.0 ** p
    assert abs(leading_sum(MeijerSpec(spec.m, spec.n, spec.a, spec.b, 1e-9))
               / meijer_g(MeijerSpec(spec.m, spec.n, spec.a, spec.b, 1e-9)) - 1.0) < 1e-6


# ---------------------------------------------------------------------------
# bivariate

def test_bivariate_separable_case():
    spec = BivariateMeijerSpec(GBlock(0, 0), GBlock(1, 0, (), (0.0,)), GBlock(1, 1, (1.0,), (1.0,)), 0.7, 2.0)
    assert abs(meijer_g_bivariate(spec) / (math.exp(-0.7) * 2.0 / 3.0) - 1.0) < 1e-10


def test_bivariate_small_argument_limit():
    # x-block G^{1,1}_{1,1}[x | 0; 1] = x/(1+x)^2 has leading power 1, so the value vanishes as x -> 0
    vals = []
    for x in (1e-2, 1e-4, 1e-6):
        spec = BivariateMeijerSpec(GBlock(0, 0), GBlock(1, 1, (0.0,), (1.0,)),
                                   GBlock(1, 0, (), (0.0,)), x, 0.5)
        vals.append(meijer_g_bivariate(spec))
        assert abs(vals[-1] / (x / (1 + x) ** 2 * math.exp(-0.5)) - 1.0) < 1e-8
    assert vals[0] > vals[1] > vals[2] > 0


def _baseline_scenario(mu_d_db, r=1):
    d = LinkParams(HopParams(5.52, 2.34), HopParams(5.52, 2.34), 2, r, mu_d_db)
    e = LinkParams(HopParams(3.43, 1.43), HopParams(3.43, 1.43), 2, r, 30.0, True)
    return SecrecyScenario(d, e, 0.1)


@pytest.mark.parametrize("mu", [0.0, 20.0, 40.0])
def test_bivariate_asc_matches_quadrature(mu):
    scn = _baseline_scenario(mu)
    quad = average_secrecy_capacity(scn)
    assert abs(average_secrecy_capacity_closed_form(scn) / quad - 1.0) < 1e-3


def test_bivariate_spec_blocks():
    scn = _baseline_scenario(20.0, r=2)
    md, me = match_gamma(scn.link_d), match_gamma(scn.link_e)
    spec = asc_bivariate_spec(scn, md, me)
    assert spec.inner_x.m == 2 and spec.inner_y.m == 3 and spec.inner_y.n == 0


def test_auto_path_falls_back_when_slater_cancels():
    spec = MeijerSpec(4, 3, (-0.34311355781158037, -0.3585035655807626, 1.3322968413378011),
                      (2.4379184559924507, 2.961000987821489, 1.4578661542973563, 2.854103549916244),
                      4.285041962751641)
    from risfso.specfun import MAX_DIGITS_LOST, _slater

    assert _slater(spec).digits_lost > MAX_DIGITS_LOST
    assert abs(meijer_g(spec) / mp_meijer(spec) - 1.0) < 1e-12
