"""Monte Carlo samplers and estimators."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from risfso.channel import HopParams, LinkParams, composite_pdf, match_gamma, moment, snr_cdf
from risfso.metrics import SecrecyScenario, average_ber, outage_probability
from risfso.montecarlo import (LINK_D, MIN_BATCHES, EstimateWithError, SimConfig, estimate_aber,
                               estimate_acc, estimate_asc, estimate_metric, estimate_op,
                               estimate_sop, rng_stream, sample_hop, sample_snr)
from risfso.validation import baseline_scenario, symmetric_scenario

MODERATE = HopParams(5.52, 2.34)


def d_link(mu_db=20.0, r=1, n=2, hop=MODERATE):
    return LinkParams(hop, hop, n, r, mu_db)


def numeric_cdf(pdf, x_max, n=400):
    """Tabulated CDF of a density on (0, x_max] by piecewise quadrature on a log grid."""
    grid = np.concatenate(([0.0], np.geomspace(1e-6, x_max, n)))
    pieces = [integrate.quad(pdf, a, b, epsabs=1e-14, epsrel=1e-11)[0]
              for a, b in zip(grid[:-1], grid[1:])]
    return grid, np.concatenate(([0.0], np.cumsum(pieces)))


# ---------------------------------------------------------------------------
# configuration

def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(999)
    with pytest.raises(ValueError):
        SimConfig(10_000, mode="fast")
    with pytest.raises(ValueError):
        SimConfig(10_000, seed=-1)
    with pytest.raises(ValueError):
        SimConfig(10_000, batch_size=0)


@pytest.mark.parametrize("n,batch", [(1000, 65536), (10 ** 6, 65536), (123_457, 1000)])
def test_batch_sizes(n, batch):
    sizes = SimConfig(n, batch_size=batch).batch_sizes()
    assert sum(sizes) == n and len(sizes) >= MIN_BATCHES
    assert max(sizes) - min(sizes) <= 1
    assert max(sizes) <= max(batch, math.ceil(n / MIN_BATCHES))


def test_substreams_are_distinct():
    a = rng_stream(1, 0, 0, 0, 0).random(4)
    for key in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)):
        assert not np.array_equal(a, rng_stream(1, *key).random(4))
    assert np.array_equal(a, rng_stream(1, 0, 0, 0, 0).random(4))


@pytest.mark.parametrize("mode", ["matched", "exact"])
def test_deterministic_across_thread_counts(mode, monkeypatch):
    scn = baseline_scenario(20.0)
    cfg = SimConfig(200_000, 99, mode, 5000)
    results = []
    for threads in ("1", "4"):
        monkeypatch.setenv("RISFSO_THREADS", threads)
        results.append(estimate_asc(SecrecyScenario(scn.link_d, scn.link_d, 0.1), cfg))
        results.append(estimate_op(scn.link_d, cfg))
    assert results[0] == results[2] and results[1] == results[3]


# ---------------------------------------------------------------------------
# hop sampler

def test_sample_hop_degenerate_limit():
    hop = HopParams(1e6, 1e6, 1e6, 0.8)
    x = sample_hop(hop, rng_stream(3, 0, 0, 0, 0), 100_000)
    assert abs(x.mean() - 0.8) < 1e-3 and x.std() / x.mean() < 5e-3


def test_sample_hop_mean():
    hop = HopParams(6.0, 2.5, 1.3, 0.9)
    n, batches = 10_000_000, 40
    means = [sample_hop(hop, rng_stream(8, 0, 0, 0, b), n // batches).mean() for b in range(batches)]
    est, se = np.mean(means), np.std(means, ddof=1) / math.sqrt(batches)
    assert abs(est - 0.9 * 1.3 ** 2 / (1.3 ** 2 + 1)) < 3 * se


@pytest.mark.parametrize("hop", [MODERATE, HopParams(7.0, 3.0, 1.4, 0.8)])
def test_sample_hop_ks_against_composite_pdf(hop):
    n = 1_000_000
    x = np.sort(sample_hop(hop, rng_stream(12, 0, 0, 0, 0), n))
    grid, cdf = numeric_cdf(lambda t: composite_pdf(hop, t), x[-1] * 1.01)
    f = np.interp(x, grid, cdf)
    ecdf_hi = np.arange(1, n + 1) / n
    d = max(np.max(ecdf_hi - f), np.max(f - ecdf_hi + 1.0 / n))
    assert d < 1.63 / math.sqrt(n)


# ---------------------------------------------------------------------------
# SNR sampler

def test_matched_snr_ks_against_closed_form_cdf():
    link = d_link(20.0)
    g = sample_snr(link, SimConfig(10 ** 6, 5), size=10 ** 6)
    res = stats.kstest(g, lambda v: snr_cdf(link, v, method="gamma"))
    assert res.pvalue > 0.01


def test_r2_samples_are_squared_r1_samples():
    for mode in ("matched", "exact"):
        cfg = SimConfig(10 ** 4, 5, mode)
        g1 = sample_snr(d_link(20.0, 1), cfg, size=1000)
        g2 = sample_snr(d_link(30.0, 2), cfg, size=1000)
        # gamma_2 = mu_2 (gamma_1 / mu_1)^2
        np.testing.assert_allclose(g2, 1000.0 * (g1 / 100.0) ** 2, rtol=1e-12)


def test_exact_single_element_mean():
    hop = HopParams(1e5, 1e5, 1e5)
    link = LinkParams(HopParams(6.0, 2.5), hop, 1, 1, 20.0)
    cfg = SimConfig(10 ** 6, 4, "exact")
    est = estimate_metric("op", SecrecyScenario(link, link), cfg, gamma_star=1e300)
    assert est.estimate == 1.0
    g = np.concatenate([sample_snr(link, cfg, batch=b) for b in range(len(cfg.batch_sizes()))])
    # gamma = mu M / E[M] has mean mu
    assert abs(g.mean() - 100.0) < 3 * g.std() / math.sqrt(g.size)


def test_matched_mode_requires_valid_moments():
    strong = HopParams(3.43, 1.43)
    with pytest.raises(Exception, match="moment matching|second moment"):
        sample_snr(LinkParams(strong, strong), SimConfig(10 ** 4))
    ok = sample_snr(LinkParams(strong, strong), SimConfig(10 ** 4, mode="exact"), size=100)
    assert np.all(ok > 0)


# ---------------------------------------------------------------------------
# estimators

def test_op_vanishes_at_huge_snr():
    est = estimate_op(d_link(120.0), SimConfig(10 ** 6, 1))
    assert est.estimate <= est.std_error


def test_aber_estimate_matches_closed_form():
    link = d_link(20.0)
    est = estimate_aber(link, SimConfig(10 ** 6, 2))
    assert abs(est.estimate - average_ber(link)) < 3 * est.std_error


def test_sop_symmetry_both_modes():
    for mode in ("matched", "exact"):
        est = estimate_sop(symmetric_scenario(), SimConfig(10 ** 6, 6, mode))
        assert abs(est.estimate - 0.5) < 3 * est.std_error


def test_exact_sop_variant_is_more_pessimistic():
    scn = baseline_scenario(20.0)
    cfg = SimConfig(10 ** 6, 6)
    lower, exact = estimate_sop(scn, cfg), estimate_sop(scn, cfg, exact=True)
    assert exact.estimate >= lower.estimate


def test_asc_and_acc_estimates_nonnegative():
    scn = baseline_scenario(0.0)
    assert estimate_asc(scn, SimConfig(10 ** 5, 1)).estimate >= 0
    assert estimate_asc(scn, SimConfig(10 ** 5, 1, "exact")).estimate >= 0
    assert estimate_acc(scn.link_d, SimConfig(10 ** 5, 1)).estimate >= 0


def test_standard_error_halves_when_samples_quadruple():
    link = d_link(20.0)
    a = estimate_op(link, SimConfig(250_000, 10, batch_size=5000))
    b = estimate_op(link, SimConfig(1_000_000, 10, batch_size=20_000))
    assert abs(b.std_error / a.std_error - 0.5) < 0.1


def test_estimate_metric_dispatch():
    scn = baseline_scenario(20.0)
    cfg = SimConfig(10 ** 4, 1)
    for m in ("op", "aber", "acc", "asc", "sop"):
        assert isinstance(estimate_metric(m, scn, cfg), EstimateWithError)
    with pytest.raises(ValueError):
        estimate_metric("ber", scn, cfg)


def test_exact_and_matched_op_within_ten_percent():
    # bounds the Laguerre first-term error; reported rather than hidden
    worst = 0.0
    for mu in (10.0, 20.0, 30.0, 40.0):
        link = d_link(mu)
        exact = estimate_op(link, SimConfig(10 ** 6, 7, "exact")).estimate
        matched = outage_probability(link)
        worst = max(worst, abs(exact - matched) / matched)
    assert worst <= 0.10, worst


def test_exact_mean_matches_first_moment():
    link = d_link(0.0)
    cfg = SimConfig(10 ** 6, 9, "exact")
    y = np.concatenate([sample_snr(link, cfg, LINK_D, b) for b in range(len(cfg.batch_sizes()))])
    # gamma = (Y / E[M]) at 0 dB, and E[Y] = N E[M]
    assert abs(y.mean() - link.n_elements) < 3 * y.std() / math.sqrt(y.size)
    assert moment(link, 1.0) > 0 and match_gamma(link).mean_m == pytest.approx(moment(link, 1.0))
