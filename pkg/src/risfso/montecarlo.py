"""Monte Carlo samplers and estimators with batch-means standard errors.

Every batch draws from its own Philox stream keyed by
(seed; link, hop, element, batch), so results do not depend on how
batches are scheduled across threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _backend
from .channel import HopParams, LinkParams, MatchedGamma, match_gamma, moment
from .metrics import ModulationParams, SecrecyScenario

LINK_D, LINK_E = 0, 1
HOP_S, HOP_R, MATCHED = 0, 1, 2
MIN_BATCHES = 30
MODES = ("exact", "matched")


@dataclass(frozen=True)
class SimConfig:
    n_samples: int = 1_000_000
    seed: int = 20240101
    mode: str = "matched"
    batch_size: int = 65_536

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 1000:
            raise ValueError("n_samples must be an integer >= 1000")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def batch_sizes(self) -> list:
        """Split n_samples into at least 30 near-equal batches of at most batch_size."""
        n = int(self.n_samples)
        count = max(MIN_BATCHES, math.ceil(n / self.batch_size))
        base, extra = divmod(n, count)
        return [base + (1 if i < extra else 0) for i in range(count)]


@dataclass(frozen=True)
class EstimateWithError:
    estimate: float
    std_error: float
    n_effective: int


def rng_stream(seed: int, link: int, hop: int, element: int, batch: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(link, hop, element, batch))
    return np.random.Generator(np.random.Philox(ss))


def sample_hop(hop: HopParams, rng: np.random.Generator, size: int) -> np.ndarray:
    """Composite irradiance (G_a/a)(G_b/b)((lambda-1)/G_lambda) A U^{1/zeta^2}."""
    ga = rng.standard_gamma(hop.alpha, size) / hop.alpha
    gb = rng.standard_gamma(hop.beta, size) / hop.beta
    gl = (hop.lam - 1.0) / rng.standard_gamma(hop.lam, size)
    u = 1.0 - rng.random(size)
    return ga * gb * gl * hop.pointing_loss_A * u ** (1.0 / hop.zeta ** 2)


def sample_sum(link: LinkParams, seed: int, link_id: int, batch: int, size: int) -> np.ndarray:
    """Exact RIS sum: N independent products I'_s I'_r."""
    total = np.zeros(size)
    for e in range(link.n_elements):
        total += (sample_hop(link.hop_s, rng_stream(seed, link_id, HOP_S, e, batch), size)
                  * sample_hop(link.hop_r, rng_stream(seed, link_id, HOP_R, e, batch), size))
    return total


def sample_snr(link: LinkParams, cfg: SimConfig, link_id: int = LINK_D, batch: int = 0,
               size: int | None = None, matched: MatchedGamma | None = None) -> np.ndarray:
    """SNR draws gamma = mu (Y / E[M])^r for one batch.

    Exact mode sums the N element products; matched mode draws Y from the
    Gamma(l, k) surrogate and needs a valid (or explicitly continued) match.
    """
    size = cfg.batch_sizes()[batch] if size is None else size
    if cfg.mode == "matched":
        mg = matched or match_gamma(link)
        rng = rng_stream(cfg.seed, link_id, MATCHED, 0, batch)
        y = rng.standard_gamma(mg.shape_l, size) * mg.scale_k
        mean_m = mg.mean_m
    else:
        y = sample_sum(link, cfg.seed, link_id, batch, size)
        mean_m = moment(link, 1.0)
    return link.mu_linear * (y / mean_m) ** link.detection


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("RISFSO_THREADS", "1")))
    except ValueError:
        return 1


def _run(stat: Callable[[int, int], np.ndarray], cfg: SimConfig) -> EstimateWithError:
    sizes = cfg.batch_sizes()

    def one(b):
        x = stat(b, sizes[b])
        return math.fsum(x), x.size

    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(one, range(len(sizes))))
    else:
        parts = [one(b) for b in range(len(sizes))]
    n = sum(c for _, c in parts)
    est = math.fsum(s for s, _ in parts) / n
    k = len(parts)
    var = math.fsum((c / n) ** 2 * (s / c - est) ** 2 for s, c in parts) * k / (k - 1)
    return EstimateWithError(est, math.sqrt(var), n)


def _prepared(link: LinkParams, cfg: SimConfig) -> MatchedGamma | None:
    return match_gamma(link) if cfg.mode == "matched" else None


def estimate_op(link: LinkParams, cfg: SimConfig, gamma_star: float = 1.0) -> EstimateWithError:
    mg = _prepared(link, cfg)
    return _run(lambda b, n: (sample_snr(link, cfg, LINK_D, b, n, mg) <= gamma_star).astype(float), cfg)


def estimate_aber(link: LinkParams, cfg: SimConfig,
                  mod: ModulationParams = ModulationParams()) -> EstimateWithError:
    """Mean of Gamma(p, q gamma) / (2 Gamma(p)) = Q(p, q gamma) / 2."""
    mg = _prepared(link, cfg)
    return _run(lambda b, n: 0.5 * _backend.gammaincc_array(
        mod.p, mod.q * sample_snr(link, cfg, LINK_D, b, n, mg)), cfg)


def estimate_acc(link: LinkParams, cfg: SimConfig) -> EstimateWithError:
    mg = _prepared(link, cfg)
    return _run(lambda b, n: np.log1p(sample_snr(link, cfg, LINK_D, b, n, mg)) / (2.0 * math.log(2.0)), cfg)


def estimate_asc(scn: SecrecyScenario, cfg: SimConfig, scale: float = 1.0) -> EstimateWithError:
    """Mean of scale * max(0, ln(1 + g_d) - ln(1 + g_e)).

    ``scale = 1`` gives the secrecy-capacity functional in nats, matching
    ``metrics.average_secrecy_capacity``; ``scale = 1 / (2 ln 2)`` gives the
    capacity normalization used for the average channel capacity.
    """
    md, me = _prepared(scn.link_d, cfg), _prepared(scn.link_e, cfg)

    def stat(b, n):
        gd = sample_snr(scn.link_d, cfg, LINK_D, b, n, md)
        ge = sample_snr(scn.link_e, cfg, LINK_E, b, n, me)
        return scale * np.maximum(np.log1p(gd) - np.log1p(ge), 0.0)

    return _run(stat, cfg)


def estimate_sop(scn: SecrecyScenario, cfg: SimConfig, exact: bool = False) -> EstimateWithError:
    """Pr[g_d <= Psi g_e] (lower bound), or Pr[g_d <= Psi g_e + Psi - 1] with ``exact=True``."""
    md, me = _prepared(scn.link_d, cfg), _prepared(scn.link_e, cfg)
    psi = scn.psi
    shift = psi - 1.0 if exact else 0.0

    def stat(b, n):
        gd = sample_snr(scn.link_d, cfg, LINK_D, b, n, md)
        ge = sample_snr(scn.link_e, cfg, LINK_E, b, n, me)
        return (gd <= psi * ge + shift).astype(float)

    return _run(stat, cfg)


def estimate_metric(metric: str, scn: SecrecyScenario, cfg: SimConfig,
                    mod: ModulationParams = ModulationParams(), gamma_star: float = 1.0) -> EstimateWithError:
    if metric == "op":
        return estimate_op(scn.link_d, cfg, gamma_star)
    if metric == "aber":
        return estimate_aber(scn.link_d, cfg, mod)
    if metric == "acc":
        return estimate_acc(scn.link_d, cfg)
    if metric == "asc":
        return estimate_asc(scn, cfg)
    if metric == "sop":
        return estimate_sop(scn, cfg)
    raise ValueError(f"unknown metric {metric!r}")
