"""Closed-form, asymptotic and reference-quadrature performance metrics.

Each closed form is ``prefactor * G(spec)`` for a univariate Meijer G; the
matching high-SNR asymptote replaces G by the leading residue of each pole
family (``specfun.leading_sum``). Quadrature references integrate the
defining expectation against the SNR density or CDF.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field


from .channel import (LinkParams, MatchedGamma, match_gamma, snr_ccdf, snr_cdf, snr_cdf_quadrature,
                      snr_pdf)
from .quadrature import integrate_split
from .specfun import (BivariateMeijerSpec, BivariateUnsupported, GBlock, MeijerSpec, classify_poles,
                      leading_sum, meijer_g, meijer_g_bivariate)

log = logging.getLogger(__name__)

LN2 = math.log(2.0)
METRICS = ("op", "aber", "acc", "asc", "sop")


@dataclass(frozen=True)
class ModulationParams:
    """Modulation pair (p, q) of the conditional error probability Gamma(p, q gamma) / (2 Gamma(p))."""

    p: float = 1.0
    q: float = 1.0

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise ValueError("modulation parameters p and q must be positive")


@dataclass(frozen=True)
class SecrecyScenario:
    """Legitimate link d, eavesdropper link e and target secrecy rate tau_s (bits/s/Hz)."""

    link_d: LinkParams
    link_e: LinkParams
    tau_s: float = 0.1

    def __post_init__(self):
        if not self.tau_s >= 0:
            raise ValueError("tau_s must be non-negative")
        if self.link_d.detection != self.link_e.detection:
            raise ValueError("both links must share the detection order r")

    @property
    def psi(self) -> float:
        return 2.0 ** self.tau_s

    def with_mu_d_db(self, mu_db: float) -> "SecrecyScenario":
        return SecrecyScenario(self.link_d.with_mu_db(mu_db), self.link_e, self.tau_s)


@dataclass
class MetricResult:
    closed_form: float
    asymptotic: float | None = None
    quadrature_ref: float | None = None
    flags: dict = field(default_factory=dict)


def _clamp(value: float, lo: float, hi: float, name: str) -> float:
    if value < lo or value > hi:
        if value < lo - 1e-6 or value > hi + 1e-6:
            log.warning("%s = %r outside [%r, %r] beyond rounding; clamped", name, value, lo, hi)
        else:
            log.debug("%s = %r clamped to [%r, %r]", name, value, lo, hi)
    return min(max(value, lo), hi)


def _tail_b(r: int, l: float) -> tuple:
    return tuple(i / r for i in range(r)) + (-l / r,)


# ---------------------------------------------------------------------------
# outage probability

def _op_form(link: LinkParams, gamma_star: float, mg: MatchedGamma):
    r, l, mu = link.detection, mg.shape_l, link.mu_linear
    spec = MeijerSpec(r, 1, (1.0 - l / r,), _tail_b(r, l), mg.lambda4 * gamma_star / mu)
    log_pref = math.log(mg.lambda3) - 0.5 * math.log(r) + (l / r) * math.log(gamma_star / mu)
    return log_pref, spec


def outage_probability(link: LinkParams, gamma_star: float = 1.0,
                       matched: MatchedGamma | None = None) -> float:
    """Pr[gamma <= gamma_star], the SNR CDF at the threshold."""
    if not gamma_star > 0:
        raise ValueError("gamma_star must be positive")
    mg = matched or match_gamma(link)
    log_pref, spec = _op_form(link, gamma_star, mg)
    return _clamp(math.exp(log_pref) * meijer_g(spec), 0.0, 1.0, "OP")


def outage_probability_asymptotic(link: LinkParams, gamma_star: float = 1.0,
                                  matched: MatchedGamma | None = None) -> float:
    """High-SNR outage: r leading residue terms, each a power of gamma_star / mu."""
    mg = matched or match_gamma(link)
    log_pref, spec = _op_form(link, gamma_star, mg)
    return math.exp(log_pref) * leading_sum(spec)


def outage_probability_quadrature(link: LinkParams, gamma_star: float = 1.0,
                                  matched: MatchedGamma | None = None) -> float:
    return snr_cdf_quadrature(link, gamma_star, matched)


# ---------------------------------------------------------------------------
# average bit error rate

def _aber_form(link: LinkParams, mod: ModulationParams, mg: MatchedGamma):
    r, l, mu = link.detection, mg.shape_l, link.mu_linear
    p, q = mod.p, mod.q
    spec = MeijerSpec(r, 2, (1.0 - p - l / r, 1.0 - l / r), _tail_b(r, l), mg.lambda4 / (q * mu))
    log_pref = (math.log(mg.lambda3) - (l / r) * math.log(q) - 0.5 * math.log(r) - LN2
                - math.lgamma(p) - (l / r) * math.log(mu))
    return log_pref, spec


def average_ber(link: LinkParams, mod: ModulationParams = ModulationParams(),
                matched: MatchedGamma | None = None) -> float:
    """Average of Gamma(p, q gamma) / (2 Gamma(p)) over the SNR law."""
    mg = matched or match_gamma(link)
    log_pref, spec = _aber_form(link, mod, mg)
    return _clamp(math.exp(log_pref) * meijer_g(spec), 0.0, 0.5, "ABER")


def average_ber_asymptotic(link: LinkParams, mod: ModulationParams = ModulationParams(),
                           matched: MatchedGamma | None = None) -> float:
    mg = matched or match_gamma(link)
    log_pref, spec = _aber_form(link, mod, mg)
    return math.exp(log_pref) * leading_sum(spec)


def _snr_breakpoints(link: LinkParams, mg: MatchedGamma, lo: int = -14, hi: int = 6) -> list:
    """Breakpoints spread geometrically over the support of the SNR law."""
    r, mu = link.detection, link.mu_linear
    base = mu * (1.0 / mg.lambda2) ** r
    return [base * 10.0 ** k for k in range(lo, hi)]


def average_ber_quadrature(link: LinkParams, mod: ModulationParams = ModulationParams(),
                           matched: MatchedGamma | None = None, epsrel: float = 1e-10) -> float:
    """q^p / (2 Gamma(p)) * int exp(-q g) g^{p-1} F(g) dg with the incomplete-gamma CDF."""
    mg = matched or match_gamma(link)
    p, q = mod.p, mod.q
    log_c = p * math.log(q) - LN2 - math.lgamma(p)

    def f(g):
        if g <= 0.0:
            return 0.0
        return math.exp(log_c - q * g + (p - 1.0) * math.log(g)) * snr_cdf(link, g, mg, method="gamma")

    pts = [v for v in _snr_breakpoints(link, mg) if v < 60.0 / q] + [k / q for k in (1, 5, 20)]
    return integrate_split(f, 0.0, math.inf, pts, epsabs=0.0, epsrel=epsrel)


# ---------------------------------------------------------------------------
# average channel capacity

def _acc_form(link: LinkParams, mg: MatchedGamma):
    r, l, mu = link.detection, mg.shape_l, link.mu_linear
    b = (-l / r, -l / r) + tuple(i / r for i in range(r))
    spec = MeijerSpec(r + 2, 1, (-l / r, 1.0 - l / r), b, mg.lambda4 / mu)
    log_pref = (math.log(mg.lambda1) - (l / r) * math.log(mu) - math.log(2.0 * LN2)
                - 0.5 * math.log(r) - 0.5 * (r - 1) * math.log(2.0 * math.pi))
    return log_pref, spec


def average_capacity(link: LinkParams, matched: MatchedGamma | None = None) -> float:
    """E[ln(1 + gamma)] / (2 ln 2) in bits/s/Hz."""
    mg = matched or match_gamma(link)
    log_pref, spec = _acc_form(link, mg)
    return max(math.exp(log_pref) * meijer_g(spec), 0.0)


def average_capacity_asymptotic(link: LinkParams, matched: MatchedGamma | None = None) -> float:
    """r + 2 leading residue terms; the double pole at -l/r is handled by an eps-split."""
    mg = matched or match_gamma(link)
    log_pref, spec = _acc_form(link, mg)
    return math.exp(log_pref) * leading_sum(spec)


def average_capacity_quadrature(link: LinkParams, matched: MatchedGamma | None = None,
                                epsrel: float = 1e-10) -> float:
    mg = matched or match_gamma(link)
    f = lambda g: math.log1p(g) * snr_pdf(link, g, mg) if g > 0 else 0.0
    return integrate_split(f, 0.0, math.inf, _snr_breakpoints(link, mg) + [1.0],
                           epsabs=0.0, epsrel=epsrel) / (2.0 * LN2)


# ---------------------------------------------------------------------------
# average secrecy capacity

def average_secrecy_capacity(scn: SecrecyScenario, matched_d: MatchedGamma | None = None,
                             matched_e: MatchedGamma | None = None, epsrel: float = 1e-9) -> float:
    """int F_e(g) (1 - F_d(g)) / (1 + g) dg, in nats (equals E[(ln(1+g_d) - ln(1+g_e))^+])."""
    md = matched_d or match_gamma(scn.link_d)
    me = matched_e or match_gamma(scn.link_e)

    def f(g):
        if g <= 0.0:
            return 0.0
        return (snr_cdf(scn.link_e, g, me, method="gamma") * snr_ccdf(scn.link_d, g, md)
                / (1.0 + g))

    pts = sorted(set(_snr_breakpoints(scn.link_d, md, -8, 8) + _snr_breakpoints(scn.link_e, me, -8, 8)
                     + [1.0]))
    return max(integrate_split(f, 0.0, math.inf, pts, epsabs=0.0, epsrel=epsrel), 0.0)


def asc_bivariate_spec(scn: SecrecyScenario, md: MatchedGamma, me: MatchedGamma) -> BivariateMeijerSpec:
    """Double Mellin-Barnes form of the secrecy-capacity functional.

    With F_e = P(l_e, .) and 1 - F_d = Q(l_d, .) written as Mellin-Barnes
    integrals and 1/(1+g) integrated out, the functional becomes a bivariate
    G with outer block Gamma(1+u) Gamma(-u) (u = s + t), an x-block
    G^{r,1}_{1,r+1}[. | 1; (l_e+i)/r, 0] and a y-block G^{r+1,0}_{1,r+1}[. | 1; (l_d+i)/r, 0].
    """
    r = scn.link_d.detection
    le, ld = me.shape_l, md.shape_l
    outer = GBlock(1, 1, (1.0,), (1.0,))
    inner_x = GBlock(r, 1, (1.0,), tuple((le + i) / r for i in range(r)) + (0.0,))
    inner_y = GBlock(r + 1, 0, (1.0,), tuple((ld + i) / r for i in range(r)) + (0.0,))
    return BivariateMeijerSpec(outer, inner_x, inner_y, me.lambda4 / scn.link_e.mu_linear,
                               md.lambda4 / scn.link_d.mu_linear)


def average_secrecy_capacity_closed_form(scn: SecrecyScenario, matched_d: MatchedGamma | None = None,
                                         matched_e: MatchedGamma | None = None) -> float:
    """Bivariate Meijer-G closed form; raises BivariateUnsupported when not evaluable."""
    md = matched_d or match_gamma(scn.link_d)
    me = matched_e or match_gamma(scn.link_e)
    r = scn.link_d.detection
    le, ld = me.shape_l, md.shape_l
    log_pref = ((1 - r) * math.log(2.0 * math.pi) + (le + ld - 1.0) * math.log(r)
                - math.lgamma(le) - math.lgamma(ld))
    return max(math.exp(log_pref) * meijer_g_bivariate(asc_bivariate_spec(scn, md, me)), 0.0)


# ---------------------------------------------------------------------------
# secrecy outage probability (lower bound)

def _sop_form(scn: SecrecyScenario, md: MatchedGamma, me: MatchedGamma):
    r = scn.link_d.detection
    ld, le = md.shape_l, me.shape_l
    omega = (md.lambda2 / me.lambda2) * (scn.psi * scn.link_e.mu_linear / scn.link_d.mu_linear) ** (1.0 / r)
    a = tuple(1.0 - (ld + i) / r for i in range(r)) + (1.0,)
    b = (0.0,) + tuple((le + i) / r for i in range(r))
    spec = MeijerSpec(r + 1, r, a, b, omega ** (-r))
    log_pref = ((1 - r) * math.log(2.0 * math.pi) + (ld + le - 1.0) * math.log(r)
                - math.lgamma(ld) - math.lgamma(le))
    return log_pref, spec, omega


def secrecy_outage_probability(scn: SecrecyScenario, matched_d: MatchedGamma | None = None,
                               matched_e: MatchedGamma | None = None) -> float:
    """SOP_L = Pr[gamma_d <= Psi gamma_e] from the G^{r+1,r}_{r+1,r+1} closed form."""
    md = matched_d or match_gamma(scn.link_d)
    me = matched_e or match_gamma(scn.link_e)
    log_pref, spec, _ = _sop_form(scn, md, me)
    return _clamp(math.exp(log_pref) * meijer_g(spec), 0.0, 1.0, "SOP_L")


def secrecy_outage_asymptotic(scn: SecrecyScenario, matched_d: MatchedGamma | None = None,
                              matched_e: MatchedGamma | None = None) -> float:
    """r leading terms in powers of (mu_e Psi / mu_d)^{(l_d + i)/r}."""
    md = matched_d or match_gamma(scn.link_d)
    me = matched_e or match_gamma(scn.link_e)
    log_pref, spec, _ = _sop_form(scn, md, me)
    return math.exp(log_pref) * leading_sum(spec)


def secrecy_outage_beta(scn: SecrecyScenario, matched_d: MatchedGamma | None = None,
                        matched_e: MatchedGamma | None = None) -> float:
    """Same bound via the beta-prime law of X_d / X_e (regularized incomplete beta)."""
    from scipy.special import betainc

    md = matched_d or match_gamma(scn.link_d)
    me = matched_e or match_gamma(scn.link_e)
    _, _, omega = _sop_form(scn, md, me)
    return float(betainc(md.shape_l, me.shape_l, omega / (1.0 + omega)))


def secrecy_outage_quadrature(scn: SecrecyScenario, matched_d: MatchedGamma | None = None,
                              matched_e: MatchedGamma | None = None, epsrel: float = 1e-10) -> float:
    """int F_d(Psi g) f_e(g) dg."""
    md = matched_d or match_gamma(scn.link_d)
    me = matched_e or match_gamma(scn.link_e)
    psi = scn.psi
    f = lambda g: snr_cdf(scn.link_d, psi * g, md, method="gamma") * snr_pdf(scn.link_e, g, me) \
        if g > 0 else 0.0
    pts = sorted(set(_snr_breakpoints(scn.link_e, me) + [v / psi for v in _snr_breakpoints(scn.link_d, md)]))
    return integrate_split(f, 0.0, math.inf, pts, epsabs=0.0, epsrel=epsrel)


# ---------------------------------------------------------------------------
# bundled evaluation

def evaluate_metric(metric: str, scn: SecrecyScenario, mod: ModulationParams = ModulationParams(),
                    gamma_star: float = 1.0, with_quadrature: bool = False,
                    with_bivariate: bool = False) -> MetricResult:
    """Closed form, asymptote and optional references of one metric with flags."""
    link = scn.link_d
    md = match_gamma(link)
    flags = {"analytic_continuation": md.analytic_continuation}
    if metric == "op":
        res = MetricResult(outage_probability(link, gamma_star, md),
                           outage_probability_asymptotic(link, gamma_star, md))
        if with_quadrature:
            res.quadrature_ref = outage_probability_quadrature(link, gamma_star, md)
        spec = _op_form(link, gamma_star, md)[1]
    elif metric == "aber":
        res = MetricResult(average_ber(link, mod, md), average_ber_asymptotic(link, mod, md))
        if with_quadrature:
            res.quadrature_ref = average_ber_quadrature(link, mod, md)
        spec = _aber_form(link, mod, md)[1]
    elif metric == "acc":
        res = MetricResult(average_capacity(link, md), average_capacity_asymptotic(link, md))
        if with_quadrature:
            res.quadrature_ref = average_capacity_quadrature(link, md)
        spec = _acc_form(link, md)[1]
    elif metric in ("asc", "sop"):
        me = match_gamma(scn.link_e)
        flags["analytic_continuation"] = md.analytic_continuation or me.analytic_continuation
        if metric == "asc":
            res = MetricResult(average_secrecy_capacity(scn, md, me))
            spec = None
            if with_bivariate:
                try:
                    res.quadrature_ref = average_secrecy_capacity_closed_form(scn, md, me)
                    flags["bivariate_unsupported"] = False
                except BivariateUnsupported:
                    flags["bivariate_unsupported"] = True
        else:
            res = MetricResult(secrecy_outage_probability(scn, md, me),
                               secrecy_outage_asymptotic(scn, md, me))
            if with_quadrature:
                res.quadrature_ref = secrecy_outage_quadrature(scn, md, me)
            spec = _sop_form(scn, md, me)[1]
    else:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    if spec is not None:
        flags["epsilon_split"] = not classify_poles(
            spec.inverted() if spec.p == spec.q and spec.z > 1 else spec).simple
    res.flags = flags
    return res


__all__ = [
    "ModulationParams", "SecrecyScenario", "MetricResult", "METRICS",
    "outage_probability", "outage_probability_asymptotic", "outage_probability_quadrature",
    "average_ber", "average_ber_asymptotic", "average_ber_quadrature",
    "average_capacity", "average_capacity_asymptotic", "average_capacity_quadrature",
    "average_secrecy_capacity", "average_secrecy_capacity_closed_form", "asc_bivariate_spec",
    "secrecy_outage_probability", "secrecy_outage_asymptotic", "secrecy_outage_beta",
    "secrecy_outage_quadrature", "evaluate_metric",
]
