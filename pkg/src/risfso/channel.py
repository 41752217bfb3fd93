"""RIS-assisted IGGG link model: hop/link records, moments, Gamma matching, SNR law.

Each RIS element contributes M_t = I'_s I'_r, the product of two composite
hops (inverted Gamma-Gamma turbulence times pointing error). The sum of N
such terms is replaced by a Gamma(l, k) variate matching its first two
moments, and the instantaneous SNR is gamma = mu (Y / E[M])^r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .specfun import GammaPoleError, MeijerSpec, meijer_g, signed_log_gamma
from .quadrature import integrate_split


class MomentMatchingError(ValueError):
    """The Gamma moment match is not available for this parameter set."""


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class HopParams:
    """Turbulence (alpha, beta; lambda = alpha - 2) and pointing error (zeta, A) of one hop."""

    alpha: float
    beta: float
    zeta: float = 1.0
    pointing_loss_A: float = 1.0

    def __post_init__(self):
        if not self.alpha > 3.0:
            raise ValueError(f"alpha must exceed 3 so that lambda - 1 > 0 (got {self.alpha})")
        if not self.beta > 0.0:
            raise ValueError("beta must be positive")
        if not self.zeta > 0.0:
            raise ValueError("zeta must be positive")
        if not self.pointing_loss_A > 0.0:
            raise ValueError("pointing loss A must be positive")

    @property
    def lam(self) -> float:
        return self.alpha - 2.0

    @property
    def lambda5(self) -> float:
        return math.exp(-(math.lgamma(self.alpha) + math.lgamma(self.beta) + math.lgamma(self.lam)))

    @property
    def scale(self) -> float:
        """alpha beta / ((lambda - 1) A), the argument scale of the composite density."""
        return self.alpha * self.beta / ((self.lam - 1.0) * self.pointing_loss_A)


@dataclass(frozen=True)
class LinkParams:
    """Two hops through an N-element RIS with detection order r and electrical SNR in dB."""

    hop_s: HopParams
    hop_r: HopParams
    n_elements: int = 2
    detection: int = 1
    mu_r_db: float = 20.0
    allow_analytic_continuation: bool = False

    def __post_init__(self):
        if self.detection not in (1, 2):
            raise ValueError("detection order r must be 1 (heterodyne) or 2 (IM/DD)")
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ValueError("n_elements must be a positive integer")
        if not math.isfinite(self.mu_r_db):
            raise ValueError("mu_r_db must be finite")

    @property
    def mu_linear(self) -> float:
        return db_to_linear(self.mu_r_db)

    def with_mu_db(self, mu_db: float) -> "LinkParams":
        return LinkParams(self.hop_s, self.hop_r, self.n_elements, self.detection, mu_db,
                          self.allow_analytic_continuation)


# ---------------------------------------------------------------------------
# moments

def _log_gamma_ratio(x: float, y: float) -> tuple[float, int]:
    """log|Gamma(x)/Gamma(y)| and sign, exact for small integer y - x."""
    d = y - x
    k = round(d)
    if 1 <= k <= 16 and abs(d - k) <= 1e-12 * max(1.0, abs(x)):
        prod = 1.0
        for i in range(k):
            prod *= x + i
        return -math.log(abs(prod)), (1 if prod > 0 else -1)
    lx, sx = signed_log_gamma(x)
    ly, sy = signed_log_gamma(y)
    return lx - ly, sx * sy


def hop_moment(hop: HopParams, k: float) -> float:
    """E[I'^k] of one composite hop (continued analytically when lambda <= k)."""
    lam = hop.lam
    log_v = k * math.log((lam - 1.0) * hop.pointing_loss_A / (hop.alpha * hop.beta))
    sign = 1
    for num, den in ((hop.alpha + k, hop.alpha), (hop.beta + k, hop.beta), (lam - k, lam)):
        lv, s = _log_gamma_ratio(num, den)
        log_v += lv
        sign *= s
    zeta2 = hop.zeta ** 2
    return sign * math.exp(log_v) * zeta2 / (zeta2 + k)


def moment_exists(link: LinkParams, k: float) -> bool:
    return link.hop_s.lam > k and link.hop_r.lam > k


@dataclass(frozen=True)
class MomentTable:
    """Constants and parameter rows of the per-element product M = I'_s I'_r."""

    lambda5_s: float
    lambda5_r: float
    lambda6: float
    lambda7: float
    lambda8: float
    lambda9: float
    P: tuple
    R: tuple
    first: float
    second: float
    valid_first: bool
    valid_second: bool


def moment_table(link: LinkParams) -> MomentTable:
    s, r = link.hop_s, link.hop_r
    zs2, zr2 = s.zeta ** 2, r.zeta ** 2
    P = (1.0 - r.lam, 1.0 - s.lam, 1.0 + zs2, 1.0 + zr2)
    R = (zr2, r.alpha, r.beta, zs2, s.alpha, s.beta)
    return MomentTable(s.lambda5, r.lambda5, zs2 * s.lambda5, zr2 * r.lambda5, s.scale, r.scale,
                       P, R, moment(link, 1.0), moment(link, 2.0),
                       moment_exists(link, 1.0), moment_exists(link, 2.0))


def moment(link: LinkParams, k: float) -> float:
    """E[M^k] from the gamma-product moment formula, with signed log-gamma.

    When ``moment_exists(link, k)`` is false the value is the analytic
    continuation of the formula, not a true moment. Raises GammaPoleError
    when lambda - k hits a non-positive integer.
    """
    if k < 0:
        raise ValueError("moment order must be non-negative")
    s, r = link.hop_s, link.hop_r
    zs2, zr2 = s.zeta ** 2, r.zeta ** 2
    P = (1.0 - r.lam, 1.0 - s.lam, 1.0 + zs2, 1.0 + zr2)
    R = (zr2, r.alpha, r.beta, zs2, s.alpha, s.beta)
    log_v = -k * math.log(s.scale * r.scale)
    # Lambda6 Lambda7 = zeta_s^2 zeta_r^2 Lambda5_s Lambda5_r, kept in log form
    log_v += 2.0 * math.log(s.zeta) + 2.0 * math.log(r.zeta)
    sign = 1
    for x in (s.alpha, s.beta, s.lam, r.alpha, r.beta, r.lam):
        log_v -= signed_log_gamma(x)[0]
    # the two pointing factors Gamma(zeta^2 + k) / Gamma(1 + zeta^2 + k) pair up
    for num, den in ((R[0] + k, P[3] + k), (R[3] + k, P[2] + k)):
        lv, sg = _log_gamma_ratio(num, den)
        log_v += lv
        sign *= sg
    for x in (R[1] + k, R[2] + k, R[4] + k, R[5] + k, 1.0 - P[0] - k, 1.0 - P[1] - k):
        lg, sg = signed_log_gamma(x)
        log_v += lg
        sign *= sg
    return sign * math.exp(log_v)


# ---------------------------------------------------------------------------
# Gamma matching

@dataclass(frozen=True)
class MatchedGamma:
    """Gamma(l, k) surrogate of the RIS sum and the derived SNR-law constants."""

    mean_m: float
    var_m: float
    shape_l: float
    scale_k: float
    n_elements: int
    detection: int
    analytic_continuation: bool = False
    lambda1: float = field(init=False)
    lambda2: float = field(init=False)
    lambda3: float = field(init=False)
    lambda4: float = field(init=False)

    def __post_init__(self):
        if not (self.mean_m > 0 and self.var_m > 0 and self.shape_l > 0 and self.scale_k > 0):
            raise MomentMatchingError("moment matching undefined for this turbulence regime")
        r = self.detection
        l2 = self.mean_m / self.scale_k
        l1 = math.exp(self.shape_l * math.log(l2) - math.lgamma(self.shape_l))
        object.__setattr__(self, "lambda2", l2)
        object.__setattr__(self, "lambda1", l1)
        object.__setattr__(self, "lambda3", l1 / (2.0 * math.pi) ** ((r - 1) / 2.0))
        object.__setattr__(self, "lambda4", (l2 / r) ** r)
        if abs(l2 ** r / r ** r - self.lambda4) > 1e-12 * self.lambda4:
            raise AssertionError("Lambda4 inconsistent with Lambda2")

    @property
    def log_lambda1(self) -> float:
        return self.shape_l * math.log(self.lambda2) - math.lgamma(self.shape_l)


def match_gamma_from_moments(m1: float, m2: float, n_elements: int, detection: int = 1,
                             analytic_continuation: bool = False) -> MatchedGamma:
    """Gamma match of a sum of ``n_elements`` i.i.d. terms with raw moments m1, m2."""
    var = m2 - m1 * m1
    if not (var > 0.0 and m1 > 0.0):
        raise MomentMatchingError("moment matching undefined for this turbulence regime "
                                  f"(E[M]={m1!r}, Var[M]={var!r})")
    return MatchedGamma(m1, var, n_elements * m1 * m1 / var, var / m1, n_elements, detection,
                        analytic_continuation)


def match_gamma(link: LinkParams, allow_analytic_continuation: bool | None = None) -> MatchedGamma:
    """Laguerre first-term (two-moment Gamma) match of the RIS sum.

    Needs lambda_s, lambda_r > 2 for a finite variance; otherwise the
    signed-gamma continuation is used only when explicitly allowed, and the
    result carries ``analytic_continuation=True``.
    """
    allow = link.allow_analytic_continuation if allow_analytic_continuation is None \
        else allow_analytic_continuation
    valid = moment_exists(link, 2.0)
    if not valid and not allow:
        raise MomentMatchingError(
            "second moment diverges (lambda <= 2); pass allow_analytic_continuation=True "
            "to use the continued moment formula")
    try:
        m1, m2 = moment(link, 1.0), moment(link, 2.0)
    except GammaPoleError as exc:
        raise MomentMatchingError(f"moment formula hits a gamma pole: {exc}") from exc
    return match_gamma_from_moments(m1, m2, link.n_elements, link.detection, not valid)


# ---------------------------------------------------------------------------
# densities

def igg_pdf(hop: HopParams, x: float) -> float:
    """Inverted Gamma-Gamma turbulence density (unit mean)."""
    if not x > 0:
        raise ValueError("igg_pdf needs x > 0")
    lam = hop.lam
    g = meijer_g(MeijerSpec(2, 1, (1.0 - lam,), (hop.alpha, hop.beta),
                            hop.alpha * hop.beta * x / (lam - 1.0)))
    return max(hop.lambda5 / x * g, 0.0)


def pointing_pdf(hop: HopParams, i: float) -> float:
    """Pointing-error density zeta^2 / A^{zeta^2} i^{zeta^2 - 1} on (0, A]."""
    A = hop.pointing_loss_A
    if not 0.0 < i <= A:
        return 0.0
    z2 = hop.zeta ** 2
    return z2 / A * (i / A) ** (z2 - 1.0)


def composite_pdf(hop: HopParams, i: float) -> float:
    """Density of the turbulence times pointing-error irradiance of one hop."""
    if not i > 0:
        raise ValueError("composite_pdf needs i > 0")
    lam = hop.lam
    z2 = hop.zeta ** 2
    g = meijer_g(MeijerSpec(3, 1, (1.0 - lam, 1.0 + z2), (z2, hop.alpha, hop.beta), hop.scale * i))
    return max(hop.lambda5 * z2 / i * g, 0.0)


def product_pdf(link: LinkParams, i: float) -> float:
    """Density of one element's product M = I'_s I'_r.

    Evaluated from the G^{2,6}_{6,4} form at 1/(Lambda8 Lambda9 i); meijer_g
    inverts it to G^{6,2}_{4,6}.
    """
    if not i > 0:
        raise ValueError("product_pdf needs i > 0")
    t = moment_table(link)
    P, R = t.P, t.R
    spec = MeijerSpec(2, 6, tuple(1.0 - v for v in R),
                      (1.0 - P[0], 1.0 - P[1], 1.0 - P[2], 1.0 - P[3]),
                      1.0 / (t.lambda8 * t.lambda9 * i))
    return max(t.lambda6 * t.lambda7 / i * meijer_g(spec), 0.0)


# ---------------------------------------------------------------------------
# SNR law

def _matched(link: LinkParams, matched: MatchedGamma | None) -> MatchedGamma:
    return matched if matched is not None else match_gamma(link)


def snr_pdf(link: LinkParams, gamma, matched: MatchedGamma | None = None):
    """Density of the end-to-end SNR; G^{1,0}_{0,1}(x) is evaluated as exp(-x).

    Accepts scalars or arrays.
    """
    mg = _matched(link, matched)
    r, l, mu = link.detection, mg.shape_l, link.mu_linear
    g = np.asarray(gamma, dtype=float)
    if np.any(g <= 0):
        raise ValueError("snr_pdf needs gamma > 0")
    u = g / mu
    log_f = (mg.log_lambda1 - math.log(r) - math.log(mu) + (l / r - 1.0) * np.log(u)
             - mg.lambda2 * u ** (1.0 / r))
    out = np.exp(log_f)
    return float(out) if out.ndim == 0 else out


def snr_cdf(link: LinkParams, gamma, matched: MatchedGamma | None = None, method: str = "meijer"):
    """CDF of the end-to-end SNR.

    ``method='meijer'`` evaluates the G^{r,1}_{1,r+1} closed form;
    ``method='gamma'`` uses the equivalent regularized incomplete gamma
    P(l, Lambda2 (gamma/mu)^{1/r}) and is vectorized.
    """
    mg = _matched(link, matched)
    r, l, mu = link.detection, mg.shape_l, link.mu_linear
    if method == "gamma":
        g = np.asarray(gamma, dtype=float)
        if np.any(g < 0):
            raise ValueError("snr_cdf needs gamma >= 0")
        x = mg.lambda2 * (g / mu) ** (1.0 / r)
        out = 1.0 - _backend.gammaincc_array(l, x.ravel()).reshape(x.shape)
        out = np.clip(out, 0.0, 1.0)
        return float(out) if out.ndim == 0 else out
    if method != "meijer":
        raise ValueError(f"unknown method {method!r}")
    if np.ndim(gamma) > 0:
        return np.array([snr_cdf(link, float(v), mg) for v in np.ravel(gamma)]).reshape(np.shape(gamma))
    gamma = float(gamma)
    if gamma < 0:
        raise ValueError("snr_cdf needs gamma >= 0")
    if gamma == 0.0:
        return 0.0
    b = tuple(i / r for i in range(r)) + (-l / r,)
    g = meijer_g(MeijerSpec(r, 1, (1.0 - l / r,), b, mg.lambda4 * gamma / mu))
    log_pref = (math.log(mg.lambda3) - 0.5 * math.log(r) + (l / r) * math.log(gamma / mu))
    return min(max(math.exp(log_pref) * g, 0.0), 1.0)


def snr_ccdf(link: LinkParams, gamma, matched: MatchedGamma | None = None):
    """Complementary CDF 1 - F(gamma) as Q(l, Lambda2 (gamma/mu)^{1/r}), without cancellation."""
    mg = _matched(link, matched)
    g = np.asarray(gamma, dtype=float)
    x = mg.lambda2 * (g / link.mu_linear) ** (1.0 / link.detection)
    out = _backend.gammaincc_array(mg.shape_l, x.ravel()).reshape(x.shape)
    return float(out) if out.ndim == 0 else out


def snr_cdf_quadrature(link: LinkParams, gamma: float, matched: MatchedGamma | None = None,
                       epsrel: float = 1e-10) -> float:
    """Reference CDF: adaptive quadrature of ``snr_pdf`` on [0, gamma]."""
    mg = _matched(link, matched)
    r, l, mu = link.detection, mg.shape_l, link.mu_linear
    if gamma <= 0:
        return 0.0
    # geometric breakpoints around the bulk of the density
    mode = mu * (max(l - 1.0, 1e-3) / mg.lambda2) ** r
    pts = [v for v in (mode * 10.0 ** k for k in range(-12, 4)) if v < gamma]
    f = lambda x: snr_pdf(link, x, mg)
    return integrate_split(f, 0.0, gamma, pts, epsabs=0.0, epsrel=epsrel)
