"""Validation report: every analytic result against an independent oracle.

Each check returns verdict dicts ``{criterion, name, measured, tolerance,
passed, detail}``. ``run_validation`` collects them into a RunReport whose
JSON body is a pure function of (level, seed, tolerance scale): no clocks,
no host data.
"""

from __future__ import annotations

import math

import numpy as np

from . import __version__
from .channel import (HopParams, LinkParams, MomentMatchingError, hop_moment, moment, moment_exists,
                      snr_cdf, snr_cdf_quadrature)
from .config import build_scenario, default_scenario
from .metrics import (ModulationParams, SecrecyScenario, average_ber, average_ber_asymptotic,
                      average_ber_quadrature, average_capacity, average_capacity_asymptotic,
                      average_capacity_quadrature, average_secrecy_capacity, outage_probability,
                      outage_probability_asymptotic, outage_probability_quadrature,
                      secrecy_outage_asymptotic, secrecy_outage_probability, secrecy_outage_quadrature)
from .montecarlo import SimConfig, estimate_metric, estimate_op, estimate_sop
from .presets import TRENDS, load_preset
from .specfun import MeijerSpec, classify_poles, decay_margin, meijer_g
from .sweep import RunReport, curves_by_label, run_sweep

LEVELS = {"quick": {"mc_samples": 1_000_000}, "full": {"mc_samples": 10_000_000}}
DEFAULT_SEED = 20240101
MC_SIGMAS = 3.0


def _verdict(criterion: str, name: str, measured: float, tolerance: float, detail: str = "") -> dict:
    ok = math.isfinite(measured) and measured <= tolerance
    return {"criterion": criterion, "name": name,
            "measured": float(measured) if math.isfinite(measured) else None,
            "tolerance": float(tolerance), "passed": bool(ok), "detail": detail}


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a)


def baseline_scenario(mu_d_db: float = 20.0) -> SecrecyScenario:
    tree = default_scenario()
    tree["link_d"]["mu_db"] = mu_d_db
    return build_scenario(tree)


# ---------------------------------------------------------------------------
# special functions

def random_meijer_spec(rng: np.random.Generator) -> MeijerSpec:
    """Random G^{m,n}_{p,q} with p <= q, a non-empty strip, simple poles and a convergent contour."""
    while True:
        q = int(rng.integers(1, 5))
        p = int(rng.integers(0, q + 1))
        m = int(rng.integers(1, q + 1))
        n = int(rng.integers(0, p + 1))
        b = list(rng.uniform(0.0, 3.0, q))
        amax = 1.0 + min(b[:m]) - 0.1
        a = [float(rng.uniform(-1.0, amax)) for _ in range(n)] + list(rng.uniform(-1.0, 2.0, p - n))
        zhi = 0.5 if p == q else 5.0
        z = float(np.exp(rng.uniform(math.log(0.05), math.log(zhi))))
        spec = MeijerSpec(m, n, tuple(float(v) for v in a), tuple(float(v) for v in b), z)
        if decay_margin(spec) > 0 and classify_poles(spec, 0.05).simple:
            return spec


def check_meijer_identities(tol: float = 1e-12) -> list:
    zs = np.geomspace(1e-6, 50.0, 60)
    e1 = max(abs(meijer_g(MeijerSpec(1, 0, (), (0.0,), z)) - math.exp(-z)) / math.exp(-z) for z in zs)
    e2 = max(_rel(meijer_g(MeijerSpec(1, 1, (1.0,), (1.0,), z)), z / (1.0 + z)) for z in zs)
    return [_verdict("1", "G^{1,0}_{0,1}(z) = exp(-z), z in [1e-6, 50]", e1, tol),
            _verdict("1", "G^{1,1}_{1,1}[z | 1; 1] = z/(1+z), z in [1e-6, 50]", e2, tol)]


def check_slater_vs_contour(n_specs: int = 100, seed: int = 7, tol: float = 1e-7) -> list:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_specs):
        spec = random_meijer_spec(rng)
        worst = max(worst, _rel(meijer_g(spec, "slater"), meijer_g(spec, "contour")))
    return [_verdict("1", f"Slater vs contour on {n_specs} random specs", worst, tol)]


# ---------------------------------------------------------------------------
# channel

def check_cdf_vs_pdf(n_points: int = 30, tol: float = 1e-6) -> list:
    out = []
    for r in (1, 2):
        link = baseline_scenario().link_d
        link = LinkParams(link.hop_s, link.hop_r, link.n_elements, r, link.mu_r_db,
                          link.allow_analytic_continuation)
        grid = link.mu_linear * np.geomspace(1e-4, 1e2, n_points)
        worst = max(_rel(snr_cdf(link, g), snr_cdf_quadrature(link, float(g))) for g in grid)
        out.append(_verdict("2", f"SNR CDF closed form vs PDF quadrature, r={r}, {n_points} points",
                            worst, tol))
    return out


def random_link(rng: np.random.Generator) -> LinkParams:
    def hop():
        return HopParams(float(rng.uniform(4.5, 15.0)), float(rng.uniform(1.1, 8.0)),
                         float(rng.uniform(0.5, 5.0)), float(rng.uniform(0.3, 1.0)))
    while True:
        link = LinkParams(hop(), hop(), int(rng.integers(1, 5)))
        if moment_exists(link, 2.0):
            return link


def check_moment_factorization(n_sets: int = 50, seed: int = 11, tol: float = 1e-10) -> list:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_sets):
        link = random_link(rng)
        for k in (0.5, 1.0, 1.5, 2.0):
            worst = max(worst, _rel(moment(link, k), hop_moment(link.hop_s, k) * hop_moment(link.hop_r, k)))
    return [_verdict("3", f"product moment vs per-hop Mellin product, {n_sets} sets", worst, tol)]


# ---------------------------------------------------------------------------
# metrics

def check_closed_vs_quadrature(n_points: int = 20, tol: float = 1e-5) -> list:
    mus = np.linspace(0.0, 40.0, n_points)
    mod = ModulationParams()
    worst = {"op": 0.0, "aber": 0.0, "acc": 0.0, "sop": 0.0}
    for mu in mus:
        scn = baseline_scenario(float(mu))
        d = scn.link_d
        worst["op"] = max(worst["op"], _rel(outage_probability(d), outage_probability_quadrature(d)))
        worst["aber"] = max(worst["aber"], _rel(average_ber(d, mod), average_ber_quadrature(d, mod)))
        worst["acc"] = max(worst["acc"], _rel(average_capacity(d), average_capacity_quadrature(d)))
        worst["sop"] = max(worst["sop"], _rel(secrecy_outage_probability(scn), secrecy_outage_quadrature(scn)))
    return [_verdict("4", f"{m.upper()} closed form vs definitional quadrature, {n_points} points", v, tol)
            for m, v in worst.items()]


def _closed_form(metric: str, scn: SecrecyScenario) -> float:
    d = scn.link_d
    return {"op": lambda: outage_probability(d), "aber": lambda: average_ber(d),
            "acc": lambda: average_capacity(d), "asc": lambda: average_secrecy_capacity(scn),
            "sop": lambda: secrecy_outage_probability(scn)}[metric]()


def check_mc_matched(n_samples: int, seed: int = DEFAULT_SEED, sigmas: float = MC_SIGMAS) -> list:
    out = []
    cfg = SimConfig(n_samples, seed, "matched")
    for metric in ("op", "aber", "acc", "asc", "sop"):
        worst, where = 0.0, ""
        for mu in (10.0, 20.0, 30.0, 40.0):
            scn = baseline_scenario(mu)
            est = estimate_metric(metric, scn, cfg)
            z = abs(est.estimate - _closed_form(metric, scn)) / est.std_error
            if z >= worst:
                worst, where = z, f"worst at mu_d={mu:g} dB"
        out.append(_verdict("5", f"{metric.upper()} closed form vs matched MC ({n_samples} samples), |dev|/SE",
                            worst, sigmas, where))
    return out


def _asymptotic_pairs():
    mod = ModulationParams()
    return {
        "op": (lambda s: outage_probability(s.link_d), lambda s: outage_probability_asymptotic(s.link_d)),
        "aber": (lambda s: average_ber(s.link_d, mod), lambda s: average_ber_asymptotic(s.link_d, mod)),
        "acc": (lambda s: average_capacity(s.link_d), lambda s: average_capacity_asymptotic(s.link_d)),
        "sop": (secrecy_outage_probability, secrecy_outage_asymptotic),
    }


def asymptotic_gaps(metric: str, mus=(50.0, 60.0, 70.0, 80.0)) -> list:
    exact, asym = _asymptotic_pairs()[metric]
    gaps = []
    for mu in mus:
        scn = baseline_scenario(mu)
        gaps.append(abs(asym(scn) / exact(scn) - 1.0))
    return gaps


def check_asymptotics(tol: float = 0.01) -> list:
    out = []
    for metric in ("op", "aber", "acc", "sop"):
        gaps = asymptotic_gaps(metric)
        monotone = all(b < a for a, b in zip(gaps, gaps[1:]))
        out.append(_verdict("6", f"{metric.upper()} asymptote vs exact at 80 dB", gaps[-1], tol,
                            "gaps 50..80 dB: " + ", ".join(f"{g:.3e}" for g in gaps)))
        out.append(_verdict("6", f"{metric.upper()} asymptote gap monotone from 50 dB",
                            0.0 if monotone else 1.0, 0.0))
    return out


# ---------------------------------------------------------------------------
# trends

def trend_violations(name: str, labels: list, direction: str, curves: dict) -> tuple[int, str]:
    """Count axis points where the curves fail the strict ordering; error rows count as violations."""
    bad, first = 0, ""
    rows = [curves[lab] for lab in labels]
    for j in range(len(rows[0])):
        vals = [r[j].closed_form for r in rows]
        if any(v is None for v in vals):
            bad += 1
            err = next(r[j].error for r in rows if r[j].closed_form is None)
            first = first or f"{rows[0][j].axis_value:g} dB: {err}"
            continue
        ok = all((b < a) if direction == "decreasing" else (b > a) for a, b in zip(vals, vals[1:]))
        if not ok:
            bad += 1
            first = first or f"{rows[0][j].axis_value:g} dB: " + ", ".join(f"{v:.6g}" for v in vals)
    return bad, first


def check_trends() -> list:
    out = []
    cache = {}
    for preset, name, labels, direction in TRENDS:
        if preset not in cache:
            cache[preset] = curves_by_label(run_sweep(load_preset(preset), with_mc=False))
        bad, first = trend_violations(name, labels, direction, cache[preset])
        detail = f"{preset}: " + (f"first violation at {first}" if bad else "strict at every point")
        out.append(_verdict("7", name, float(bad), 0.0, detail))
    return out


# ---------------------------------------------------------------------------
# symmetry and exact-mode gap

def symmetric_scenario() -> SecrecyScenario:
    d = baseline_scenario().link_d
    return SecrecyScenario(d, d, 0.0)


def check_symmetry(n_samples: int, seed: int = DEFAULT_SEED, tol: float = 1e-4,
                   sigmas: float = MC_SIGMAS) -> list:
    scn = symmetric_scenario()
    out = [_verdict("8", "SOP_L closed form = 0.5 for identical links, Psi = 1",
                    abs(secrecy_outage_probability(scn) - 0.5), tol)]
    for mode in ("matched", "exact"):
        est = estimate_sop(scn, SimConfig(n_samples, seed, mode))
        out.append(_verdict("8", f"SOP_L {mode} MC = 0.5 for identical links, |dev|/SE",
                            abs(est.estimate - 0.5) / est.std_error, sigmas))
    return out


def check_exact_vs_matched(n_samples: int, seed: int = DEFAULT_SEED, tol: float = 0.10) -> list:
    worst, where = 0.0, ""
    for mu in (10.0, 20.0, 30.0, 40.0):
        d = baseline_scenario(mu).link_d
        est = estimate_op(d, SimConfig(n_samples, seed, "exact"))
        gap = _rel(est.estimate, outage_probability(d))
        if gap >= worst:
            worst, where = gap, f"worst at mu_d={mu:g} dB (exact {est.estimate:.4g})"
    return [_verdict("mc", "exact-mode vs matched OP relative gap, mu_d in [10, 40] dB", worst, tol, where)]


# ---------------------------------------------------------------------------

def run_validation(level: str = "quick", seed: int = DEFAULT_SEED, tolerance_scale: float = 1.0) -> RunReport:
    """All acceptance checks at the requested level; tolerances are multiplied by ``tolerance_scale``."""
    if level not in LEVELS:
        raise ValueError(f"level must be one of {list(LEVELS)}")
    n = LEVELS[level]["mc_samples"]
    verdicts = []
    verdicts += check_meijer_identities()
    verdicts += check_slater_vs_contour()
    verdicts += check_cdf_vs_pdf()
    verdicts += check_moment_factorization()
    verdicts += check_closed_vs_quadrature()
    verdicts += check_mc_matched(n, seed)
    verdicts += check_asymptotics()
    try:
        verdicts += check_trends()
    except MomentMatchingError as exc:  # pragma: no cover - sweeps mark rows instead
        verdicts.append(_verdict("7", "trend evaluation", math.inf, 0.0, str(exc)))
    verdicts += check_symmetry(n, seed)
    verdicts += check_exact_vs_matched(n, seed)
    if tolerance_scale != 1.0:
        for v in verdicts:
            v["tolerance"] *= tolerance_scale
            m = v["measured"]
            v["passed"] = bool(m is not None and m <= v["tolerance"])
    return RunReport("risfso", __version__, seed, {"level": level, "tolerance_scale": tolerance_scale},
                     [], verdicts)


def summary_lines(report: RunReport) -> list:
    lines = []
    for v in report.verdicts:
        m = "nan" if v["measured"] is None else f"{v['measured']:.3e}"
        lines.append(f"[{'PASS' if v['passed'] else 'FAIL'}] ({v['criterion']}) {v['name']}: "
                     f"measured {m}, tolerance {v['tolerance']:.3e}" + (f"; {v['detail']}" if v["detail"] else ""))
    n_fail = sum(not v["passed"] for v in report.verdicts)
    lines.append(f"{len(report.verdicts) - n_fail} passed, {n_fail} failed")
    return lines
