"""Named sweep presets reproducing the baseline figure set.

Every preset starts from ``config.default_scenario()`` (N = 2 on both links,
moderate legitimate link, strong eavesdropper link, zeta = 1, tau_s = 0.1,
r = 1, (p, q) = (1, 1), mu_e = 30 dB) and varies one parameter per curve
group. ``TRENDS`` lists the orderings each group is expected to obey.
"""

from __future__ import annotations

import copy

from .config import TURBULENCE, SweepSpec, parse_config

MU_GRID = [float(x) for x in range(0, 65, 5)]
ACC_GRID = [float(x) for x in range(0, 45, 5)]
ZETAS = (1.0, 2.0, 4.0)
ORDER = ("strong", "moderate", "weak")


def _turb(prefix: str, name: str) -> dict:
    a, b = TURBULENCE[name]
    return {f"{prefix}.alpha": a, f"{prefix}.beta": b}


def _both_hops(link: str, name: str) -> dict:
    return {**_turb(f"{link}.hop_s", name), **_turb(f"{link}.hop_r", name)}


_SIM = {"enabled": True, "n_samples": 100_000, "seed": 1, "mode": "matched", "batch_size": 65_536}

_RAW = {
    "fig2": {
        "description": "OP vs mu_d for N_d in {1, 2, 3}",
        "metric": "op", "values": MU_GRID,
        "curves": [{"label": f"N_d={n}", "set": {"link_d.n_elements": n}} for n in (1, 2, 3)],
    },
    "fig3": {
        "description": "ABER vs mu_d for d-link turbulence and zeta_sd",
        "metric": "aber", "values": MU_GRID,
        "curves": [{"label": t, "set": _both_hops("link_d", t)} for t in ORDER]
        + [{"label": f"zeta_sd={z:g}", "set": {"link_d.hop_s.zeta": z}} for z in ZETAS],
    },
    "fig4": {
        "description": "ASC vs mu_d for d-link turbulence and zeta_sd",
        "metric": "asc", "values": MU_GRID,
        "curves": [{"label": t, "set": _both_hops("link_d", t)} for t in ORDER]
        + [{"label": f"zeta_sd={z:g}", "set": {"link_d.hop_s.zeta": z}} for z in ZETAS],
    },
    "fig5": {
        "description": "ACC vs mu_d for zeta_rd and detection order r",
        "metric": "acc", "values": ACC_GRID,
        "curves": [{"label": f"r={r},zeta_rd={z:g}",
                    "set": {"link_d.detection": r, "link_e.detection": r,
                            "link_d.hop_r.zeta": z}}
                   for r in (1, 2) for z in ZETAS],
    },
    "fig6": {
        "description": "SOP_L vs mu_d for e-link r-hop turbulence and zeta_re",
        "metric": "sop", "values": MU_GRID,
        "curves": [{"label": f"re_{t}", "set": _turb("link_e.hop_r", t)} for t in ORDER]
        + [{"label": f"zeta_re={z:g}", "set": {"link_e.hop_r.zeta": z}} for z in ZETAS],
    },
    "fig7": {
        "description": "SOP_L vs mu_d for zeta_rd and mu_e",
        "metric": "sop", "values": MU_GRID,
        "curves": [{"label": f"zeta_rd={z:g}", "set": {"link_d.hop_r.zeta": z}} for z in ZETAS]
        + [{"label": f"mu_e={m:g}dB", "set": {"link_e.mu_db": m}} for m in (20.0, 30.0, 40.0)],
    },
    "fig8": {
        "description": "SOP_L vs mu_d for d-link turbulence and zeta_sd",
        "metric": "sop", "values": MU_GRID,
        "curves": [{"label": t, "set": _both_hops("link_d", t)} for t in ORDER]
        + [{"label": f"zeta_sd={z:g}", "set": {"link_d.hop_s.zeta": z}} for z in ZETAS],
    },
}

# (preset, trend name, curve labels, direction): along the label list the
# metric must be strictly "decreasing" or "increasing" at every axis point.
TRENDS = [
    ("fig2", "OP decreases with N_d", ["N_d=1", "N_d=2", "N_d=3"], "decreasing"),
    ("fig3", "ABER improves strong -> weak", list(ORDER), "decreasing"),
    ("fig3", "ABER improves with zeta_sd", [f"zeta_sd={z:g}" for z in ZETAS], "decreasing"),
    ("fig4", "ASC improves strong -> weak", list(ORDER), "increasing"),
    ("fig4", "ASC improves with zeta_sd", [f"zeta_sd={z:g}" for z in ZETAS], "increasing"),
    ("fig5", "ACC higher for r=1 than r=2", ["r=1,zeta_rd=1", "r=2,zeta_rd=1"], "decreasing"),
    ("fig5", "ACC increases with zeta_rd (r=1)", [f"r=1,zeta_rd={z:g}" for z in ZETAS], "increasing"),
    ("fig5", "ACC increases with zeta_rd (r=2)", [f"r=2,zeta_rd={z:g}" for z in ZETAS], "increasing"),
    ("fig6", "SOP_L increases with e-side (alpha_re, beta_re)", [f"re_{t}" for t in ORDER], "increasing"),
    ("fig6", "SOP_L increases with zeta_re", [f"zeta_re={z:g}" for z in ZETAS], "increasing"),
    ("fig7", "SOP_L decreases with zeta_rd", [f"zeta_rd={z:g}" for z in ZETAS], "decreasing"),
    ("fig7", "SOP_L increases with mu_e", ["mu_e=20dB", "mu_e=30dB", "mu_e=40dB"], "increasing"),
    ("fig8", "SOP_L decreases strong -> weak d-link", list(ORDER), "decreasing"),
    ("fig8", "SOP_L decreases with zeta_sd", [f"zeta_sd={z:g}" for z in ZETAS], "decreasing"),
]


def names() -> list:
    return sorted(_RAW)


def description(name: str) -> str:
    return _RAW[name]["description"]


def preset_dict(name: str) -> dict:
    if name not in _RAW:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(names())}")
    raw = copy.deepcopy(_RAW[name])
    raw.pop("description")
    return {"name": name, "axis": "mu_d_db", "sim": dict(_SIM), **raw}


def load_preset(name: str) -> SweepSpec:
    return parse_config(preset_dict(name))
