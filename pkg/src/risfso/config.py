"""Sweep configuration: YAML text <-> validated SweepSpec.

All SNRs are given in dB on input and on every output axis; they are
converted to linear scale (10^(dB/10)) internally.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any

import yaml

from .channel import HopParams, LinkParams
from .metrics import METRICS, ModulationParams, SecrecyScenario
from .montecarlo import MODES, SimConfig

AXES = ("mu_d_db", "n_elements", "zeta", "alpha_beta_preset")
TURBULENCE = {"strong": (3.43, 1.43), "moderate": (5.52, 2.34), "weak": (10.67, 4.59)}
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    """Invalid configuration; ``errors`` lists (field path, message) pairs."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{p}: {m}" for p, m in self.errors))


def default_scenario() -> dict:
    """Baseline parameter set: moderate legitimate link, strong eavesdropper link."""
    return {
        "link_d": {
            "hop_s": {"alpha": 5.52, "beta": 2.34, "zeta": 1.0, "A": 1.0},
            "hop_r": {"alpha": 5.52, "beta": 2.34, "zeta": 1.0, "A": 1.0},
            "n_elements": 2, "detection": 1, "mu_db": 20.0,
        },
        "link_e": {
            "hop_s": {"alpha": 3.43, "beta": 1.43, "zeta": 1.0, "A": 1.0},
            "hop_r": {"alpha": 3.43, "beta": 1.43, "zeta": 1.0, "A": 1.0},
            "n_elements": 2, "detection": 1, "mu_db": 30.0,
        },
        "tau_s": 0.1,
        "allow_analytic_continuation": True,
    }


@dataclass
class SweepSpec:
    metric: str
    axis: str
    values: list
    scenario: dict = field(default_factory=default_scenario)
    curves: list = field(default_factory=lambda: [{"label": "default", "set": {}}])
    modulation: dict = field(default_factory=lambda: {"p": 1.0, "q": 1.0})
    gamma_star: float = 1.0
    sim: dict = field(default_factory=lambda: {"enabled": True, "n_samples": 100_000, "seed": 1,
                                               "mode": "matched", "batch_size": 65_536})
    output: dict = field(default_factory=lambda: {"path": None, "format": "csv"})
    name: str = "sweep"

    def to_dict(self) -> dict:
        return {
            "name": self.name, "metric": self.metric, "axis": self.axis, "values": list(self.values),
            "curves": copy.deepcopy(self.curves), "scenario": copy.deepcopy(self.scenario),
            "modulation": dict(self.modulation), "gamma_star": self.gamma_star,
            "sim": dict(self.sim), "output": dict(self.output),
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)


def _deep_merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _deep_merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def set_path(tree: dict, path: str, value: Any) -> None:
    """Assign ``value`` at a dotted path such as ``link_d.hop_s.zeta``."""
    keys = path.split(".")
    node = tree
    for k in keys[:-1]:
        if not isinstance(node.get(k), dict):
            raise KeyError(path)
        node = node[k]
    if keys[-1] not in node:
        raise KeyError(path)
    node[keys[-1]] = value


def _hop(d: dict, path: str, errors: list):
    try:
        return HopParams(float(d["alpha"]), float(d["beta"]), float(d.get("zeta", 1.0)),
                         float(d.get("A", 1.0)))
    except KeyError as exc:
        errors.append((path, f"missing field {exc.args[0]}"))
    except (TypeError, ValueError) as exc:
        errors.append((path, str(exc)))
    return None


def _link(d: dict, path: str, allow: bool, errors: list):
    if not isinstance(d, dict):
        errors.append((path, "must be a mapping"))
        return None
    hs = _hop(d.get("hop_s", {}), f"{path}.hop_s", errors)
    hr = _hop(d.get("hop_r", {}), f"{path}.hop_r", errors)
    if hs is None or hr is None:
        return None
    try:
        return LinkParams(hs, hr, int(d.get("n_elements", 2)), int(d.get("detection", 1)),
                          float(d.get("mu_db", 20.0)), allow)
    except (TypeError, ValueError) as exc:
        errors.append((path, str(exc)))
        return None


def build_scenario(tree: dict, path: str = "scenario") -> SecrecyScenario:
    errors: list = []
    allow = bool(tree.get("allow_analytic_continuation", False))
    ld = _link(tree.get("link_d"), f"{path}.link_d", allow, errors)
    le = _link(tree.get("link_e"), f"{path}.link_e", allow, errors)
    if errors:
        raise ConfigError(errors)
    try:
        return SecrecyScenario(ld, le, float(tree.get("tau_s", 0.1)))
    except (TypeError, ValueError) as exc:
        raise ConfigError([(path, str(exc))]) from exc


def apply_axis(tree: dict, axis: str, value) -> dict:
    """Scenario tree with one axis value applied."""
    out = copy.deepcopy(tree)
    d = out["link_d"]
    if axis == "mu_d_db":
        d["mu_db"] = float(value)
    elif axis == "n_elements":
        d["n_elements"] = int(value)
    elif axis == "zeta":
        d["hop_s"]["zeta"] = float(value)
        d["hop_r"]["zeta"] = float(value)
    elif axis == "alpha_beta_preset":
        a, b = TURBULENCE[value]
        for h in ("hop_s", "hop_r"):
            d[h]["alpha"], d[h]["beta"] = a, b
    return out


def parse_config(data: dict) -> SweepSpec:
    """Validate a decoded config mapping; raises ConfigError with field paths."""
    errors = []
    if not isinstance(data, dict):
        raise ConfigError([("<root>", "config must be a mapping")])
    known = {"name", "metric", "axis", "values", "curves", "scenario", "modulation", "gamma_star",
             "sim", "output"}
    for k in data:
        if k not in known:
            errors.append((k, "unknown field"))
    metric = data.get("metric")
    if metric not in METRICS:
        errors.append(("metric", f"must be one of {list(METRICS)}"))
    axis = data.get("axis", "mu_d_db")
    if axis not in AXES:
        errors.append(("axis", f"must be one of {list(AXES)}"))
    values = data.get("values")
    if not isinstance(values, list) or not values:
        errors.append(("values", "must be a non-empty list"))
        values = []
    elif axis == "alpha_beta_preset":
        for i, v in enumerate(values):
            if v not in TURBULENCE:
                errors.append((f"values[{i}]", f"must be one of {list(TURBULENCE)}"))
    else:
        try:
            nums = [float(v) for v in values]
            if any(b <= a for a, b in zip(nums, nums[1:])):
                errors.append(("values", "must be strictly increasing"))
        except (TypeError, ValueError):
            errors.append(("values", "must be numbers"))
    scenario = _deep_merge(default_scenario(), data.get("scenario") or {})
    curves = data.get("curves") or [{"label": "default", "set": {}}]
    if not isinstance(curves, list):
        errors.append(("curves", "must be a list"))
        curves = []
    for i, c in enumerate(curves):
        if not isinstance(c, dict) or "label" not in c:
            errors.append((f"curves[{i}]", "needs a label"))
            continue
        c.setdefault("set", {})
        for p, v in c["set"].items():
            try:
                set_path(copy.deepcopy(scenario), p, v)
            except KeyError:
                errors.append((f"curves[{i}].set.{p}", "unknown scenario path"))
    mod = {"p": 1.0, "q": 1.0, **(data.get("modulation") or {})}
    try:
        ModulationParams(float(mod["p"]), float(mod["q"]))
    except (TypeError, ValueError) as exc:
        errors.append(("modulation", str(exc)))
    gamma_star = data.get("gamma_star", 1.0)
    try:
        if not float(gamma_star) > 0:
            errors.append(("gamma_star", "must be positive"))
    except (TypeError, ValueError):
        errors.append(("gamma_star", "must be a number"))
    sim = {"enabled": True, "n_samples": 100_000, "seed": 1, "mode": "matched", "batch_size": 65_536,
           **(data.get("sim") or {})}
    if sim["mode"] not in MODES:
        errors.append(("sim.mode", f"must be one of {list(MODES)}"))
    else:
        try:
            SimConfig(int(sim["n_samples"]), int(sim["seed"]), sim["mode"], int(sim["batch_size"]))
        except (TypeError, ValueError) as exc:
            errors.append(("sim", str(exc)))
    output = {"path": None, "format": "csv", **(data.get("output") or {})}
    if output["format"] not in FORMATS:
        errors.append(("output.format", f"must be one of {list(FORMATS)}"))
    if not errors:
        for i, c in enumerate(curves):
            tree = copy.deepcopy(scenario)
            for p, v in c["set"].items():
                set_path(tree, p, v)
            try:
                build_scenario(apply_axis(tree, axis, values[0]))
            except ConfigError as exc:
                errors.extend((f"curves[{i}].{p}", m) for p, m in exc.errors)
    if errors:
        raise ConfigError(errors)
    return SweepSpec(metric, axis, list(values), scenario, curves, mod, float(gamma_star), sim, output,
                     str(data.get("name", "sweep")))


def load_config(text: str) -> SweepSpec:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([("<yaml>", str(exc))]) from exc
    return parse_config(data)
