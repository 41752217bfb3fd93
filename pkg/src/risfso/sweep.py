"""Parameter sweeps: closed form, asymptote and Monte Carlo per axis point."""

from __future__ import annotations

import copy
import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .channel import MomentMatchingError
from .config import SweepSpec, apply_axis, build_scenario, set_path
from .metrics import ModulationParams, evaluate_metric
from .montecarlo import SimConfig, estimate_metric
from .specfun import BivariateUnsupported, ContourError, GammaPoleError, SeriesDivergenceError

log = logging.getLogger(__name__)

CSV_SCHEMA = "risfso-sweep/1"
CSV_COLUMNS = ("curve", "axis", "axis_value", "metric", "closed_form", "asymptotic",
               "mc_estimate", "mc_std_error", "mc_mode", "analytic_continuation",
               "epsilon_split", "error")
ROW_ERRORS = (MomentMatchingError, ContourError, GammaPoleError, SeriesDivergenceError,
              BivariateUnsupported, OverflowError, ZeroDivisionError, ValueError)


@dataclass
class SweepRow:
    curve: str
    axis: str
    axis_value: object
    metric: str
    closed_form: float | None = None
    asymptotic: float | None = None
    mc_estimate: float | None = None
    mc_std_error: float | None = None
    mc_mode: str | None = None
    analytic_continuation: bool = False
    epsilon_split: bool = False
    error: str | None = None

    def as_dict(self) -> dict:
        return {c: getattr(self, c) for c in CSV_COLUMNS}


@dataclass
class RunReport:
    tool: str
    version: str
    seed: int | None
    config: dict | None = None
    rows: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(r.error for r in self.rows) or any(not v["passed"] for v in self.verdicts)

    def to_dict(self) -> dict:
        return {"tool": self.tool, "version": self.version, "seed": self.seed,
                "config": self.config, "rows": [r.as_dict() for r in self.rows],
                "verdicts": self.verdicts}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([_csv_cell(getattr(r, c)) for c in CSV_COLUMNS])
        return buf.getvalue()


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _finite(x):
    return None if x is None or not math.isfinite(x) else float(x)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("RISFSO_THREADS", "1")))
    except ValueError:
        return 1


def curve_scenario_tree(spec: SweepSpec, curve: dict, value) -> dict:
    tree = copy.deepcopy(spec.scenario)
    for p, v in curve.get("set", {}).items():
        set_path(tree, p, v)
    return apply_axis(tree, spec.axis, value)


def evaluate_point(spec: SweepSpec, curve: dict, value, with_mc: bool | None = None) -> SweepRow:
    row = SweepRow(curve["label"], spec.axis, value, spec.metric)
    mod = ModulationParams(float(spec.modulation["p"]), float(spec.modulation["q"]))
    try:
        scn = build_scenario(curve_scenario_tree(spec, curve, value))
        res = evaluate_metric(spec.metric, scn, mod, spec.gamma_star)
        row.closed_form = _finite(res.closed_form)
        row.asymptotic = _finite(res.asymptotic)
        row.analytic_continuation = bool(res.flags.get("analytic_continuation", False))
        row.epsilon_split = bool(res.flags.get("epsilon_split", False))
        mc = spec.sim.get("enabled", True) if with_mc is None else with_mc
        if mc:
            cfg = SimConfig(int(spec.sim["n_samples"]), int(spec.sim["seed"]), spec.sim["mode"],
                            int(spec.sim["batch_size"]))
            est = estimate_metric(spec.metric, scn, cfg, mod, spec.gamma_star)
            row.mc_estimate, row.mc_std_error, row.mc_mode = est.estimate, est.std_error, cfg.mode
    except ROW_ERRORS as exc:
        log.info("%s @ %s=%s: %s", curve["label"], spec.axis, value, exc)
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def run_sweep(spec: SweepSpec, with_mc: bool | None = None) -> RunReport:
    """Evaluate every (curve, axis value) pair; rows come back in curve then axis order."""
    tasks = [(c, v) for c in spec.curves for v in spec.values]
    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            rows = list(ex.map(lambda t: evaluate_point(spec, t[0], t[1], with_mc), tasks))
    else:
        rows = [evaluate_point(spec, c, v, with_mc) for c, v in tasks]
    return RunReport("risfso", __version__, int(spec.sim["seed"]), spec.to_dict(), rows)


def curves_by_label(report: RunReport) -> dict:
    out: dict = {}
    for r in report.rows:
        out.setdefault(r.curve, []).append(r)
    return out
