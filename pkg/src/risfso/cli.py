"""Command-line front end.

    risfso sweep CONFIG.yaml | --preset fig2  [--seed N] [--samples N] [--mode exact|matched]
                                              [--no-mc] [--out PATH] [--format csv|json]
    risfso validate [--level quick|full] [--seed N] [--out PATH]
    risfso presets list | show NAME

Exit codes: 0 success, 1 runtime or numerical failure (including failed
validation checks and sweep rows carrying an error marker), 2 config error.
Worker threads for sweeps and Monte Carlo batches come from RISFSO_THREADS.
"""

from __future__ import annotations

import argparse
import logging
import sys

import yaml

from . import __version__, presets
from .config import ConfigError, load_config, parse_config
from .validation import DEFAULT_SEED, LEVELS, run_validation, summary_lines

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2

log = logging.getLogger("risfso")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="risfso", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"risfso {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log per-row diagnostics")
    sub = p.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run a parameter sweep from a YAML config or a preset")
    sw.add_argument("config", nargs="?", help="YAML sweep config")
    sw.add_argument("--preset", help="named preset instead of a config file (see 'presets list')")
    sw.add_argument("--seed", type=int, help="Monte Carlo seed")
    sw.add_argument("--samples", type=int, help="Monte Carlo samples per point")
    sw.add_argument("--mode", choices=("exact", "matched"), help="Monte Carlo channel model")
    sw.add_argument("--no-mc", action="store_true", help="skip the Monte Carlo column")
    sw.add_argument("--out", help="output path (default: stdout)")
    sw.add_argument("--format", choices=("csv", "json"), help="output format (default: csv)")

    va = sub.add_parser("validate", help="check every analytic result against its oracle")
    va.add_argument("--level", choices=tuple(LEVELS), default="quick")
    va.add_argument("--seed", type=int, default=DEFAULT_SEED)
    va.add_argument("--out", help="write the JSON report here (default: stdout)")
    # test hook: scales every tolerance, so 0 forces failures
    va.add_argument("--tolerance-scale", type=float, default=1.0, help=argparse.SUPPRESS)

    pr = sub.add_parser("presets", help="list or show the built-in presets")
    prs = pr.add_subparsers(dest="action", required=True)
    prs.add_parser("list")
    sh = prs.add_parser("show")
    sh.add_argument("name")
    return p


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_error(exc: ConfigError) -> int:
    print("config error:", file=sys.stderr)
    for path, msg in exc.errors:
        print(f"  {path}: {msg}", file=sys.stderr)
    return EXIT_CONFIG


def _load_sweep(args):
    if bool(args.config) == bool(args.preset):
        raise ConfigError([("<args>", "give exactly one of CONFIG or --preset")])
    if args.preset:
        try:
            data = presets.preset_dict(args.preset)
        except KeyError as exc:
            raise ConfigError([("--preset", exc.args[0])]) from exc
    else:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = yaml.safe_load(fh)
        except OSError as exc:
            raise ConfigError([("<config>", str(exc))]) from exc
        except yaml.YAMLError as exc:
            raise ConfigError([("<yaml>", str(exc))]) from exc
    if not isinstance(data, dict):
        raise ConfigError([("<root>", "config must be a mapping")])
    sim = dict(data.get("sim") or {})
    for key, val in (("seed", args.seed), ("n_samples", args.samples), ("mode", args.mode)):
        if val is not None:
            sim[key] = val
    if args.no_mc:
        sim["enabled"] = False
    data["sim"] = sim
    output = dict(data.get("output") or {})
    if args.out is not None:
        output["path"] = args.out
    if args.format is not None:
        output["format"] = args.format
    data["output"] = output
    return parse_config(data)


def cmd_sweep(args) -> int:
    from .sweep import run_sweep

    try:
        spec = _load_sweep(args)
    except ConfigError as exc:
        return _config_error(exc)
    report = run_sweep(spec)
    text = report.to_json() if spec.output["format"] == "json" else report.to_csv()
    _emit(text, spec.output.get("path"))
    bad = [r for r in report.rows if r.error]
    if bad:
        print(f"{len(bad)} of {len(report.rows)} rows carry an error marker", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_validate(args) -> int:
    report = run_validation(args.level, args.seed, args.tolerance_scale)
    _emit(report.to_json(), args.out)
    for line in summary_lines(report):
        print(line, file=sys.stderr)
    return EXIT_RUNTIME if report.failed else EXIT_OK


def cmd_presets(args) -> int:
    if args.action == "list":
        for name in presets.names():
            print(f"{name}\t{presets.description(name)}")
        return EXIT_OK
    try:
        print(presets.load_preset(args.name).to_yaml(), end="")
    except KeyError as exc:
        print(f"config error:\n  --preset: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    handlers = {"sweep": cmd_sweep, "validate": cmd_validate, "presets": cmd_presets}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        return _config_error(exc)
    except (ArithmeticError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
