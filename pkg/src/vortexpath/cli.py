"""Command line entry point: ``vortexpath solve|path|roundtrip|stability|checks``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import bundle as bd
from . import geometry as geo
from .checks import run_checks
from .equation import Family
from .errors import (
    AdmissibilityError,
    ConfigurationError,
    ConsistencyError,
    ConvergenceError,
    DenominatorError,
    PathFailure,
)
from .report import dump_json, emit_report
from .solver import PathSpec, continue_path, roundtrip, seed_state
from .stability import VortexBundleSpec, gieseker_verdict

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGENCE, EXIT_MONITOR, EXIT_CONSISTENCY = 0, 2, 3, 4, 5
SUBCOMMANDS = ("solve", "path", "roundtrip", "stability", "checks")

_number = {"type": "number"}
_int = {"type": "integer"}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "grid": {"type": "object", "additionalProperties": False, "required": ["n"],
                 "properties": {"n": {"type": "integer", "minimum": 8}}},
        "bundle": {"type": "object", "additionalProperties": False,
                   "properties": {"cap": {"type": "number", "exclusiveMinimum": 0}}},
        "family": {"type": "object", "additionalProperties": False, "required": ["tag"],
                   "properties": {"tag": {"enum": ["general", "bradlow", "cym", "vbma"]},
                                  "args": {"type": "object", "additionalProperties": _number}}},
        "path": {"type": "object", "additionalProperties": False, "required": ["waypoints"],
                 "properties": {"waypoints": {"type": "array", "minItems": 2,
                                              "items": {"type": "array", "items": _number,
                                                        "minItems": 2, "maxItems": 2}}}},
        "point": {"type": "object", "additionalProperties": False,
                  "properties": {"alpha": _number, "t": _number}},
        "tolerances": {"type": "object", "additionalProperties": False,
                       "properties": {"newton_tol": _number, "max_newton_iters": _int,
                                      "max_step": _number, "min_step": _number}},
        "perturbation": {"type": "object", "additionalProperties": False,
                         "properties": {"amplitude": _number, "kx": _int, "ky": _int}},
        "stability": {"type": "object", "additionalProperties": False,
                      "required": ["g", "tau", "power_k", "r1", "r2"],
                      "properties": {name: _int for name in ("g", "tau", "power_k", "r1", "r2")}},
        "output": {"type": "object", "additionalProperties": False,
                   "properties": {"directory": {"type": "string"}, "emit_fields": {"type": "boolean"}}},
    },
}

REQUIRED_SECTIONS = {
    "solve": ("grid", "family"),
    "path": ("grid", "family", "path"),
    "roundtrip": ("grid", "family", "path"),
    "stability": ("stability",),
    "checks": (),
}

DEFAULT_TOLERANCES = {"newton_tol": 1e-10, "max_newton_iters": 30, "max_step": 0.1, "min_step": 1e-4}

log = logging.getLogger("vortexpath")


def load_config(path, subcommand: str) -> dict:
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigurationError(f"config schema violation: {exc.message}") from exc
    missing = [name for name in REQUIRED_SECTIONS[subcommand] if name not in config]
    if missing:
        raise ConfigurationError(f"'{subcommand}' needs config sections {missing}")
    return config


def _setup(config):
    g = geo.make_grid(config["grid"]["n"])
    family = Family(config["family"]["tag"], config["family"].get("args", {}))
    cap = config.get("bundle", {}).get("cap", family.default_cap())
    return g, family, bd.make_background(g, cap)


def _path_spec(config) -> PathSpec:
    tol = {**DEFAULT_TOLERANCES, **config.get("tolerances", {})}
    return PathSpec(tuple(map(tuple, config["path"]["waypoints"])), tol["max_step"], tol["min_step"],
                    tol["newton_tol"], tol["max_newton_iters"])


def _monitor_status(states) -> int:
    return EXIT_OK if all(s.report.monitors_pass for s in states) else EXIT_MONITOR


def cmd_solve(config, out: Path, emit_fields: bool) -> int:
    g, family, b = _setup(config)
    tol = {**DEFAULT_TOLERANCES, **config.get("tolerances", {})}
    point = config.get("point", {})
    alpha, t = float(point.get("alpha", 0.0)), float(point.get("t", 1.0))
    spec = PathSpec(((alpha, t), (alpha + 1.0, t)), tol["max_step"], tol["min_step"],
                    tol["newton_tol"], tol["max_newton_iters"])
    state = seed_state(spec, family, b)
    emit_report([state], out, g, emit_fields)
    return _monitor_status([state])


def cmd_path(config, out: Path, emit_fields: bool) -> int:
    g, family, b = _setup(config)
    states = continue_path(_path_spec(config), family, b)
    emit_report(states, out, g, emit_fields)
    return _monitor_status(states)


def cmd_roundtrip(config, out: Path, emit_fields: bool) -> int:
    g, family, b = _setup(config)
    pert = config.get("perturbation", {"amplitude": 0.5, "kx": 0, "ky": 1})
    x, y = g.coords
    field = pert.get("amplitude", 0.5) * np.sin(2 * np.pi * (pert.get("kx", 0) * x + pert.get("ky", 1) * y))
    rt = roundtrip(_path_spec(config), family, b, field)
    states = rt.forward + [rt.perturbed] + rt.backward + rt.reforward
    legs = (["forward"] * len(rt.forward) + ["perturbed"] + ["backward"] * len(rt.backward)
            + ["reforward"] * len(rt.reforward))
    emit_report(states, out, g, emit_fields, legs, extra={"roundtrip_discrepancy": rt.discrepancy})
    return _monitor_status(states)


def cmd_stability(config, out: Path, emit_fields: bool) -> int:
    report = gieseker_verdict(VortexBundleSpec(**config["stability"]))
    out.mkdir(parents=True, exist_ok=True)
    dump_json(out / "stability.json", report.to_json())
    return EXIT_OK


def cmd_checks(config, out: Path, emit_fields: bool) -> int:
    n = config.get("grid", {}).get("n", 128)
    cap = config.get("bundle", {}).get("cap", 0.5)
    result = run_checks(n, cap)
    out.mkdir(parents=True, exist_ok=True)
    dump_json(out / "checks.json", result)
    return EXIT_OK if result["passed"] else EXIT_MONITOR


COMMANDS = {"solve": cmd_solve, "path": cmd_path, "roundtrip": cmd_roundtrip,
            "stability": cmd_stability, "checks": cmd_checks}


def run(subcommand: str, config_path, out=None, emit_fields: bool | None = None) -> int:
    """Run one subcommand and return its exit status."""
    try:
        config = load_config(config_path, subcommand)
        output = config.get("output", {})
        out_dir = Path(out or output.get("directory", "vortexpath-out"))
        emit = output.get("emit_fields", False) if emit_fields is None else emit_fields
        return COMMANDS[subcommand](config, out_dir, emit)
    except ConfigurationError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except (ConvergenceError, PathFailure, DenominatorError) as exc:
        log.error("no convergence: %s", exc)
        return EXIT_NONCONVERGENCE
    except AdmissibilityError as exc:
        log.error("hypothesis check failed (%s): %s", exc.flag, exc)
        return EXIT_MONITOR
    except ConsistencyError as exc:
        log.error("internal cross-check failed: %s", exc)
        return EXIT_CONSISTENCY


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="vortexpath", description=__doc__)
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--out", help="output directory (overrides output.directory)")
    parser.add_argument("--emit-fields", action="store_true", default=None,
                        help="also dump psi at every accepted state as CSV")
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return run(args.subcommand, args.config, args.out, args.emit_fields)


if __name__ == "__main__":
    sys.exit(main())
