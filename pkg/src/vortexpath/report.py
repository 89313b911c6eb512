"""JSON ledgers, summaries and CSV traces for solver runs."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from . import geometry as geo
from .estimates import empirical_c0

TRACE_COLUMNS = ("step", "leg", "alpha", "t", "residual_norm", "newton_iters", "max_s",
                 "min_psi", "max_psi", "degree_error", "denom_min", "monitors_pass")


def step_record(index: int, state, leg: str = "forward") -> dict:
    rec = {
        "step": index,
        "leg": leg,
        "alpha": state.alpha,
        "t": state.t,
        "residual_norm": state.residual_norm,
        "newton_iters": state.newton_iters,
    }
    if state.report is not None:
        rec["estimates"] = state.report.to_dict()
    return rec


def dump_json(path: Path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def summarize(states) -> dict:
    reports = [s.report for s in states if s.report is not None]
    c_lower, c_upper = empirical_c0(reports)
    return {
        "accepted_states": len(states),
        "start": list(states[0].path_position),
        "end": list(states[-1].path_position),
        "empirical_c0": {"C_lower": c_lower, "C_upper": c_upper},
        "max_s_trajectory": [r.max_s for r in reports],
        "degree_errors": [r.degree_error for r in reports],
        "max_degree_error": max(r.degree_error for r in reports),
        "hypotheses_pass": all(r.flags.all_pass for r in reports),
        "monitors_pass": all(r.monitors_pass for r in reports),
    }


def emit_report(states, out_dir, grid: geo.SurfaceGrid | None = None, emit_fields: bool = False,
                legs=None, extra: dict | None = None) -> dict:
    """Write ``ledger.json``, ``summary.json`` and ``trace.csv`` (plus field CSVs) to ``out_dir``.

    ``legs`` optionally labels each state (e.g. forward/backward); returns the summary.
    """
    states = list(states)
    if not states:
        raise ValueError("emit_report needs at least one state")
    legs = list(legs) if legs is not None else ["forward"] * len(states)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    records = [step_record(i, s, leg) for i, (s, leg) in enumerate(zip(states, legs))]
    dump_json(out / "ledger.json", records)
    summary = summarize(states)
    if extra:
        summary.update(extra)
    dump_json(out / "summary.json", summary)

    with open(out / "trace.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for rec, state in zip(records, states):
            r = state.report
            writer.writerow([
                rec["step"], rec["leg"], repr(state.alpha), repr(state.t), repr(state.residual_norm),
                state.newton_iters, repr(r.max_s), repr(r.min_psi), repr(r.max_psi),
                repr(r.degree_error), repr(r.denom_min), r.monitors_pass,
            ])

    if emit_fields:
        if grid is None:
            raise ValueError("emit_fields needs the grid")
        fields = out / "fields"
        fields.mkdir(exist_ok=True)
        for rec, state in zip(records, states):
            geo.save_field_csv(fields / f"psi_{rec['step']:04d}.csv", grid, state.psi)
    return summary
