"""Run reports and their canonical JSON encoding.

Rationals are written as ``"num/den"`` strings with a float approximation
next to them under ``<key>_approx``; keys are sorted so identical runs give
identical bytes.  Wall time is only included on request, since it is the
one field that differs between otherwise identical runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .streaming import StreamReport


def rational(x) -> str:
    if x == math.inf:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _with_approx(out: dict, key: str, value):
    if value is None:
        out[key] = None
        return
    out[key] = rational(value)
    out[key + "_approx"] = None if value == math.inf else float(value)


@dataclass
class RunReport:
    stream: StreamReport
    algorithm: str
    params: dict = field(default_factory=dict)
    fixture: str = ""
    order: list = field(default_factory=list)
    wall_time: Optional[float] = None

    @property
    def solution_certified(self) -> bool:
        return self.stream.certified


def result_dict(rep: StreamReport) -> dict:
    state = rep.final_state
    alive = state.alive()
    arrival = {x.element: x.arrival for x in alive}
    out: dict = {
        "solution": sorted(rep.solution, key=lambda e: arrival.get(e, -1)),
        "peak_stack": rep.peak_stack,
        "selected_count": state.stats.selected_count,
        "deleted_count": state.stats.deleted_count,
        "stack": [
            {
                "id": x.element,
                "arrival": x.arrival,
                "weight": rational(x.weight),
                "g": rational(x.g),
                "w": [rational(v) for v in x.w],
            }
            for x in alive
        ],
        "t": [sorted(t, key=arrival.get) for t in state.t],
    }
    _with_approx(out, "solution_weight", rep.solution_weight)
    _with_approx(out, "g_alive", rep.g_alive)
    _with_approx(out, "g_all", rep.g_all)
    if rep.memory_bound == math.inf:
        out["memory_bound"] = "unbounded"
    else:
        _with_approx(out, "memory_bound", rep.memory_bound)
    _with_approx(out, "opt_weight", rep.opt_weight)
    _with_approx(out, "ratio_vs_opt", rep.ratio_vs_opt)
    return out


def _plain(value):
    if isinstance(value, Fraction):
        return rational(value)
    if value == math.inf:
        return "inf"
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def report_dict(report: RunReport, include_timing: bool = False) -> dict:
    doc = {
        "algorithm": report.algorithm,
        "fixture": report.fixture,
        "params": _plain(report.params),
        "order": list(report.order),
        "solution_certified": report.solution_certified,
        "result": result_dict(report.stream),
        "run": _plain(report.stream.extras),
    }
    if include_timing and report.wall_time is not None:
        doc["wall_time_s"] = report.wall_time
    return doc


def canonical_json(doc) -> bytes:
    return (json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n").encode("utf-8")


def emit_report(report, include_timing: bool = False) -> bytes:
    """Canonical bytes for a RunReport (or a bare StreamReport's result block)."""
    if isinstance(report, StreamReport):
        return canonical_json(result_dict(report))
    return canonical_json(report_dict(report, include_timing))
