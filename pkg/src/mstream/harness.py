"""Glue between instance files, the algorithms and reports; also the bench runner."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import fixtures
from .errors import InstanceError, ParamError
from .instance import load_instance, parse_rational, resolve_order
from .oracles import approximation_ratio, brute_force_intersection_opt
from .report import RunReport, rational
from .streaming import INF, StreamParams, run_streaming, run_streaming_k
from .submodular import SubmodularParams, run_submodular

ALGORITHMS = ("exact", "streaming", "streaming-k", "submodular")


def open_instance(ref, base=None):
    """A path, or ``fixture:<name>`` for a bundled instance."""
    ref = str(ref)
    if ref.startswith("fixture:"):
        return fixtures.load(ref.split(":", 1)[1])
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = Path(base) / path
    return load_instance(path)


def _rat(value, name):
    if value is None:
        return None
    if isinstance(value, Fraction):
        return value
    try:
        return parse_rational(str(value), name)
    except InstanceError as exc:
        raise ParamError(f"--{name}: {exc}") from None


def _y(value):
    if value is None:
        return None
    if str(value).lower() in ("inf", "infinity", "oo"):
        return INF
    return _rat(value, "y")


def stream_params(instance, epsilon=None, alpha=None, y=None) -> StreamParams:
    epsilon, alpha, y = _rat(epsilon, "epsilon"), _rat(alpha, "alpha"), _y(y)
    if epsilon is not None and alpha is None and y is None:
        return StreamParams.default(instance, epsilon)
    if alpha is None:
        raise ParamError("give --epsilon, or --alpha (with optional --y)")
    return StreamParams(alpha, INF if y is None else y, epsilon)


def submodular_params(instance, alpha=None, q=None, delta=None, y=None, seed=0) -> SubmodularParams:
    alpha, q, delta, y = _rat(alpha, "alpha"), _rat(q, "q"), _rat(delta, "delta"), _y(y)
    if alpha is None:
        raise ParamError("submodular runs need --alpha")
    q = Fraction(1) if q is None else q
    if delta is not None and y is None:
        return SubmodularParams.default(instance, alpha, delta, q, int(seed))
    return SubmodularParams(alpha, q, INF if y is None else y, delta, int(seed))


def run_cell(instance, algo, order_mode="file", epsilon=None, alpha=None, y=None,
             q=None, delta=None, seed=0, opt=False) -> RunReport:
    if algo not in ALGORITHMS:
        raise ParamError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")
    try:
        order = resolve_order(instance, order_mode)
    except ValueError as exc:
        raise ParamError(str(exc)) from None
    start = time.perf_counter()
    if algo == "exact":
        params = StreamParams(Fraction(1))
        rep = run_streaming(instance, order, params)
        echo = {"alpha": params.alpha, "y": INF}
    elif algo in ("streaming", "streaming-k"):
        params = stream_params(instance, epsilon, alpha, y)
        runner = run_streaming if algo == "streaming" else run_streaming_k
        rep = runner(instance, order, params)
        echo = {"alpha": params.alpha, "y": params.y, "epsilon": params.epsilon}
    else:
        params = submodular_params(instance, alpha, q, delta, y, seed)
        rep = run_submodular(instance, order, params)
        echo = {"alpha": params.alpha, "y": params.y, "q": params.q,
                "delta": params.delta, "seed": params.seed}
    elapsed = time.perf_counter() - start
    if opt:
        _, best = brute_force_intersection_opt(instance)
        rep.opt_weight = best
        rep.ratio_vs_opt = approximation_ratio(best, rep.solution_weight)
    return RunReport(rep, algo.replace("-", "_"), echo, instance.name, order, elapsed)


# -- bench ---------------------------------------------------------------------

CSV_FIELDS = (
    "name", "instance", "algo", "order", "solution_weight", "g_alive", "g_all",
    "peak_stack", "memory_bound", "opt_weight", "ratio_vs_opt", "certified",
)


def _row(name, cell, report: RunReport) -> dict:
    rep = report.stream

    def fmt(x):
        return "" if x is None else ("unbounded" if x == INF else rational(x))

    return {
        "name": name,
        "instance": cell["instance"],
        "algo": cell["algo"],
        "order": cell.get("order", "file"),
        "solution_weight": fmt(rep.solution_weight),
        "g_alive": fmt(rep.g_alive),
        "g_all": fmt(rep.g_all),
        "peak_stack": rep.peak_stack,
        "memory_bound": fmt(rep.memory_bound),
        "opt_weight": fmt(rep.opt_weight),
        "ratio_vs_opt": fmt(rep.ratio_vs_opt),
        "certified": str(rep.certified).lower(),
    }


def run_bench(manifest_path, jobs: int = 1) -> str:
    """Run every cell of a manifest and return the CSV table (rows sorted by name).

    Manifest: ``{"cells": [{"name", "instance", "algo", "order", "epsilon",
    "alpha", "y", "q", "delta", "seed", "opt"}, ...]}``; instance paths are
    relative to the manifest.
    """
    manifest_path = Path(manifest_path)
    try:
        doc = json.loads(manifest_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceError(f"cannot read manifest: {exc}", "") from None
    cells = doc.get("cells") if isinstance(doc, dict) else None
    if not isinstance(cells, list):
        raise InstanceError("manifest needs a 'cells' array", "/cells")
    base = manifest_path.parent

    def one(item):
        idx, cell = item
        if not isinstance(cell, dict) or "instance" not in cell or "algo" not in cell:
            raise InstanceError("cell needs 'instance' and 'algo'", f"/cells/{idx}")
        name = cell.get("name", f"cell{idx:04d}")
        inst = open_instance(cell["instance"], base)
        report = run_cell(
            inst, cell["algo"], cell.get("order", "file"), cell.get("epsilon"),
            cell.get("alpha"), cell.get("y"), cell.get("q"), cell.get("delta"),
            cell.get("seed", 0), bool(cell.get("opt", False)),
        )
        return _row(name, cell, report)

    with ThreadPoolExecutor(max_workers=max(1, int(jobs))) as pool:
        rows = list(pool.map(one, enumerate(cells)))
    rows.sort(key=lambda r: r["name"])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
