"""Instance files: parsing, canonical dumping and stream-order resolution.

File schema (JSON)::

    {"meta": {...},
     "elements": [{"id": "a", "weight": "1.5"}, ...],
     "matroids": [{"type": "partition", "blocks": [[ids]], "capacities": [ints]}
                  | {"type": "uniform", "k": int}
                  | {"type": "graphic", "vertices": int, "edges": {id: [u, v]}}],
     "objective": {"type": "linear"}
                  | {"type": "coverage", "sets": {id: [items]}, "item_weights": {item: "dec"}}
                  | {"type": "cut", "vertices": int, "toggles": {id: [v]},
                     "edge_weights": [[u, v, "dec"]]},
     "stream_order": [ids]}

Weights are decimal strings (``"num/den"`` is accepted too) and become
:class:`fractions.Fraction`.  Errors carry a JSON-pointer path.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .errors import InstanceError
from .matroids import GraphicMatroid, Matroid, PartitionMatroid, UniformMatroid
from .objectives import CoverageObjective, CutObjective, LinearObjective, Objective


@dataclass(frozen=True)
class Element:
    id: str
    arrival: int
    weight: Fraction


@dataclass
class Instance:
    elements: list
    matroids: list
    objective: Optional[Objective] = None
    stream_order: Optional[list] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self._by_id = {x.id: x for x in self.elements}
        if len(self._by_id) != len(self.elements):
            raise InstanceError("duplicate element ids")
        if self.objective is None:
            self.objective = LinearObjective({x.id: x.weight for x in self.elements})

    def ids(self) -> list:
        return [x.id for x in self.elements]

    def weight(self, e: str) -> Fraction:
        try:
            return self._by_id[e].weight
        except KeyError:
            raise InstanceError(f"unknown element id {e!r}") from None

    def weights(self) -> dict:
        return {x.id: x.weight for x in self.elements}

    def default_order(self) -> list:
        return list(self.stream_order) if self.stream_order is not None else self.ids()

    @property
    def k(self) -> int:
        return len(self.matroids)

    @property
    def name(self) -> str:
        return str(self.meta.get("name", ""))

    def ranks(self) -> list:
        ground = self.ids()
        return [m.rank(ground) for m in self.matroids]


def make_instance(weights, matroids, objective=None, stream_order=None, meta=None) -> Instance:
    """Build an instance from an id -> weight mapping (insertion order = file order)."""
    elements = [Element(str(e), i, Fraction(w)) for i, (e, w) in enumerate(weights.items())]
    ground = frozenset(x.id for x in elements)
    matroids = [m.with_ground(ground) for m in matroids]
    return Instance(elements, matroids, objective, stream_order, dict(meta or {}))


# -- parsing -----------------------------------------------------------------

_DECIMAL = re.compile(r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?\s*$|^\s*[+-]?\d+\s*/\s*\d+\s*$")


def parse_rational(text: Any, pointer: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InstanceError("expected a decimal string", pointer)
    if isinstance(text, str) and not _DECIMAL.match(text):
        raise InstanceError(f"not a decimal number: {text!r}", pointer)
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InstanceError(f"not a decimal number: {text!r}", pointer) from None
    if value < 0:
        raise InstanceError("negative value", pointer)
    return value


def _expect(obj, kind, pointer):
    if not isinstance(obj, kind):
        name = {dict: "object", list: "array", str: "string", int: "integer"}.get(kind, str(kind))
        raise InstanceError(f"expected {name}", pointer)
    if kind is int and isinstance(obj, bool):
        raise InstanceError("expected integer", pointer)
    return obj


def _ids(seq, pointer, known):
    _expect(seq, list, pointer)
    out = []
    for j, e in enumerate(seq):
        _expect(e, str, f"{pointer}/{j}")
        if e not in known:
            raise InstanceError(f"unknown element id {e!r}", f"{pointer}/{j}")
        out.append(e)
    return out


def _parse_matroid(doc, pointer, ground) -> Matroid:
    _expect(doc, dict, pointer)
    kind = doc.get("type")
    try:
        if kind == "partition":
            blocks = _expect(doc.get("blocks"), list, pointer + "/blocks")
            blocks = [_ids(b, f"{pointer}/blocks/{j}", ground) for j, b in enumerate(blocks)]
            caps = _expect(doc.get("capacities"), list, pointer + "/capacities")
            for j, c in enumerate(caps):
                _expect(c, int, f"{pointer}/capacities/{j}")
            return PartitionMatroid(blocks, caps, ground)
        if kind == "uniform":
            return UniformMatroid(_expect(doc.get("k"), int, pointer + "/k"), ground)
        if kind == "graphic":
            n = _expect(doc.get("vertices"), int, pointer + "/vertices")
            edges = _expect(doc.get("edges"), dict, pointer + "/edges")
            parsed = {}
            for e, uv in edges.items():
                p = f"{pointer}/edges/{e}"
                if e not in ground:
                    raise InstanceError(f"unknown element id {e!r}", p)
                _expect(uv, list, p)
                if len(uv) != 2:
                    raise InstanceError("edge needs two endpoints", p)
                parsed[e] = (_expect(uv[0], int, p + "/0"), _expect(uv[1], int, p + "/1"))
            return GraphicMatroid(n, parsed, ground)
    except InstanceError as exc:
        if exc.pointer is None:
            raise InstanceError(str(exc), pointer) from None
        raise
    raise InstanceError(f"unknown matroid type {kind!r}", pointer + "/type")


def _parse_objective(doc, pointer, ground, weights) -> Objective:
    if doc is None:
        return LinearObjective(dict(weights))
    _expect(doc, dict, pointer)
    kind = doc.get("type")
    if kind == "linear":
        return LinearObjective(dict(weights))
    if kind == "coverage":
        sets = _expect(doc.get("sets"), dict, pointer + "/sets")
        parsed = {}
        for e, items in sets.items():
            if e not in ground:
                raise InstanceError(f"unknown element id {e!r}", f"{pointer}/sets/{e}")
            _expect(items, list, f"{pointer}/sets/{e}")
            parsed[e] = frozenset(str(i) for i in items)
        iw = _expect(doc.get("item_weights", {}), dict, pointer + "/item_weights")
        item_weights = {
            str(i): parse_rational(w, f"{pointer}/item_weights/{i}") for i, w in iw.items()
        }
        return CoverageObjective(parsed, item_weights)
    if kind == "cut":
        n = _expect(doc.get("vertices"), int, pointer + "/vertices")
        toggles = _expect(doc.get("toggles"), dict, pointer + "/toggles")
        parsed = {}
        for e, vs in toggles.items():
            p = f"{pointer}/toggles/{e}"
            if e not in ground:
                raise InstanceError(f"unknown element id {e!r}", p)
            _expect(vs, list, p)
            for j, v in enumerate(vs):
                _expect(v, int, f"{p}/{j}")
                if not 0 <= v < n:
                    raise InstanceError("vertex out of range", f"{p}/{j}")
            parsed[e] = frozenset(vs)
        edges = []
        for j, row in enumerate(_expect(doc.get("edge_weights", []), list, pointer + "/edge_weights")):
            p = f"{pointer}/edge_weights/{j}"
            _expect(row, list, p)
            if len(row) != 3:
                raise InstanceError("edge weight rows are [u, v, weight]", p)
            u, v = _expect(row[0], int, p + "/0"), _expect(row[1], int, p + "/1")
            if not (0 <= u < n and 0 <= v < n):
                raise InstanceError("vertex out of range", p)
            edges.append((u, v, parse_rational(row[2], p + "/2")))
        return CutObjective(n, parsed, tuple(edges))
    raise InstanceError(f"unknown objective type {kind!r}", pointer + "/type")


def parse_instance(data) -> Instance:
    """Parse and validate an instance from JSON bytes/str or an already-decoded dict."""
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InstanceError(f"not UTF-8: {exc}", "") from None
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"invalid JSON: {exc}", "") from None
    _expect(data, dict, "")
    meta = data.get("meta", {})
    _expect(meta, dict, "/meta")

    elements = []
    seen = set()
    for j, item in enumerate(_expect(data.get("elements", []), list, "/elements")):
        p = f"/elements/{j}"
        _expect(item, dict, p)
        eid = _expect(item.get("id"), str, p + "/id")
        if eid in seen:
            raise InstanceError(f"duplicate element id {eid!r}", p + "/id")
        seen.add(eid)
        elements.append(Element(eid, j, parse_rational(item.get("weight"), p + "/weight")))
    ground = frozenset(seen)
    weights = {x.id: x.weight for x in elements}

    matroids = [
        _parse_matroid(m, f"/matroids/{j}", ground)
        for j, m in enumerate(_expect(data.get("matroids", []), list, "/matroids"))
    ]
    if not matroids:
        raise InstanceError("at least one matroid is required", "/matroids")
    objective = _parse_objective(data.get("objective"), "/objective", ground, weights)

    order = data.get("stream_order")
    if order is not None:
        order = _ids(order, "/stream_order", ground)
        if len(order) != len(elements) or set(order) != ground:
            raise InstanceError("stream_order is not a permutation of the element ids", "/stream_order")
    return Instance(elements, matroids, objective, order, dict(meta))


def load_instance(path) -> Instance:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}", "") from None
    inst = parse_instance(raw)
    inst.meta.setdefault("name", str(path).rsplit("/", 1)[-1].removesuffix(".json"))
    return inst


# -- dumping -----------------------------------------------------------------


def format_rational(x: Fraction) -> str:
    """Exact decimal string if x has a terminating expansion, else ``num/den``."""
    x = Fraction(x)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = x * 10**digits
    sign = "-" if scaled < 0 else ""
    n = abs(scaled.numerator)
    if digits == 0:
        return f"{sign}{n}"
    whole, frac = divmod(n, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def instance_to_dict(inst: Instance) -> dict:
    doc: dict = {
        "meta": inst.meta,
        "elements": [{"id": x.id, "weight": format_rational(x.weight)} for x in inst.elements],
        "matroids": [],
    }
    for m in inst.matroids:
        if m.kind == "partition":
            doc["matroids"].append({
                "type": "partition",
                "blocks": [sorted(b) for b in m.blocks],
                "capacities": list(m.capacities),
            })
        elif m.kind == "uniform":
            doc["matroids"].append({"type": "uniform", "k": m.k})
        elif m.kind == "graphic":
            doc["matroids"].append({
                "type": "graphic",
                "vertices": m.vertex_count,
                "edges": {e: list(uv) for e, uv in sorted(m.edges.items())},
            })
    obj = inst.objective
    if obj.kind == "coverage":
        doc["objective"] = {
            "type": "coverage",
            "sets": {e: sorted(items) for e, items in sorted(obj.sets.items())},
            "item_weights": {i: format_rational(w) for i, w in sorted(obj.item_weights.items())},
        }
    elif obj.kind == "cut":
        doc["objective"] = {
            "type": "cut",
            "vertices": obj.vertex_count,
            "toggles": {e: sorted(vs) for e, vs in sorted(obj.toggles.items())},
            "edge_weights": [[u, v, format_rational(w)] for u, v, w in obj.edge_weights],
        }
    else:
        doc["objective"] = {"type": "linear"}
    if inst.stream_order is not None:
        doc["stream_order"] = list(inst.stream_order)
    return doc


def dump_instance(inst: Instance) -> bytes:
    return (json.dumps(instance_to_dict(inst), sort_keys=True, indent=2) + "\n").encode("utf-8")


# -- stream orders -----------------------------------------------------------


def resolve_order(inst: Instance, mode: str = "file") -> list:
    """``file`` | ``reverse`` | ``shuffle:<seed>`` (seeded Fisher-Yates)."""
    base = inst.default_order()
    if mode == "file":
        return base
    if mode == "reverse":
        return base[::-1]
    m = re.fullmatch(r"shuffle:(-?\d+)", mode or "")
    if m:
        out = list(base)
        random.Random(int(m.group(1))).shuffle(out)
        return out
    raise ValueError(f"malformed order mode {mode!r}; use file, reverse or shuffle:<seed>")
