"""Matroid descriptors, independence/rank/span oracles and the weighted greedy.

Three compact families are supported: partition, uniform and graphic
(multigraphs allowed, so parallel edges and self-loops are fine).  Every
descriptor answers ``is_independent`` and ``rank`` in closed form; span,
greedy and swap thresholds are built on top of those two queries.

Weights are :class:`fractions.Fraction` throughout.  The canonical element
order used everywhere is *weight descending, later arrival first*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InstanceError


class DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.components = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        """Merge the classes of x and y; False if they were already joined."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        self.components -= 1
        return True


class Matroid:
    """Base class.  Subclasses implement ``_independent`` and ``_rank``."""

    ground: Optional[frozenset]
    kind = "abstract"

    def _check(self, s: Iterable[str]) -> frozenset:
        s = frozenset(s)
        if self.ground is not None:
            unknown = s - self.ground
            if unknown:
                raise InstanceError(f"unknown element id(s) {sorted(unknown)}")
        return s

    def is_independent(self, s: Iterable[str]) -> bool:
        return self._independent(self._check(s))

    def rank(self, s: Iterable[str]) -> int:
        return self._rank(self._check(s))

    def with_ground(self, ground: Iterable[str]) -> "Matroid":
        raise NotImplementedError


@dataclass(frozen=True)
class PartitionMatroid(Matroid):
    """Blocks with capacities; ids outside every block are unconstrained."""

    blocks: tuple = ()
    capacities: tuple = ()
    ground: Optional[frozenset] = None
    _block_of: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    kind = "partition"

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks)
        caps = tuple(int(c) for c in self.capacities)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "capacities", caps)
        if len(blocks) != len(caps):
            raise InstanceError("partition: blocks and capacities differ in length")
        if any(c < 0 for c in caps):
            raise InstanceError("partition: negative capacity")
        for i, block in enumerate(blocks):
            for e in block:
                if e in self._block_of:
                    raise InstanceError(f"partition: element {e!r} is in two blocks")
                self._block_of[e] = i
        if self.ground is not None:
            object.__setattr__(self, "ground", frozenset(self.ground))
            stray = set(self._block_of) - self.ground
            if stray:
                raise InstanceError(f"partition: unknown element id(s) {sorted(stray)}")

    def _counts(self, s: frozenset) -> tuple[list[int], int]:
        counts = [0] * len(self.blocks)
        free = 0
        for e in s:
            i = self._block_of.get(e)
            if i is None:
                free += 1
            else:
                counts[i] += 1
        return counts, free

    def _independent(self, s: frozenset) -> bool:
        counts, _ = self._counts(s)
        return all(n <= c for n, c in zip(counts, self.capacities))

    def _rank(self, s: frozenset) -> int:
        counts, free = self._counts(s)
        return free + sum(min(n, c) for n, c in zip(counts, self.capacities))

    def with_ground(self, ground):
        return PartitionMatroid(self.blocks, self.capacities, frozenset(ground))


@dataclass(frozen=True)
class UniformMatroid(Matroid):
    k: int = 0
    ground: Optional[frozenset] = None

    kind = "uniform"

    def __post_init__(self):
        if self.k < 0:
            raise InstanceError("uniform: negative k")
        if self.ground is not None:
            object.__setattr__(self, "ground", frozenset(self.ground))

    def _independent(self, s):
        return len(s) <= self.k

    def _rank(self, s):
        return min(len(s), self.k)

    def with_ground(self, ground):
        return UniformMatroid(self.k, frozenset(ground))


@dataclass(frozen=True)
class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph given as element id -> (u, v)."""

    vertex_count: int = 1
    edges: Mapping[str, tuple] = field(default_factory=dict)
    ground: Optional[frozenset] = None

    kind = "graphic"

    def __post_init__(self):
        if self.vertex_count < 1:
            raise InstanceError("graphic: vertex_count must be positive")
        edges = {}
        for e, (u, v) in dict(self.edges).items():
            u, v = int(u), int(v)
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise InstanceError(f"graphic: edge {e!r} endpoint out of range")
            edges[e] = (u, v)
        object.__setattr__(self, "edges", edges)
        if self.ground is None:
            object.__setattr__(self, "ground", frozenset(edges))
        else:
            ground = frozenset(self.ground)
            object.__setattr__(self, "ground", ground)
            missing = ground - set(edges)
            if missing:
                raise InstanceError(f"graphic: element(s) {sorted(missing)} have no edge")

    def __hash__(self):
        return hash((self.vertex_count, tuple(sorted(self.edges.items()))))

    def _forest_size(self, s) -> int:
        dsu = DisjointSet(self.vertex_count)
        return sum(1 for e in s if dsu.union(*self.edges[e]))

    def _independent(self, s):
        if len(s) >= self.vertex_count:
            return False
        return self._forest_size(s) == len(s)

    def _rank(self, s):
        return self._forest_size(s)

    def with_ground(self, ground):
        return GraphicMatroid(self.vertex_count, self.edges, frozenset(ground))


# -- module-level operations ------------------------------------------------


def is_independent(m: Matroid, s: Iterable[str]) -> bool:
    return m.is_independent(s)


def rank(m: Matroid, s: Iterable[str]) -> int:
    return m.rank(s)


def in_span(m: Matroid, s: Iterable[str], e: str) -> bool:
    """True iff adding e to s does not raise the rank."""
    s = frozenset(s)
    if e in s:
        m._check((e,))
        return True
    return m.rank(s | {e}) == m.rank(s)


def order_key(wt: Mapping[str, Fraction], arrival: Mapping[str, int]):
    """Sort key realising the canonical order: heavier first, then later arrival."""
    return lambda e: (-wt[e], -arrival[e])


def _arrivals(ground: Sequence[str], arrival: Optional[Mapping[str, int]]):
    if arrival is not None:
        return arrival
    return {e: i for i, e in enumerate(ground)}


def greedy_max_independent(
    m: Matroid,
    ground: Iterable[str],
    wt: Mapping[str, Fraction],
    arrival: Optional[Mapping[str, int]] = None,
) -> frozenset:
    """Maximum-weight independent subset of ``ground`` via the greedy scan.

    Elements are visited in the canonical order.  When ``arrival`` is omitted
    the iteration order of ``ground`` is taken as the arrival order.
    """
    ground = list(ground)
    arrival = _arrivals(ground, arrival)
    chosen: list[str] = []
    for e in sorted(ground, key=order_key(wt, arrival)):
        if m.is_independent(chosen + [e]):
            chosen.append(e)
    return frozenset(chosen)


def swap_witness(
    m: Matroid,
    t: Iterable[str],
    e: str,
    wt: Mapping[str, Fraction],
    arrival: Mapping[str, int],
) -> Optional[str]:
    """Cheapest f in t whose removal makes room for e, or None if t+e is independent.

    Among equally cheap candidates the earliest arrival is returned, i.e. the
    element that comes last in the canonical order.
    """
    t = list(t)
    if e in t:
        raise ValueError(f"element {e!r} is already in the independent set")
    if m.is_independent(t + [e]):
        return None
    best = None
    for f in t:
        if m.is_independent([x for x in t if x != f] + [e]):
            if best is None or (wt[f], arrival[f]) < (wt[best], arrival[best]):
                best = f
    return best


def swap_threshold(
    m: Matroid,
    t: Iterable[str],
    e: str,
    wt: Mapping[str, Fraction],
    arrival: Optional[Mapping[str, int]] = None,
) -> Fraction:
    """Weight of the cheapest exchange partner of e in the independent set t.

    Returns 0 when t+e is already independent and ``math.inf`` when e is a
    loop (no exchange can ever make room for it).
    """
    t = list(t)
    if arrival is None:
        arrival = {x: i for i, x in enumerate(t)}
    if e in t:
        raise ValueError(f"element {e!r} is already in the independent set")
    if m.is_independent(t + [e]):
        return Fraction(0)
    f = swap_witness(m, t, e, wt, arrival)
    if f is None:
        return math.inf
    return Fraction(wt[f])


def span_threshold(
    m: Matroid, pool: Iterable[str], e: str, wt: Mapping[str, Fraction]
) -> Fraction:
    """Largest theta with e spanned by {f in pool : wt(f) >= theta}, else 0.

    Direct evaluation of the threshold definition; slow, used as a cross-check
    for :func:`swap_threshold`.  Loops are spanned by the empty set, so every
    theta qualifies and the result is ``math.inf``.
    """
    pool = [f for f in pool if f != e]
    if in_span(m, (), e):
        return math.inf
    for theta in sorted({wt[f] for f in pool}, reverse=True):
        if in_span(m, [f for f in pool if wt[f] >= theta], e):
            return Fraction(theta)
    return Fraction(0)
