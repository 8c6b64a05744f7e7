"""Local-ratio selection stack for matroid intersection.

:class:`SelectionState` is the engine shared by every variant: it holds the
stack of selected elements with their gains and per-matroid weights, the
maintained max-weight independent sets ``t[i]``, and the run counters.
The exact two-matroid pass, the bipartite matching baseline and the
reverse-greedy baseline live here; deletions are added by :mod:`streaming`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import InstanceError, InvariantError, ParamError
from .matroids import Matroid, greedy_max_independent, span_threshold, swap_witness


@dataclass
class StackEntry:
    element: str
    arrival: int
    weight: Fraction  # w(e); the marginal value at arrival for submodular runs
    g: Fraction
    w: tuple
    alive: bool = True


@dataclass
class RunStats:
    peak_stack: int = 0
    total_gain_alive: Fraction = Fraction(0)
    total_gain_all: Fraction = Fraction(0)
    deleted_count: int = 0
    selected_count: int = 0


@dataclass
class Decision:
    selected: bool
    thresholds: tuple
    g: Optional[Fraction] = None
    w: Optional[tuple] = None

    def __bool__(self):
        return self.selected


class SelectionState:
    """Stack S plus the maintained sets T_1..T_k.

    With ``check=True`` every threshold is recomputed from its span definition
    and every T_i from a full greedy pass; mismatches raise InvariantError.
    """

    def __init__(self, matroids: Sequence[Matroid], check: bool = False):
        if not matroids:
            raise ParamError("at least one matroid is required")
        self.matroids = list(matroids)
        self.k = len(self.matroids)
        self.entries: list[StackEntry] = []
        self.index: dict[str, StackEntry] = {}
        self.t: list[list[str]] = [[] for _ in self.matroids]
        self.stats = RunStats()
        self.check = check
        self._dead = 0
        self._pending: Optional[tuple] = None

    # -- views ---------------------------------------------------------------

    def alive(self) -> list[StackEntry]:
        return [x for x in self.entries if x.alive]

    def alive_ids(self) -> list[str]:
        return [x.element for x in self.entries if x.alive]

    def size(self) -> int:
        return len(self.entries) - self._dead

    def weights(self, i: int) -> dict:
        return {x.element: x.w[i] for x in self.entries if x.alive}

    def arrivals(self) -> dict:
        return {x.element: x.arrival for x in self.entries if x.alive}

    def retained(self) -> set:
        """Union of the T_i; these entries are never deleted."""
        return set().union(*self.t)

    # -- thresholds ----------------------------------------------------------

    def _threshold(self, i: int, e: str, arrival: int):
        m = self.matroids[i]
        t = self.t[i]
        if not m.is_independent(t + [e]):
            wt = {f: self.index[f].w[i] for f in t}
            arr = {f: self.index[f].arrival for f in t}
            arr[e] = arrival
            f = swap_witness(m, t, e, wt, arr)
            if f is None:
                return math.inf, None
            return wt[f], f
        return Fraction(0), None

    def thresholds(self, e: str, arrival: int) -> tuple:
        """w*_i(e) for every matroid, computed against the alive stack."""
        if e in self.index:
            raise ParamError(f"element {e!r} was already processed")
        values, witnesses = [], []
        for i in range(self.k):
            value, witness = self._threshold(i, e, arrival)
            if self.check:
                expected = span_threshold(self.matroids[i], self.alive_ids(), e, self.weights(i))
                if expected != value:
                    raise InvariantError(
                        f"threshold mismatch for {e!r} in matroid {i}: {value} != {expected}"
                    )
            values.append(value)
            witnesses.append(witness)
        self._pending = (e, tuple(witnesses))
        return tuple(values)

    # -- mutation ------------------------------------------------------------

    def push(self, e: str, arrival: int, weight: Fraction, thresholds: Sequence) -> StackEntry:
        """Select e with gain w(e) - sum w*_i and update every T_i by one swap."""
        if self._pending is None or self._pending[0] != e:
            self.thresholds(e, arrival)
        witnesses = self._pending[1]
        self._pending = None
        g = weight - sum(thresholds)
        if g <= 0:
            raise InvariantError(f"refusing to push {e!r} with non-positive gain {g}")
        entry = StackEntry(e, arrival, weight, g, tuple(th + g for th in thresholds))
        self.entries.append(entry)
        self.index[e] = entry
        for i, f in enumerate(witnesses):
            if f is not None:
                self.t[i].remove(f)
            self.t[i].append(e)
        stats = self.stats
        stats.selected_count += 1
        stats.total_gain_alive += g
        stats.total_gain_all += g
        stats.peak_stack = max(stats.peak_stack, self.size())
        if self.check:
            self.check_t()
        return entry

    def delete(self, entry: StackEntry) -> None:
        if not entry.alive:
            return
        if entry.element in self.retained():
            raise InvariantError(f"{entry.element!r} is in some T_i and cannot be deleted")
        entry.alive = False
        del self.index[entry.element]
        self._dead += 1
        self.stats.deleted_count += 1
        self.stats.total_gain_alive -= entry.g
        if self._dead * 2 > len(self.entries):
            self.entries = [x for x in self.entries if x.alive]
            self._dead = 0

    def check_t(self) -> None:
        arr = self.arrivals()
        for i, m in enumerate(self.matroids):
            expected = greedy_max_independent(m, arr, self.weights(i), arr)
            if set(self.t[i]) != expected:
                raise InvariantError(
                    f"T_{i + 1} drifted: {sorted(self.t[i])} != {sorted(expected)}"
                )


def threshold(state: SelectionState, i: int, e: str, arrival: Optional[int] = None):
    """w*_i(e) against the current alive stack (i is 0-based)."""
    if arrival is None:
        arrival = max((x.arrival for x in state.entries), default=-1) + 1
    value, _ = state._threshold(i, e, arrival)
    if state.check:
        expected = span_threshold(state.matroids[i], state.alive_ids(), e, state.weights(i))
        if expected != value:
            raise InvariantError(f"threshold mismatch for {e!r}: {value} != {expected}")
    return value


def process_element(
    state: SelectionState, e: str, w_e: Fraction, alpha: Fraction = Fraction(1), arrival=None
) -> Decision:
    """Select e iff w(e) > alpha * sum_i w*_i(e).  Rejected elements leave no trace."""
    if w_e < 0:
        raise ParamError(f"negative weight for {e!r}")
    if arrival is None:
        arrival = max((x.arrival for x in state.entries), default=-1) + 1
    ths = state.thresholds(e, arrival)
    total = sum(ths)
    if w_e > alpha * total:
        entry = state.push(e, arrival, w_e, ths)
        return Decision(True, ths, entry.g, entry.w)
    state._pending = None
    return Decision(False, ths)


def run_local_ratio(instance, order: Optional[Sequence[str]] = None, alpha=Fraction(1), check=False):
    """Unbounded-memory local-ratio pass over two matroids, no deletions."""
    if len(instance.matroids) != 2:
        raise ParamError("run_local_ratio needs exactly two matroids; use run_streaming_k")
    return _run_plain(instance, order, alpha, check)


def _run_plain(instance, order, alpha, check):
    order = instance.default_order() if order is None else list(order)
    state = SelectionState(instance.matroids, check=check)
    for pos, e in enumerate(order):
        process_element(state, e, instance.weight(e), Fraction(alpha), arrival=pos)
    return state


def reverse_greedy_baseline(state: SelectionState) -> frozenset:
    """Scan alive entries newest first, keeping what stays independent in all matroids."""
    kept: list[str] = []
    for entry in reversed(state.alive()):
        cand = kept + [entry.element]
        if all(m.is_independent(cand) for m in state.matroids):
            kept = cand
    return frozenset(kept)


# -- weighted matching baseline --------------------------------------------


@dataclass
class MatchingResult:
    selected: list
    gains: dict
    potentials: dict = field(default_factory=dict)


def _two_colouring(edges):
    adj: dict = {}
    for u, v in edges.values():
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    colour: dict = {}
    for start in adj:
        if start in colour:
            continue
        colour[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v in adj[u]:
                if v not in colour:
                    colour[v] = 1 - colour[u]
                    queue.append(v)
                elif colour[v] == colour[u]:
                    return None
    return colour


def run_matching_baseline(edges, weights, order: Optional[Iterable[str]] = None) -> MatchingResult:
    """Vertex-potential local ratio for weighted matching on a bipartite graph.

    ``edges`` maps edge id -> (u, v); ``weights`` maps edge id -> weight.
    """
    if _two_colouring(edges) is None:
        raise InstanceError("matching baseline needs a bipartite graph")
    order = list(edges) if order is None else list(order)
    pot: dict = {}
    for u, v in edges.values():
        pot[u] = Fraction(0)
        pot[v] = Fraction(0)
    selected, gains = [], {}
    for e in order:
        u, v = edges[e]
        w = Fraction(weights[e])
        if pot[u] + pot[v] < w:
            g = w - pot[u] - pot[v]
            pot[u] += g
            pot[v] += g
            selected.append(e)
            gains[e] = g
    return MatchingResult(selected, gains, pot)


def bipartite_edges(instance) -> dict:
    """Recover edge endpoints from two unit-capacity partition matroids.

    Element e becomes the edge (("L", block of e in M_1), ("R", block in M_2));
    elements outside every block get a private vertex.
    """
    if len(instance.matroids) != 2:
        raise InstanceError("bipartite encoding needs exactly two matroids")
    ends = []
    for side, m in zip("LR", instance.matroids):
        if m.kind != "partition" or any(c != 1 for c in m.capacities):
            raise InstanceError("bipartite encoding needs unit-capacity partition matroids")
        ends.append((side, m))
    edges = {}
    for e in instance.ids():
        pair = []
        for side, m in ends:
            b = m._block_of.get(e)
            pair.append((side, b if b is not None else f"free:{e}"))
        edges[e] = tuple(pair)
    return edges
