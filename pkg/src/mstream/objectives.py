"""Set-function objectives: linear, weighted coverage and graph cut.

All values are exact rationals.  ``marginal(e, s)`` is f(s + e) - f(s).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping


class Objective:
    kind = "abstract"
    monotone = True

    def value(self, s: Iterable[str]) -> Fraction:
        raise NotImplementedError

    def marginal(self, e: str, s: Iterable[str]) -> Fraction:
        s = frozenset(s)
        if e in s:
            raise ValueError(f"element {e!r} already in the set")
        return self.value(s | {e}) - self.value(s)


@dataclass
class LinearObjective(Objective):
    weights: Mapping[str, Fraction] = field(default_factory=dict)

    kind = "linear"
    monotone = True

    def value(self, s):
        return sum((self.weights[e] for e in s), Fraction(0))

    def marginal(self, e, s):
        if e in s:
            raise ValueError(f"element {e!r} already in the set")
        return self.weights[e]


@dataclass
class CoverageObjective(Objective):
    """f(S) = total weight of universe items covered by the sets of S."""

    sets: Mapping[str, frozenset] = field(default_factory=dict)
    item_weights: Mapping[str, Fraction] = field(default_factory=dict)

    kind = "coverage"
    monotone = True

    def __post_init__(self):
        self.sets = {e: frozenset(items) for e, items in self.sets.items()}
        self.item_weights = {i: Fraction(w) for i, w in self.item_weights.items()}

    def _weight(self, items):
        return sum((self.item_weights.get(i, Fraction(0)) for i in items), Fraction(0))

    def value(self, s):
        covered = set()
        for e in s:
            covered |= self.sets.get(e, frozenset())
        return self._weight(covered)

    def marginal(self, e, s):
        if e in s:
            raise ValueError(f"element {e!r} already in the set")
        covered = set()
        for x in s:
            covered |= self.sets.get(x, frozenset())
        return self._weight(self.sets.get(e, frozenset()) - covered)


@dataclass
class CutObjective(Objective):
    """Weighted cut of a vertex set built by toggling vertices.

    The selected vertex set of S is the symmetric difference of the toggle
    sets of its elements; f(S) sums the weights of edges with exactly one
    endpoint selected.  Submodular when toggle sets are pairwise disjoint.
    """

    vertex_count: int = 0
    toggles: Mapping[str, frozenset] = field(default_factory=dict)
    edge_weights: tuple = ()

    kind = "cut"
    monotone = False

    def __post_init__(self):
        self.toggles = {e: frozenset(int(v) for v in vs) for e, vs in self.toggles.items()}
        self.edge_weights = tuple((int(u), int(v), Fraction(w)) for u, v, w in self.edge_weights)

    def vertices(self, s) -> set:
        chosen: set = set()
        for e in s:
            chosen ^= self.toggles.get(e, frozenset())
        return chosen

    def value(self, s):
        chosen = self.vertices(s)
        return sum(
            (w for u, v, w in self.edge_weights if (u in chosen) != (v in chosen)), Fraction(0)
        )

