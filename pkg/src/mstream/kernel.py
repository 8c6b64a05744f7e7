"""Ordered matroids, domination and two-matroid kernels.

A kernel of two ordered matroids is a common independent set K whose
dominated sets cover the ground set.  :func:`find_kernel` computes one by
matroid deferred acceptance (matroid 1 proposes, matroid 2 filters) and
checks the defining properties before returning.  :func:`extract_solution`
applies it to a selection stack ordered by the per-matroid weights, which
yields a common independent set of weight at least the stack's total gain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .errors import BudgetError, InvariantError, ParamError
from .matroids import Matroid, in_span


@dataclass(frozen=True)
class OrderedMatroid:
    """A matroid with the total order: larger weight first, then later arrival."""

    matroid: Matroid
    key: Mapping[str, tuple]  # id -> (weight, arrival)

    def rank_key(self, e):
        w, arrival = self.key[e]
        return (-w, -arrival)

    def precedes(self, a, b) -> bool:
        return self.rank_key(a) < self.rank_key(b)

    def sort(self, ids):
        return sorted(ids, key=self.rank_key)

    def greedy(self, ids) -> list:
        chosen: list = []
        for e in self.sort(ids):
            if self.matroid.is_independent(chosen + [e]):
                chosen.append(e)
        return chosen


@dataclass
class KernelResult:
    kernel: frozenset
    rounds: int
    rejected_trace: list = field(default_factory=list)


@dataclass
class KernelReport:
    ok: bool
    dependent_in: list = field(default_factory=list)
    undominated: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def dominates(om: OrderedMatroid, t: Iterable[str], e: str) -> bool:
    t = frozenset(t)
    if e in t:
        return True
    better = [c for c in t if om.precedes(c, e)]
    return in_span(om.matroid, better, e)


def dominated(om: OrderedMatroid, t: Iterable[str], ground: Iterable[str]) -> set:
    t = frozenset(t)
    return {e for e in ground if dominates(om, t, e)}


def verify_kernel(om1, om2, ground, k) -> KernelReport:
    """Report whether k is an om1/om2 kernel of ground, listing every violation."""
    return check_kernel((om1, om2), ground, k)


def check_kernel(oms, ground, k) -> KernelReport:
    """Independence in every ordered matroid plus domination of all of ground."""
    k = frozenset(k)
    ground = list(ground)
    dep = [i for i, om in enumerate(oms) if not om.matroid.is_independent(k)]
    covered: set = set()
    for om in oms:
        covered |= dominated(om, k, ground)
    undominated = [e for e in ground if e not in covered]
    return KernelReport(not dep and not undominated and k <= set(ground), dep, undominated)


def find_kernel(om1: OrderedMatroid, om2: OrderedMatroid, ground: Iterable[str]) -> KernelResult:
    ground = list(ground)
    rejected: set = set()
    trace = []
    rounds = 0
    while True:
        rounds += 1
        proposed = om1.greedy([e for e in ground if e not in rejected])
        kept = om2.greedy(proposed)
        if len(kept) == len(proposed):
            break
        kept_set = set(kept)
        for e in om1.sort(proposed):
            if e not in kept_set:
                rejected.add(e)
                trace.append((rounds, e))
        if rounds > len(ground) + 1:
            raise InvariantError("deferred acceptance failed to terminate")
    kernel = frozenset(proposed)
    report = verify_kernel(om1, om2, ground, kernel)
    if not report:
        raise InvariantError(
            f"kernel postcondition failed: dependent in {report.dependent_in}, "
            f"undominated {report.undominated}"
        )
    return KernelResult(kernel, rounds, trace)


def brute_force_kernel(om1, om2, ground, max_elements: int = 20) -> list:
    """Every kernel of the pair, by enumerating all subsets of ground."""
    ground = list(ground)
    if len(ground) > max_elements:
        raise BudgetError(f"{len(ground)} elements exceed the enumeration limit {max_elements}")
    found = []
    for size in range(len(ground) + 1):
        for combo in combinations(ground, size):
            if not (om1.matroid.is_independent(combo) and om2.matroid.is_independent(combo)):
                continue
            if verify_kernel(om1, om2, ground, combo):
                found.append(frozenset(combo))
    return found


def ordered_matroids(state) -> list:
    """One ordered matroid per matroid of the state, keyed by its alive w_i values."""
    alive = state.alive()
    return [
        OrderedMatroid(m, {x.element: (x.w[i], x.arrival) for x in alive})
        for i, m in enumerate(state.matroids)
    ]


def extract_solution(state) -> frozenset:
    """Kernel of the alive stack; asserts its weight is at least the alive gain."""
    if state.k != 2:
        raise ParamError("kernel extraction is defined for exactly two matroids")
    om1, om2 = ordered_matroids(state)
    alive = state.alive()
    result = find_kernel(om1, om2, [x.element for x in alive])
    weight = sum((state.index[e].weight for e in result.kernel), Fraction(0))
    gain = sum((x.g for x in alive), Fraction(0))
    if weight < gain:
        raise InvariantError(f"kernel weight {weight} below stack gain {gain}")
    return result.kernel
