"""Exhaustive ground truth for small instances.

Everything here is exponential and guarded by :class:`OracleBudget`; the
element limit can be raised with the ``MSTREAM_ORACLE_MAX`` environment
variable.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .errors import BudgetError
from .kernel import check_kernel, ordered_matroids
from .streaming import StreamParams, run_streaming_k


@dataclass(frozen=True)
class OracleBudget:
    max_elements: int = 20
    max_subsets: int = 1 << 22

    @classmethod
    def from_env(cls) -> "OracleBudget":
        raw = os.environ.get("MSTREAM_ORACLE_MAX")
        if raw:
            return cls(max_elements=int(raw))
        return cls()

    def require(self, n: int, what: str = "instance"):
        if n > self.max_elements:
            raise BudgetError(f"{what} has {n} elements; oracle limit is {self.max_elements}")
        if n < 63 and (1 << n) > self.max_subsets:
            raise BudgetError(f"{what} needs 2^{n} subsets; limit is {self.max_subsets}")


def brute_force_intersection_opt(instance, budget: Optional[OracleBudget] = None):
    """Best set independent in every matroid, by pruned depth-first enumeration.

    Linear objectives are bounded by the remaining positive weight; general
    set functions by f(A) + sum of positive marginals f(e|A), which is a valid
    upper bound for any submodular f.  Returns (set, value).
    """
    budget = budget or OracleBudget.from_env()
    ids = instance.ids()
    budget.require(len(ids))
    obj = instance.objective
    linear = obj.kind == "linear"
    matroids = instance.matroids
    if linear:
        ids = sorted(ids, key=lambda e: -instance.weight(e))
        suffix = [Fraction(0)] * (len(ids) + 1)
        for i in range(len(ids) - 1, -1, -1):
            suffix[i] = suffix[i + 1] + instance.weight(ids[i])

    best_set: frozenset = frozenset()
    best_val = obj.value(())

    def dfs(i: int, chosen: list, value: Fraction):
        nonlocal best_set, best_val
        if value > best_val:
            best_set, best_val = frozenset(chosen), value
        if i == len(ids):
            return
        if linear:
            if value + suffix[i] <= best_val:
                return
        else:
            bound = value + sum(
                (max(Fraction(0), obj.marginal(e, chosen)) for e in ids[i:]), Fraction(0)
            )
            if bound <= best_val:
                return
        e = ids[i]
        cand = chosen + [e]
        if all(m.is_independent(cand) for m in matroids):
            dfs(i + 1, cand, value + instance.weight(e) if linear else obj.value(cand))
        dfs(i + 1, chosen, value)

    dfs(0, [], best_val)
    return best_set, best_val


def approximation_ratio(opt_weight, achieved):
    """opt / achieved; 1 for an empty instance, ``math.inf`` when nothing was achieved."""
    opt_weight, achieved = Fraction(opt_weight), Fraction(achieved)
    if achieved == 0:
        return Fraction(1) if opt_weight == 0 else math.inf
    return opt_weight / achieved


def best_common_subset(matroids, ground, value, budget: Optional[OracleBudget] = None):
    """Maximum of ``value`` over subsets of ground independent in every matroid."""
    ground = list(ground)
    (budget or OracleBudget.from_env()).require(len(ground), "stack")
    best, best_val = frozenset(), value(())
    for size in range(1, len(ground) + 1):
        any_indep = False
        for combo in combinations(ground, size):
            if all(m.is_independent(combo) for m in matroids):
                any_indep = True
                v = value(combo)
                if v > best_val:
                    best, best_val = frozenset(combo), v
        if not any_indep:
            break
    return best, best_val


@dataclass
class ProbeReport:
    k: int
    opt_weight: Fraction
    orders_tried: int
    worst_ratio: object  # min over orders of k * best / opt
    worst_order: list = field(default_factory=list)
    worst_best_subset: frozenset = frozenset()
    flagged: bool = False
    counterexample_order: Optional[list] = None


def conjecture_probe(instance, orders, params: Optional[StreamParams] = None,
                     budget: Optional[OracleBudget] = None) -> ProbeReport:
    """Look for a stream order whose stack holds no (1/k)-approximate common independent set."""
    budget = budget or OracleBudget.from_env()
    params = params or StreamParams(Fraction(1))
    _, opt = brute_force_intersection_opt(instance, budget)
    k = instance.k
    report = ProbeReport(k, opt, 0, math.inf)
    for order in orders:
        order = list(order)
        rep = run_streaming_k(instance, order, params)
        stack = rep.final_state.alive_ids()
        best, best_val = best_common_subset(
            instance.matroids, stack, lambda s: sum((instance.weight(e) for e in s), Fraction(0)),
            budget,
        )
        report.orders_tried += 1
        ratio = k * best_val / opt if opt > 0 else math.inf
        if ratio < report.worst_ratio:
            report.worst_ratio = ratio
            report.worst_order = order
            report.worst_best_subset = best
        if best_val * k < opt and not report.flagged:
            report.flagged = True
            report.counterexample_order = order
    return report


def random_orders(instance, count: int, seed: int):
    rng = random.Random(seed)
    base = instance.default_order()
    for _ in range(count):
        order = list(base)
        rng.shuffle(order)
        yield order


def no_kernel_witness(instance, state, budget: Optional[OracleBudget] = None) -> bool:
    """True iff no common independent T of the alive stack dominates all of it.

    Domination is taken in every matroid of the state, each ordered by its
    recorded w_i values.
    """
    oms = ordered_matroids(state)
    ground = state.alive_ids()
    (budget or OracleBudget.from_env()).require(len(ground), "stack")
    for size in range(len(ground) + 1):
        for combo in combinations(ground, size):
            if not all(om.matroid.is_independent(combo) for om in oms):
                continue
            if check_kernel(oms, ground, combo):
                return False
    return True
