"""Memory-bounded local ratio: selection slack alpha and deletion ratio y.

An arriving element is kept only if its weight beats ``alpha`` times the
summed thresholds.  After each selection every alive entry whose gain is
more than a factor ``y`` below the current maximum gain is evicted, unless
it belongs to one of the maintained max-weight sets T_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ParamError
from .kernel import extract_solution
from .local_ratio import SelectionState, process_element, reverse_greedy_baseline

INF = math.inf


@dataclass(frozen=True)
class StreamParams:
    alpha: Fraction
    y: object = INF  # Fraction or math.inf
    epsilon: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.y != INF:
            object.__setattr__(self, "y", Fraction(self.y))
        if self.epsilon is None:
            eps = self.alpha - 1 if self.alpha > 1 else None
            object.__setattr__(self, "epsilon", eps)
        else:
            object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.alpha < 1:
            raise ParamError("alpha must be at least 1")
        if self.alpha == 1 and self.y != INF:
            raise ParamError("alpha = 1 is only allowed without deletions (y = inf)")
        # y = 0 keeps only the T_i members; it arises when some rank is 0
        if self.y != INF and self.y < 0:
            raise ParamError("y must be non-negative")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ParamError("epsilon must be positive")

    @classmethod
    def default(cls, instance, epsilon) -> "StreamParams":
        """alpha = 1 + eps, y = min rank / eps^2."""
        eps = Fraction(epsilon)
        if eps <= 0:
            raise ParamError("epsilon must be positive")
        return cls(1 + eps, Fraction(min(instance.ranks())) / eps**2, eps)


@dataclass
class StreamReport:
    final_state: SelectionState
    solution: frozenset
    solution_weight: Fraction
    g_alive: Fraction
    g_all: Fraction
    peak_stack: int
    memory_bound: object  # Fraction, or math.inf when y is infinite
    ratio_vs_opt: Optional[Fraction] = None
    opt_weight: Optional[Fraction] = None
    certified: bool = True
    extras: dict = field(default_factory=dict)


def log_ceil(base: Fraction, x: Fraction) -> int:
    """Smallest n >= 0 with base**n >= x, by repeated multiplication."""
    if base <= 1:
        raise ParamError("logarithm base must exceed 1")
    n, acc = 0, Fraction(1)
    while acc < x:
        acc *= base
        n += 1
    return n


def memory_bound(instance, params: StreamParams):
    """sum_i r_i + min_i r_i * ceil(log_alpha(y / eps)); inf without deletions."""
    if params.y == INF:
        return INF
    ranks = instance.ranks()
    eps = params.epsilon if params.epsilon is not None else params.alpha - 1
    steps = log_ceil(params.alpha, params.y / eps)
    return Fraction(sum(ranks) + min(ranks) * steps)


def deletion_sweep(state: SelectionState, y) -> int:
    """Evict alive entries with y * g < g_max that sit in no T_i."""
    if y == INF:
        return 0
    alive = state.alive()
    if not alive:
        return 0
    g_max = max(x.g for x in alive)
    keep = state.retained()
    victims = [x for x in alive if y * x.g < g_max and x.element not in keep]
    for x in victims:
        state.delete(x)
    return len(victims)


def _stream(instance, order, params: StreamParams, check: bool) -> SelectionState:
    state = SelectionState(instance.matroids, check=check)
    for pos, e in enumerate(order):
        decision = process_element(state, e, instance.weight(e), params.alpha, arrival=pos)
        if decision.selected:
            deletion_sweep(state, params.y)
    return state


def finish(instance, state, params, solution, weight, certified) -> StreamReport:
    return StreamReport(
        final_state=state,
        solution=solution,
        solution_weight=weight,
        g_alive=state.stats.total_gain_alive,
        g_all=state.stats.total_gain_all,
        peak_stack=state.stats.peak_stack,
        memory_bound=memory_bound(instance, params),
        certified=certified,
    )


def run_streaming(instance, order: Optional[Sequence[str]] = None, params: StreamParams = None,
                  check: bool = False) -> StreamReport:
    """Two-matroid streaming pass; the solution is the kernel of the alive stack."""
    if instance.k != 2:
        raise ParamError("run_streaming needs exactly two matroids")
    return run_streaming_k(instance, order, params, check)


def run_streaming_k(instance, order: Optional[Sequence[str]] = None, params: StreamParams = None,
                    check: bool = False) -> StreamReport:
    """k-matroid streaming pass.

    For k = 2 the solution is kernel-extracted and certified.  For k >= 3 no
    extractor with a guarantee is known; the reverse-greedy set is reported
    and flagged as uncertified.
    """
    if instance.k < 2:
        raise ParamError("at least two matroids are required")
    if instance.objective.kind != "linear":
        raise ParamError("streaming runs need a linear objective; use run_submodular")
    if params is None:
        params = StreamParams(Fraction(1))
    order = instance.default_order() if order is None else list(order)
    state = _stream(instance, order, params, check)
    if instance.k == 2:
        solution, certified = extract_solution(state), True
    else:
        solution, certified = reverse_greedy_baseline(state), False
    weight = sum((instance.weight(e) for e in solution), Fraction(0))
    return finish(instance, state, params, solution, weight, certified)
