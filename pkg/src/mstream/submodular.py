"""Streaming submodular matroid intersection with a skip coin.

Each arriving element is weighed by its marginal value against the alive
stack.  If it clears the alpha test, a coin keeps it with probability q
(otherwise it is discarded for good); kept elements go through the same
push / T_i update / deletion sweep as the linear streaming pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import InstanceError, InvariantError, ParamError
from .kernel import extract_solution
from .local_ratio import SelectionState
from .objectives import Objective
from .streaming import INF, StreamParams, deletion_sweep, finish

# Rational stand-ins for 1 + 1/sqrt(2) and 1 + sqrt(3)/2, each within 1e-8.
ALPHA_MONOTONE = Fraction(1 + 1 / math.sqrt(2)).limit_denominator(10**4)
ALPHA_NON_MONOTONE = Fraction(1 + math.sqrt(3) / 2).limit_denominator(10**4)


def skip_q(alpha: Fraction) -> Fraction:
    """The keep probability 1 / (2 alpha + 1) used for non-monotone objectives."""
    return 1 / (2 * Fraction(alpha) + 1)


def guarantee_factor(alpha: Fraction, delta: Fraction) -> Fraction:
    """(2 alpha + alpha / (alpha - 1)) (1 + delta)."""
    alpha = Fraction(alpha)
    return (2 * alpha + alpha / (alpha - 1)) * (1 + Fraction(delta))


@dataclass(frozen=True)
class SubmodularParams:
    alpha: Fraction
    q: Fraction = Fraction(1)
    y: object = INF
    delta: Optional[Fraction] = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "q", Fraction(self.q))
        if self.y != INF:
            object.__setattr__(self, "y", Fraction(self.y))
        if self.delta is not None:
            object.__setattr__(self, "delta", Fraction(self.delta))
            if self.delta <= 0:
                raise ParamError("delta must be positive")
        if not 0 < self.q <= 1:
            raise ParamError("q must lie in (0, 1]")
        # the stream machinery validates alpha / y
        self.stream_params()

    @classmethod
    def default(cls, instance, alpha, delta, q=Fraction(1), seed=0) -> "SubmodularParams":
        """y = min rank / delta^2."""
        delta = Fraction(delta)
        if delta <= 0:
            raise ParamError("delta must be positive")
        return cls(alpha, q, Fraction(min(instance.ranks())) / delta**2, delta, seed)

    @property
    def guarantee_mode(self) -> bool:
        return self.q == 1 or self.q == skip_q(self.alpha)

    def stream_params(self) -> StreamParams:
        # memory accounting for this variant measures log_alpha(y / (alpha - 1))
        return StreamParams(self.alpha, self.y)


def marginal_value(obj: Objective, e: str, s) -> Fraction:
    return obj.marginal(e, s)


@dataclass
class SubmodularCheck:
    ok: bool
    violation: Optional[tuple] = None  # (A, e, e2) with f(e|A) < f(e|A+e2)
    monotone_violation: Optional[tuple] = None  # (A, e) with f(e|A) < 0

    def __bool__(self):
        return self.ok


def spot_check_submodular(obj: Objective, ground, trials: int = 2000, seed: int = 0) -> SubmodularCheck:
    """Diminishing-returns check, exhaustive on at most 10 elements.

    Uses the local form f(A+e) + f(A+e2) >= f(A+e+e2) + f(A), which is
    equivalent to submodularity when it holds for every A, e, e2.  The
    monotone flag of the objective is checked alongside.
    """
    ground = sorted(ground)
    n = len(ground)
    if n <= 10:
        values = {}
        for mask in range(1 << n):
            values[mask] = obj.value([ground[i] for i in range(n) if mask >> i & 1])
        for mask in range(1 << n):
            outside = [i for i in range(n) if not mask >> i & 1]
            for i in outside:
                gain = values[mask | 1 << i] - values[mask]
                if obj.monotone and gain < 0:
                    a = frozenset(ground[j] for j in range(n) if mask >> j & 1)
                    return SubmodularCheck(False, None, (a, ground[i]))
                for j in outside:
                    if j <= i:
                        continue
                    both = mask | 1 << i | 1 << j
                    if values[mask | 1 << i] + values[mask | 1 << j] < values[both] + values[mask]:
                        a = frozenset(ground[t] for t in range(n) if mask >> t & 1)
                        return SubmodularCheck(False, (a, ground[i], ground[j]))
        return SubmodularCheck(True)

    rng = np.random.default_rng(seed)
    for _ in range(trials):
        picks = rng.permutation(n)
        cut = int(rng.integers(0, n - 1))
        a = frozenset(ground[i] for i in picks[:cut])
        e, e2 = ground[picks[cut]], ground[picks[cut + 1]]
        lo = obj.marginal(e, a | {e2})
        hi = obj.marginal(e, a)
        if hi < lo:
            return SubmodularCheck(False, (a, e, e2))
        if obj.monotone and hi < 0:
            return SubmodularCheck(False, None, (a, e))
    return SubmodularCheck(True)


def _ensure_submodular(instance):
    obj = instance.objective
    if getattr(obj, "_spot_checked", False):
        return
    report = spot_check_submodular(obj, instance.ids())
    if not report:
        raise InstanceError(
            f"objective failed the submodularity spot check: "
            f"{report.violation or report.monotone_violation}"
        )
    obj._spot_checked = True


class Coin:
    """Exact Bernoulli(q) draws from a PCG64 stream."""

    def __init__(self, q: Fraction, seed: int):
        self.q = Fraction(q)
        self.rng = np.random.Generator(np.random.PCG64(seed))
        self.draws = 0

    def keep(self) -> bool:
        if self.q == 1:
            return True
        self.draws += 1
        u = int(self.rng.integers(0, self.q.denominator))
        return u < self.q.numerator


def run_submodular(instance, order: Optional[Sequence[str]] = None,
                   params: Optional[SubmodularParams] = None, check: bool = False,
                   verify_objective: bool = True):
    """One pass of the skip-coin streaming algorithm over two matroids."""
    if instance.k != 2:
        raise ParamError("run_submodular needs exactly two matroids")
    if params is None:
        params = SubmodularParams(Fraction(2))
    if verify_objective:
        _ensure_submodular(instance)
    obj = instance.objective
    sp = params.stream_params()
    order = instance.default_order() if order is None else list(order)
    state = SelectionState(instance.matroids, check=check)
    coin = Coin(params.q, params.seed)
    skipped = 0
    marginal_sum = Fraction(0)
    for pos, e in enumerate(order):
        w_e = obj.marginal(e, state.alive_ids())
        ths = state.thresholds(e, pos)
        if w_e > sp.alpha * sum(ths):
            if not coin.keep():
                skipped += 1
                state._pending = None
                continue
            state.push(e, pos, w_e, ths)
            marginal_sum += w_e
            deletion_sweep(state, sp.y)
        else:
            state._pending = None

    solution = extract_solution(state)
    value = obj.value(solution)
    if value < state.stats.total_gain_alive:
        raise InvariantError(f"f(T) = {value} below alive gain {state.stats.total_gain_alive}")
    report = finish(instance, state, sp, solution, value, True)
    report.extras = {
        "seed": params.seed,
        "deterministic": params.q == 1,
        "guarantee_mode": params.guarantee_mode,
        "coin_draws": coin.draws,
        "skipped": skipped,
        "marginal_weight": sum((state.index[e].weight for e in solution), Fraction(0)),
        "selected_marginal_sum": marginal_sum,
    }
    return report

