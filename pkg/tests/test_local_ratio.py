from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import seeded_instance
from mstream import fixtures
from mstream.errors import InvariantError, ParamError
from mstream.local_ratio import (
    SelectionState, bipartite_edges, process_element, reverse_greedy_baseline,
    run_local_ratio, run_matching_baseline, threshold,
)
from mstream.matroids import UniformMatroid, greedy_max_independent, span_threshold

F = Fraction


def reference_run(inst, order, alpha=F(1)):
    """Independent re-implementation: thresholds from the span definition, no T_i bookkeeping."""
    stack = []  # (id, g, [w_i])
    for e in order:
        w = inst.weight(e)
        ths = []
        for i, m in enumerate(inst.matroids):
            wt = {x: ws[i] for x, _, ws in stack}
            ths.append(span_threshold(m, list(wt), e, wt))
        if w > alpha * sum(ths):
            g = w - sum(ths)
            stack.append((e, g, [t + g for t in ths]))
    return stack


def test_four_cycle_trace():
    inst = fixtures.load("four_cycle")
    state = run_local_ratio(inst, check=True)
    assert state.alive_ids() == ["e1", "e2", "e3"]
    assert [x.g for x in state.alive()] == [1, 1, 1]
    assert [x.w for x in state.alive()] == [(1, 1), (1, 2), (2, 1)]
    assert state.stats.total_gain_alive == 3


def test_four_cycle_matching_baseline_agrees():
    inst = fixtures.load("four_cycle")
    edges = bipartite_edges(inst)
    res = run_matching_baseline(edges, inst.weights(), inst.default_order())
    assert res.selected == ["e1", "e2", "e3"]
    assert list(res.gains.values()) == [1, 1, 1]
    # a, b, c, d as (left block of e1/e2 ...) vertices
    assert sorted(res.potentials.values()) == [1, 1, 2, 2]


def test_matching_baseline_rejects_odd_cycle():
    from mstream.errors import InstanceError

    with pytest.raises(InstanceError):
        run_matching_baseline({"a": (0, 1), "b": (1, 2), "c": (2, 0)}, {"a": 1, "b": 1, "c": 1})


def test_counterexample_trace():
    eps = F(1, 100)
    inst = fixtures.load("counterexample")
    state = run_local_ratio(inst, check=True)
    assert state.alive_ids() == ["a", "b", "c", "d"]
    assert [x.g for x in state.alive()] == [1, eps, eps, eps]
    rg = reverse_greedy_baseline(state)
    assert rg == {"c", "d"}
    assert sum(inst.weight(e) for e in rg) == 5 * eps


@pytest.mark.parametrize("eps", [F(1, 2), F(1, 7), F(1, 1000)])
def test_counterexample_any_eps(eps):
    inst = fixtures.counterexample(eps)
    state = run_local_ratio(inst)
    assert [x.g for x in state.alive()] == [1, eps, eps, eps]


@given(st.integers(0, 10**6), st.sampled_from([F(1), F(3, 2), F(2)]))
def test_matches_reference(seed, alpha):
    inst = seeded_instance(seed)
    order = inst.default_order()
    state = run_local_ratio(inst, order, alpha=alpha, check=True)
    ref = reference_run(inst, order, alpha)
    assert [(x.element, x.g, list(x.w)) for x in state.alive()] == ref


@given(st.integers(0, 10**6))
def test_t_sets_are_greedy_and_gains_positive(seed):
    inst = seeded_instance(seed)
    state = run_local_ratio(inst, check=True)
    state.check_t()
    arrivals = state.arrivals()
    for i, m in enumerate(inst.matroids):
        wt = state.weights(i)
        assert set(state.t[i]) == greedy_max_independent(m, state.alive_ids(), wt, arrivals)
        assert sum(wt[e] for e in state.t[i]) == state.stats.total_gain_alive
    assert all(x.g > 0 for x in state.alive())
    for x in state.alive():
        # w_i = threshold_i + g and weight = g + sum of thresholds
        assert x.weight == x.g + sum(w - x.g for w in x.w)


def test_process_element_rule():
    state = SelectionState([UniformMatroid(1), UniformMatroid(1)])
    d = process_element(state, "a", F(2), arrival=0)
    assert d.selected and d.g == 2 and d.w == (2, 2)
    d = process_element(state, "b", F(4), arrival=1)  # thresholds 2 + 2, not strictly above
    assert not d.selected and d.thresholds == (2, 2)
    d = process_element(state, "c", F(5), arrival=2)
    assert d.selected and d.g == 1 and d.w == (3, 3)
    assert threshold(state, 0, "z") == 3


def test_alpha_blocks_marginal_elements():
    state = SelectionState([UniformMatroid(1), UniformMatroid(1)])
    process_element(state, "a", F(1), arrival=0)
    assert not process_element(state, "b", F(5, 2), F(3, 2), arrival=1).selected
    assert process_element(state, "c", F(31, 10), F(3, 2), arrival=2).selected


def test_zero_weight_never_selected_and_errors():
    state = SelectionState([UniformMatroid(1), UniformMatroid(1)])
    assert not process_element(state, "a", F(0), arrival=0).selected
    with pytest.raises(ParamError):
        process_element(state, "b", F(-1), arrival=1)
    with pytest.raises(InvariantError):
        state.push("c", 2, F(0), (F(0), F(0)))
    with pytest.raises(ParamError):
        SelectionState([])


def test_three_matroid_needs_k2():
    with pytest.raises(ParamError):
        run_local_ratio(fixtures.load("three_matroid"))
