import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import naive_opt, seeded_instance
from mstream import fixtures
from mstream.errors import BudgetError
from mstream.generators import random_coverage_instance, random_cut_instance
from mstream.local_ratio import run_local_ratio
from mstream.oracles import (
    OracleBudget, approximation_ratio, best_common_subset, brute_force_intersection_opt,
    conjecture_probe, no_kernel_witness, random_orders,
)
from mstream.streaming import run_streaming_k

F = Fraction


def test_fixture_optima():
    # frozen from the unpruned enumeration in conftest.naive_opt
    assert brute_force_intersection_opt(fixtures.load("four_cycle"))[1] == 4
    assert brute_force_intersection_opt(fixtures.load("counterexample")) == ({"b", "d"}, F(104, 100))
    assert brute_force_intersection_opt(fixtures.load("three_matroid"))[1] == 11


@pytest.mark.parametrize("name", ["four_cycle", "counterexample", "three_matroid"])
def test_fixture_optima_match_naive(name):
    inst = fixtures.load(name)
    assert brute_force_intersection_opt(inst)[1] == naive_opt(inst)


@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_pruned_search_matches_naive(seed, k):
    inst = seeded_instance(seed, k=k, max_n=9)
    best, val = brute_force_intersection_opt(inst)
    assert val == naive_opt(inst)
    assert all(m.is_independent(best) for m in inst.matroids)
    assert inst.objective.value(best) == val


@given(st.integers(0, 10**6))
def test_pruned_search_submodular(seed):
    rng = random.Random(seed)
    inst = random_coverage_instance(rng, max_n=8) if seed % 2 else random_cut_instance(rng, max_n=8)
    assert brute_force_intersection_opt(inst)[1] == naive_opt(inst)


def test_approximation_ratio():
    assert approximation_ratio(4, 3) == F(4, 3)
    assert approximation_ratio(0, 0) == 1
    assert approximation_ratio(1, 0) == math.inf


def test_budget(monkeypatch):
    inst = seeded_instance(1, n=12)
    with pytest.raises(BudgetError):
        brute_force_intersection_opt(inst, OracleBudget(max_elements=11))
    with pytest.raises(BudgetError):
        brute_force_intersection_opt(inst, OracleBudget(max_subsets=1 << 10))
    monkeypatch.setenv("MSTREAM_ORACLE_MAX", "5")
    assert OracleBudget.from_env().max_elements == 5
    with pytest.raises(BudgetError):
        brute_force_intersection_opt(inst)


def test_best_common_subset():
    inst = fixtures.load("three_matroid")
    val = lambda s: sum((inst.weight(e) for e in s), F(0))  # noqa: E731
    best, v = best_common_subset(inst.matroids, inst.ids(), val)
    assert v == 11 and best in ({"x", "b"}, {"y", "b"}, {"z", "b"})


def test_three_matroid_has_no_kernel_but_is_not_flagged():
    inst = fixtures.load("three_matroid")
    rep = run_streaming_k(inst)
    assert no_kernel_witness(inst, rep.final_state)
    probe = conjecture_probe(inst, [inst.default_order()] + list(random_orders(inst, 30, 0)))
    assert not probe.flagged and probe.worst_ratio >= 1
    assert probe.orders_tried == 31


def test_two_matroid_stacks_always_have_a_kernel():
    inst = fixtures.load("four_cycle")
    assert not no_kernel_witness(inst, run_local_ratio(inst))


def test_random_orders_deterministic():
    inst = seeded_instance(2, n=6)
    assert list(random_orders(inst, 5, 3)) == list(random_orders(inst, 5, 3))
    assert all(sorted(o) == sorted(inst.ids()) for o in random_orders(inst, 5, 3))
