"""Random and structured instance generators for tests and benchmarks."""

from __future__ import annotations

import random
from fractions import Fraction

from .instance import make_instance
from .matroids import GraphicMatroid, PartitionMatroid, UniformMatroid
from .objectives import CoverageObjective, CutObjective


def random_weight(rng: random.Random) -> Fraction:
    if rng.random() < 0.05:
        return Fraction(0)
    return Fraction(rng.randint(1, 40), rng.randint(1, 8))


def random_matroid(rng: random.Random, ids, kind=None):
    ids = list(ids)
    kind = kind or rng.choice(("partition", "uniform", "graphic"))
    if kind == "partition":
        nblocks = rng.randint(1, max(1, len(ids) // 2))
        blocks = [[] for _ in range(nblocks)]
        for e in ids:
            slot = rng.randrange(nblocks + 1)
            if slot < nblocks:
                blocks[slot].append(e)
        caps = [rng.randint(1, 2) for _ in blocks]
        return PartitionMatroid(blocks, caps)
    if kind == "uniform":
        return UniformMatroid(rng.randint(1, max(1, min(len(ids), 4))))
    nv = rng.randint(2, 5)
    edges = {}
    for e in ids:
        u = rng.randrange(nv)
        v = rng.randrange(nv)
        if u == v and rng.random() < 0.8:
            v = (u + 1) % nv
        edges[e] = (u, v)
    return GraphicMatroid(nv, edges)


def random_instance(rng: random.Random, n=None, k=2, max_n=12, kinds=None):
    n = rng.randint(0, max_n) if n is None else n
    ids = [f"e{i}" for i in range(n)]
    weights = {e: random_weight(rng) for e in ids}
    matroids = [random_matroid(rng, ids, kinds[i] if kinds else None) for i in range(k)]
    order = list(ids)
    rng.shuffle(order)
    return make_instance(weights, matroids, stream_order=order, meta={"name": "random"})


def random_coverage_instance(rng: random.Random, n=None, max_n=10, items=8):
    n = rng.randint(1, max_n) if n is None else n
    ids = [f"e{i}" for i in range(n)]
    universe = [f"u{j}" for j in range(items)]
    sets = {e: rng.sample(universe, rng.randint(1, 4)) for e in ids}
    item_weights = {u: Fraction(rng.randint(1, 12), rng.randint(1, 4)) for u in universe}
    inst = random_instance(rng, n=n, k=2)
    return make_instance(
        inst.weights(), inst.matroids, CoverageObjective(sets, item_weights),
        stream_order=inst.stream_order, meta={"name": "random-coverage"},
    )


def random_cut_instance(rng: random.Random, n=None, max_n=10, extra_vertices=2):
    """Graph cut where element i toggles vertex i (disjoint toggles keep f submodular)."""
    n = rng.randint(2, max_n) if n is None else n
    ids = [f"e{i}" for i in range(n)]
    nv = n + extra_vertices
    edges = []
    for u in range(nv):
        for v in range(u + 1, nv):
            if rng.random() < 0.45:
                edges.append((u, v, Fraction(rng.randint(1, 9), rng.randint(1, 3))))
    toggles = {e: [i] for i, e in enumerate(ids)}
    inst = random_instance(rng, n=n, k=2)
    return make_instance(
        inst.weights(), inst.matroids, CutObjective(nv, toggles, tuple(edges)),
        stream_order=inst.stream_order, meta={"name": "random-cut"},
    )


def geometric_stream(n: int, ratio=3):
    """Weights 1, r, r^2, ... with every element in one unit-capacity block of both matroids.

    With r = 2 the second element exactly ties its threshold and is rejected;
    r >= 3 makes the unbounded pass keep every element.
    """
    ids = [f"g{i}" for i in range(n)]
    weights = {e: Fraction(ratio) ** i for i, e in enumerate(ids)}
    block = PartitionMatroid([ids], [1])
    return make_instance(weights, [block, block], meta={"name": f"geometric-{n}"})


def stable_marriage_instance(men_prefs: dict, women_prefs: dict):
    """Encode a complete stable-marriage instance as two ordered partition matroids.

    Element ``m|w`` is the pair (m, w).  Returns (instance, key1, key2) where
    key1 ranks pairs by the man's preference and key2 by the woman's, both as
    (weight, arrival) tuples for :class:`mstream.kernel.OrderedMatroid`.
    """
    men, women = list(men_prefs), list(women_prefs)
    pairs = [f"{m}|{w}" for m in men for w in women]
    by_man = PartitionMatroid([[f"{m}|{w}" for w in women] for m in men], [1] * len(men))
    by_woman = PartitionMatroid([[f"{m}|{w}" for m in men] for w in women], [1] * len(women))
    inst = make_instance({p: 1 for p in pairs}, [by_man, by_woman], meta={"name": "marriage"})
    key1, key2 = {}, {}
    for i, p in enumerate(pairs):
        m, w = p.split("|")
        key1[p] = (Fraction(len(women) - men_prefs[m].index(w)), i)
        key2[p] = (Fraction(len(men) - women_prefs[w].index(m)), i)
    return inst, key1, key2
