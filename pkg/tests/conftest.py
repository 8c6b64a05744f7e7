import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import settings

from mstream.generators import random_instance

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


def all_subsets(ids):
    ids = list(ids)
    for size in range(len(ids) + 1):
        yield from combinations(ids, size)


def naive_opt(inst):
    """Max weight over every subset independent in all matroids (no pruning)."""
    best = Fraction(0)
    for s in all_subsets(inst.ids()):
        if all(m.is_independent(s) for m in inst.matroids):
            best = max(best, inst.objective.value(s))
    return best


@pytest.fixture
def rng():
    return random.Random(12345)


def seeded_instance(seed, **kw):
    return random_instance(random.Random(seed), **kw)
