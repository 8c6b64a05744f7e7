"""Bundled instance files."""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from ..errors import InstanceError
from ..instance import Instance, make_instance, parse_instance
from ..matroids import PartitionMatroid, UniformMatroid

NAMES = ("four_cycle", "counterexample", "three_matroid")


def path(name: str):
    return resources.files(__package__).joinpath(f"{name}.json")


def load(name: str) -> Instance:
    if name not in NAMES:
        raise InstanceError(f"no bundled fixture {name!r}; choose from {NAMES}")
    inst = parse_instance(path(name).read_bytes())
    inst.meta.setdefault("name", name)
    return inst


def counterexample(eps=Fraction(1, 100)) -> Instance:
    """The four-element reverse-greedy counterexample for an arbitrary eps."""
    eps = Fraction(eps)
    weights = {"a": 1, "b": 1 + eps, "c": 2 * eps, "d": 3 * eps}
    return make_instance(
        weights,
        [PartitionMatroid([["a", "b"]], [1]), UniformMatroid(2)],
        meta={"name": "counterexample", "epsilon": str(eps)},
    )
