import itertools

import pytest
from hypothesis import strategies as st

from isgx import scenario
from isgx.action import restricted_subaction, tautological_action
from isgx.semigroup import GroundSet, PartialBijection, generate_semigroup


@pytest.fixture(scope="session")
def load():
    cache = {}

    def _load(name):
        if name not in cache:
            cache[name] = scenario.load(name)
        return cache[name]

    return _load


def all_partial_bijections(ground):
    """Every injective partial map on ``ground``, by brute force over all functions into X + {None}."""
    n = len(ground)
    out = []
    for image in itertools.product([None, *range(n)], repeat=n):
        hit = [y for y in image if y is not None]
        if len(hit) == len(set(hit)):
            out.append(PartialBijection(ground, image))
    return out


@st.composite
def partial_bijections(draw, ground):
    n = len(ground)
    perm = draw(st.permutations(range(n)))
    dom = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return PartialBijection(ground, tuple(p if d else None for p, d in zip(perm, dom)))


@st.composite
def random_actions(draw, max_points=3, max_gens=2):
    """A tautological action of a generated subsemigroup of I(X), restricted to a random subset of X."""
    n = draw(st.integers(1, max_points))
    ground = GroundSet(tuple(f"x{i}" for i in range(n)))
    k = draw(st.integers(1, max_gens))
    gens = [draw(partial_bijections(ground)) for _ in range(k)]
    S = generate_semigroup(gens, [f"g{i}" for i in range(k)])
    pa = tautological_action(S)
    keep = draw(st.sets(st.integers(0, n - 1), min_size=1))
    return restricted_subaction(pa, keep)
