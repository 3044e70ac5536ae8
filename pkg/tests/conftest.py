import random

import pytest

from tropilink.graphs import build_graph


def random_connected_multigraph(rng: random.Random, max_vertices=12,
                                max_extra=8, legs=0, max_weight=0):
    """Random spanning tree plus extra edges and loops; optional legs and
    weights.  Used as raw material for conservation-law tests."""
    nv = rng.randint(1, max_vertices)
    edges = []
    for v in range(1, nv):
        edges.append((rng.randrange(v), v))
    for _ in range(rng.randint(0, max_extra)):
        a = rng.randrange(nv)
        b = rng.randrange(nv)
        edges.append((a, b))
    leg_list = [(rng.randrange(nv), i + 1) for i in range(legs)]
    weights = None
    if max_weight:
        weights = {v: rng.randint(0, max_weight) for v in range(nv)}
    return build_graph(edges, legs=leg_list, weights=weights,
                       isolated=range(nv))


@pytest.fixture
def rng():
    return random.Random(20260810)
