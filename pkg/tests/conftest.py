import random

import pytest

from disclose.graph import BipartiteGraph
from disclose.graphgen import make_fixture


def random_graph(rng: random.Random, max_n=6, max_m=6, neg_bound=None,
                 require_positive=False) -> BipartiteGraph:
    """Uniform-ish random bipartite graph for fuzzing.

    ``neg_bound`` caps every agent's negative degree; ``require_positive``
    forces at least one positive target.
    """
    n = rng.randint(1, max_n)
    m = rng.randint(1, max_m)
    labels = [rng.choice([1, -1]) for _ in range(m)]
    if require_positive and all(v == -1 for v in labels):
        labels[rng.randrange(m)] = 1
    positives = [t for t in range(m) if labels[t] == 1]
    negatives = [t for t in range(m) if labels[t] == -1]
    adjacency = []
    for _ in range(n):
        if neg_bound is None:
            row = rng.sample(range(m), rng.randint(0, m))
        else:
            pos_part = rng.sample(positives, rng.randint(0, len(positives)))
            cap = min(neg_bound, len(negatives))
            neg_part = rng.sample(negatives, rng.randint(0, cap))
            row = pos_part + neg_part
        adjacency.append(sorted(row))
    return BipartiteGraph.build(adjacency, labels)


def random_subset(rng: random.Random, graph: BipartiteGraph, max_size=None):
    cap = graph.m if max_size is None else min(max_size, graph.m)
    return tuple(sorted(rng.sample(range(graph.m), rng.randint(0, cap))))


@pytest.fixture
def fig1():
    return make_fixture("FIG1")


@pytest.fixture
def fig2():
    return make_fixture("FIG2")


@pytest.fixture
def tab7():
    return make_fixture("TAB7")
