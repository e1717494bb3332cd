"""Shared generators and brute-force oracles for the test suite."""

from itertools import combinations

import numpy as np

from persnet.graph import WeightedGraph


def random_graph(rng, n, density=1.0, scale=2.0, distinct=False):
    """Random simple graph; ``distinct=False`` draws from a coarse grid to force ties."""
    edges = []
    for i, j in combinations(range(n), 2):
        if rng.random() < density:
            w = rng.random() * scale if distinct else float(rng.integers(0, 6)) * scale / 5
            edges.append((i, j, w))
    return WeightedGraph(n, tuple(edges))


def cliques_by_subsets(g, max_dim):
    """Every clique with at most ``max_dim + 1`` vertices, by checking all vertex subsets."""
    adj = {(i, j) for i, j, _ in g.edges}
    out = set()
    for size in range(1, max_dim + 2):
        for c in combinations(range(g.node_count), size):
            if all(pair in adj for pair in combinations(c, 2)):
                out.add(c)
    return out


def random_diagram(rng, dim=0, max_points=5, top=1.0):
    from persnet.persistence import PersistenceDiagram

    k = int(rng.integers(0, max_points + 1))
    births = rng.random(k) * top
    deaths = births + rng.random(k) * top + 1e-3
    return PersistenceDiagram.from_pairs({dim: list(zip(births, deaths))}, max_dim=dim + 1)
