"""Weighted networks and their threshold views."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

SYMMETRY_ATOL = 1e-9

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class SubLevel:
    """Keep edges with weight at or below the threshold."""


@dataclass(frozen=True)
class SuperLevel:
    """Keep edges with weight at or above the threshold.

    Realized as the sub-level filtration of ``theta_max - w``.
    """

    theta_max: float = 2.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta_max) and self.theta_max > 0):
            raise ValueError(f"theta_max must be positive and finite, got {self.theta_max!r}")


FiltrationDirection = Union[SubLevel, SuperLevel]


def _default_labels(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph with nonnegative finite edge weights.

    Edges are stored canonically as ``(i, j, w)`` with ``i < j``, sorted by
    ``(i, j)``. Construction validates and canonicalizes whatever edge list is
    passed in.
    """

    node_count: int
    edges: tuple[Edge, ...] = ()
    node_labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        n = self.node_count
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"node_count must be a positive integer, got {n!r}")
        labels = tuple(str(x) for x in self.node_labels) if self.node_labels else _default_labels(n)
        if len(labels) != n:
            raise ValueError(f"expected {n} node labels, got {len(labels)}")
        canon: dict[tuple[int, int], float] = {}
        for i, j, w in self.edges:
            i, j, w = int(i), int(j), float(w)
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) has a node index outside [0, {n})")
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not math.isfinite(w) or w < 0:
                raise ValueError(f"edge ({i}, {j}) has invalid weight {w!r}")
            key = (i, j) if i < j else (j, i)
            if key in canon:
                raise ValueError(f"duplicate edge {key}")
            canon[key] = w
        object.__setattr__(self, "node_count", int(n))
        object.__setattr__(self, "node_labels", labels)
        object.__setattr__(self, "edges", tuple((i, j, w) for (i, j), w in sorted(canon.items())))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def max_weight(self) -> float:
        return max((w for _, _, w in self.edges), default=0.0)

    def weight(self, i: int, j: int) -> float | None:
        """Weight of edge {i, j}, or None when absent."""
        key = (i, j) if i < j else (j, i)
        for a, b, w in self.edges:
            if (a, b) == key:
                return w
        return None

    def edge_map(self) -> dict[tuple[int, int], float]:
        return {(i, j): w for i, j, w in self.edges}

    def relabel(self, perm: Sequence[int]) -> "WeightedGraph":
        """Return the isomorphic graph with node ``k`` renamed ``perm[k]``."""
        if sorted(perm) != list(range(self.node_count)):
            raise ValueError("perm must be a permutation of the node indices")
        labels = [""] * self.node_count
        for k, p in enumerate(perm):
            labels[p] = self.node_labels[k]
        return WeightedGraph(
            self.node_count,
            tuple((perm[i], perm[j], w) for i, j, w in self.edges),
            tuple(labels),
        )


@dataclass(frozen=True)
class PointCloud:
    points: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        pts = tuple(tuple(float(c) for c in p) for p in self.points)
        if not pts:
            raise ValueError("a point cloud needs at least one point")
        dim = len(pts[0])
        for k, p in enumerate(pts):
            if len(p) != dim:
                raise ValueError(f"point {k} has dimension {len(p)}, expected {dim}")
            if not all(math.isfinite(c) for c in p):
                raise ValueError(f"point {k} has a non-finite coordinate")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self) -> int:
        return len(self.points)


def from_distance_matrix(m, labels: Sequence[str] | None = None) -> WeightedGraph:
    """Complete graph whose edge {i, j} carries ``m[i][j]``.

    The matrix must be square, finite, nonnegative, symmetric within
    ``SYMMETRY_ATOL`` and have a zero diagonal. It is symmetrized by averaging
    before the weights are read off.
    """
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if n < 1:
        raise ValueError("distance matrix is empty")
    if labels is not None and len(labels) != n:
        raise ValueError(f"{len(labels)} labels for a {n}x{n} matrix")
    bad = np.argwhere(~np.isfinite(a))
    if bad.size:
        i, j = bad[0]
        raise ValueError(f"non-finite entry at ({i}, {j}): {a[i, j]!r}")
    bad = np.argwhere(np.abs(a - a.T) > SYMMETRY_ATOL)
    if bad.size:
        i, j = bad[0]
        raise ValueError(f"matrix is not symmetric at ({i}, {j}): {a[i, j]!r} vs {a[j, i]!r}")
    diag = np.flatnonzero(np.diag(a) != 0)
    if diag.size:
        i = diag[0]
        raise ValueError(f"nonzero diagonal entry at ({i}, {i}): {a[i, i]!r}")
    a = (a + a.T) / 2.0
    bad = np.argwhere(a < 0)
    if bad.size:
        i, j = bad[0]
        raise ValueError(f"negative entry at ({i}, {j}): {a[i, j]!r}")
    iu, ju = np.triu_indices(n, k=1)
    edges = tuple(zip(iu.tolist(), ju.tolist(), a[iu, ju].tolist()))
    return WeightedGraph(n, edges, tuple(labels) if labels is not None else ())


def from_point_cloud(pc: PointCloud | Iterable[Sequence[float]]) -> WeightedGraph:
    """Complete graph on the points, weighted by Euclidean distance."""
    if not isinstance(pc, PointCloud):
        pc = PointCloud(tuple(tuple(p) for p in pc))
    if len(pc) < 2:
        raise ValueError("need at least two points")
    x = np.asarray(pc.points, dtype=float)
    n = len(x)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            edges.append((i, j, math.dist(x[i], x[j])))
    return WeightedGraph(n, tuple(edges))


def apply_direction(g: WeightedGraph, direction: FiltrationDirection) -> WeightedGraph:
    if isinstance(direction, SubLevel):
        return g
    if not isinstance(direction, SuperLevel):
        raise TypeError(f"unknown filtration direction {direction!r}")
    top = direction.theta_max
    for i, j, w in g.edges:
        if w > top:
            raise ValueError(f"edge ({i}, {j}) weight {w!r} exceeds theta_max {top!r}")
    return WeightedGraph(g.node_count, tuple((i, j, top - w) for i, j, w in g.edges), g.node_labels)


def threshold_subgraph(g: WeightedGraph, theta: float) -> WeightedGraph:
    """Same nodes, keeping exactly the edges with ``w <= theta``."""
    if theta < 0:
        raise ValueError(f"threshold must be nonnegative, got {theta!r}")
    return WeightedGraph(g.node_count, tuple(e for e in g.edges if e[2] <= theta), g.node_labels)


def connected_components(g: WeightedGraph) -> int:
    parent = list(range(g.node_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = g.node_count
    for i, j, _ in g.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            count -= 1
    return count
