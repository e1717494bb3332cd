"""Wasserstein and bottleneck distances between persistence diagrams.

Both diagrams are augmented with the diagonal projections of the other's
points, giving a square assignment problem. Ground distance is L-infinity in
the (birth, death) plane; a point ``(b, d)`` sits at distance ``(d - b) / 2``
from its projection ``((b + d) / 2, (b + d) / 2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from .persistence import PersistenceDiagram

FINANCE_INF_CAP = 2.0


@dataclass(frozen=True)
class MetricConfig:
    """``p`` is the Wasserstein degree (``math.inf`` for bottleneck).

    ``inf_cap`` replaces infinite deaths before matching.
    """

    p: float = 2.0
    inf_cap: float = FINANCE_INF_CAP

    def __post_init__(self) -> None:
        if not self.p > 0:
            raise ValueError(f"degree p must be positive, got {self.p!r}")
        if not math.isfinite(self.inf_cap):
            raise ValueError(f"inf_cap must be finite, got {self.inf_cap!r}")


@dataclass(frozen=True)
class MatchingProblem:
    left: np.ndarray
    right: np.ndarray
    cost: np.ndarray
    n_left_points: int
    n_right_points: int


def _capped_points(d: PersistenceDiagram, dim: int, inf_cap: float) -> np.ndarray:
    pts = d.in_dim(dim)
    for b, x in pts:
        if math.isfinite(x) and x > inf_cap:
            raise ValueError(f"inf_cap {inf_cap} is below the finite death {x}")
        if b > inf_cap:
            raise ValueError(f"inf_cap {inf_cap} is below the birth {b}")
    arr = np.array([(b, x if math.isfinite(x) else inf_cap) for b, x in pts], dtype=float)
    arr = arr.reshape(-1, 2)
    # capping can put an essential point on the diagonal; it then matches nothing
    return arr[arr[:, 1] > arr[:, 0]]


def _diag_gap(a: np.ndarray) -> np.ndarray:
    return (a[:, 1] - a[:, 0]) / 2.0


def matching_problem(d1: PersistenceDiagram, d2: PersistenceDiagram, dim: int, inf_cap: float) -> MatchingProblem:
    """Unpowered L-infinity cost matrix of the diagonally augmented bijection problem."""
    a = _capped_points(d1, dim, inf_cap)
    b = _capped_points(d2, dim, inf_cap)
    n, m = len(a), len(b)
    mid_a = (a[:, 0] + a[:, 1]) / 2.0
    mid_b = (b[:, 0] + b[:, 1]) / 2.0
    left = np.vstack([a, np.column_stack([mid_b, mid_b])])
    right = np.vstack([b, np.column_stack([mid_a, mid_a])])
    cost = np.zeros((n + m, n + m))
    if n and m:
        cost[:n, :m] = np.maximum(np.abs(a[:, None, 0] - b[None, :, 0]), np.abs(a[:, None, 1] - b[None, :, 1]))
    # point -> any diagonal slot costs its own gap; diagonal -> diagonal is free
    cost[:n, m:] = _diag_gap(a)[:, None]
    cost[n:, :m] = _diag_gap(b)[None, :]
    return MatchingProblem(left, right, cost, n, m)


def hungarian(cost: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimum-cost perfect assignment on a square matrix.

    Shortest augmenting path form of the Hungarian method with row/column
    potentials, O(n^3). Returns ``(col_of_row, total_cost)``.
    """
    c = np.asarray(cost, dtype=float)
    n = c.shape[0]
    if c.ndim != 2 or c.shape[1] != n:
        raise ValueError(f"cost matrix must be square, got shape {c.shape}")
    if n == 0:
        return np.zeros(0, dtype=int), 0.0
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    row_of_col = np.zeros(n + 1, dtype=int)  # 1-based; 0 = free
    way = np.zeros(n + 1, dtype=int)
    for i in range(1, n + 1):
        row_of_col[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = row_of_col[j0]
            free = ~used[1:]
            cur = c[i0 - 1] - u[i0] - v[1:]
            better = free & (cur < minv[1:])
            minv[1:][better] = cur[better]
            way[1:][better] = j0
            masked = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(masked)) + 1
            delta = masked[j1 - 1]
            u[row_of_col[used]] += delta
            v[used] -= delta
            minv[1:][free] -= delta
            j0 = j1
            if row_of_col[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            row_of_col[j0] = row_of_col[j1]
            j0 = j1
    col_of_row = np.empty(n, dtype=int)
    for j in range(1, n + 1):
        col_of_row[row_of_col[j] - 1] = j - 1
    return col_of_row, float(c[np.arange(n), col_of_row].sum())


def wasserstein(d1: PersistenceDiagram, d2: PersistenceDiagram, dim: int = 0, cfg: MetricConfig = MetricConfig()) -> float:
    if math.isinf(cfg.p):
        return bottleneck(d1, d2, dim, cfg)
    prob = matching_problem(d1, d2, dim, cfg.inf_cap)
    if prob.cost.size == 0:
        return 0.0
    _, total = hungarian(prob.cost ** cfg.p)
    return float(max(total, 0.0) ** (1.0 / cfg.p))


def _has_perfect_matching(allowed: np.ndarray) -> bool:
    n = allowed.shape[0]
    adj = [np.flatnonzero(row).tolist() for row in allowed]
    match_col = [-1] * n

    def augment(r: int, seen: list[bool]) -> bool:
        for col in adj[r]:
            if not seen[col]:
                seen[col] = True
                if match_col[col] < 0 or augment(match_col[col], seen):
                    match_col[col] = r
                    return True
        return False

    for r in range(n):
        if not augment(r, [False] * n):
            return False
    return True


def bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram, dim: int = 0, cfg: MetricConfig = MetricConfig()) -> float:
    """Smallest r admitting a perfect matching that uses only pairs of cost <= r."""
    prob = matching_problem(d1, d2, dim, cfg.inf_cap)
    if prob.cost.size == 0:
        return 0.0
    candidates = np.unique(prob.cost)
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_perfect_matching(prob.cost <= candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def wasserstein_bruteforce(
    d1: PersistenceDiagram,
    d2: PersistenceDiagram,
    dim: int = 0,
    cfg: MetricConfig = MetricConfig(),
    max_points: int = 10,
) -> float:
    """Exact distance by enumerating every augmented bijection.

    Diagonal slots are interchangeable and cost nothing among themselves, so a
    bijection is determined by which left points go to which right points; the
    rest go to the diagonal. Every such partial injection is enumerated.
    """
    a = _capped_points(d1, dim, cfg.inf_cap)
    b = _capped_points(d2, dim, cfg.inf_cap)
    n, m = len(a), len(b)
    if n + m > max_points:
        raise ValueError(f"{n + m} off-diagonal points exceed the brute-force limit {max_points}")
    gap_a = [(x - y) / 2.0 for y, x in a]
    gap_b = [(x - y) / 2.0 for y, x in b]

    def pair(i: int, j: int) -> float:
        return max(abs(a[i][0] - b[j][0]), abs(a[i][1] - b[j][1]))

    bottleneck_mode = math.isinf(cfg.p)
    best = math.inf
    for k in range(min(n, m) + 1):
        for rows in combinations(range(n), k):
            rest_a = [gap_a[i] for i in range(n) if i not in rows]
            for cols in permutations(range(m), k):
                rest_b = [gap_b[j] for j in range(m) if j not in cols]
                terms = [pair(i, j) for i, j in zip(rows, cols)] + rest_a + rest_b
                if bottleneck_mode:
                    val = max(terms, default=0.0)
                else:
                    val = sum(t ** cfg.p for t in terms)
                best = min(best, val)
    if bottleneck_mode:
        return float(best)
    return float(best ** (1.0 / cfg.p))
