"""Persistent homology over Z/2 by boundary-matrix column reduction.

Columns of the boundary matrix are Python ints used as bit sets: bit ``r`` is
set when the simplex at filtration position ``r`` is a face. Adding columns
over Z/2 is then a single XOR, and the pivot ("low") of a column is its
highest set bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complex import FilteredComplex, validate_complex

INF = math.inf


@dataclass(frozen=True, order=True)
class PersistencePoint:
    dim: int
    birth: float
    death: float
    # provenance only; ignored by equality and ordering
    creator: tuple[int, ...] = field(default=(), compare=False)
    destroyer: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.death < self.birth:
            raise ValueError(f"death {self.death} precedes birth {self.birth}")

    @property
    def persistence(self) -> float:
        return self.death - self.birth

    @property
    def is_essential(self) -> bool:
        return math.isinf(self.death)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of persistence points for homology dimensions ``0..max_dim-1``.

    Points are kept sorted, so ``==`` is multiset equality. The diagonal is
    implicit and never stored.
    """

    points: tuple[PersistencePoint, ...] = ()
    max_dim: int = 2

    def __post_init__(self) -> None:
        if self.max_dim < 1:
            raise ValueError(f"max_dim must be at least 1, got {self.max_dim}")
        for p in self.points:
            if not 0 <= p.dim < self.max_dim:
                raise ValueError(f"point {p} lies outside dimensions 0..{self.max_dim - 1}")
        object.__setattr__(self, "points", tuple(sorted(self.points)))

    @classmethod
    def from_pairs(cls, pairs: dict[int, Iterable[Sequence[float]]], max_dim: int | None = None):
        """Build from ``{dim: [(birth, death), ...]}``."""
        if max_dim is None:
            max_dim = max([d + 1 for d in pairs], default=1)
        pts = [PersistencePoint(int(d), float(b), float(x)) for d, ps in pairs.items() for b, x in ps]
        return cls(tuple(pts), max_dim)

    def in_dim(self, dim: int) -> list[tuple[float, float]]:
        return [(p.birth, p.death) for p in self.points if p.dim == dim]

    def restrict(self, dim: int) -> "PersistenceDiagram":
        return PersistenceDiagram(tuple(p for p in self.points if p.dim == dim), self.max_dim)

    def essential_count(self, dim: int = 0) -> int:
        return sum(1 for p in self.points if p.dim == dim and p.is_essential)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class BettiProfile:
    theta: float
    betti: tuple[int, ...]


def _boundary_columns(k: FilteredComplex) -> list[int]:
    index = k.index()
    cols = []
    for s in k.simplices:
        col = 0
        for face in s.faces():
            col |= 1 << index[face]
        cols.append(col)
    return cols


def compute_persistence(k: FilteredComplex, validate: bool = True) -> PersistenceDiagram:
    """Persistence diagram of ``k`` in dimensions ``0..k.max_dim-1``.

    Columns are reduced top dimension first; the pivot row of every nonzero
    reduced column is a creator, so its own column is skipped when its
    dimension comes up (clearing). Pairs with zero persistence are dropped.
    """
    if validate:
        validate_complex(k)
    simplices = k.simplices
    cols = _boundary_columns(k)
    by_dim: list[list[int]] = [[] for _ in range(k.max_dim + 1)]
    for pos, s in enumerate(simplices):
        by_dim[s.dim].append(pos)

    pivot_owner: dict[int, int] = {}
    reduced: dict[int, int] = {}
    cleared: set[int] = set()
    for dim in range(k.max_dim, 0, -1):
        for pos in by_dim[dim]:
            if pos in cleared:
                continue
            col = cols[pos]
            while col:
                low = col.bit_length() - 1
                owner = pivot_owner.get(low)
                if owner is None:
                    break
                col ^= reduced[owner]
            if col:
                pivot_owner[low] = pos
                reduced[pos] = col
                cleared.add(low)

    points = []
    for low, pos in pivot_owner.items():
        birth, death = simplices[low].filtration_value, simplices[pos].filtration_value
        if birth < death:
            points.append(
                PersistencePoint(simplices[low].dim, birth, death, simplices[low].vertices, simplices[pos].vertices)
            )
    for pos, s in enumerate(simplices):
        if s.dim < k.max_dim and pos not in reduced and pos not in pivot_owner:
            points.append(PersistencePoint(s.dim, s.filtration_value, INF, s.vertices))
    return PersistenceDiagram(tuple(points), k.max_dim)


def betti_at(d: PersistenceDiagram, theta: float) -> BettiProfile:
    if theta < 0:
        raise ValueError(f"threshold must be nonnegative, got {theta!r}")
    betti = [0] * d.max_dim
    for p in d.points:
        if p.birth <= theta < p.death:
            betti[p.dim] += 1
    return BettiProfile(theta, tuple(betti))


def gf2_rank(rows: list[int]) -> int:
    """Rank over Z/2 of bit-set rows, by Gaussian elimination on leading bits."""
    basis: dict[int, int] = {}
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            if lead not in basis:
                basis[lead] = row
                break
            row ^= basis[lead]
    return len(basis)


def betti_bruteforce(k: FilteredComplex, theta: float) -> BettiProfile:
    """Betti numbers of ``{s : filt(s) <= theta}`` from boundary ranks.

    Independent of the persistence pairing: uses ``b_i = n_i - rank d_i -
    rank d_{i+1}`` on the sub-complex alone, ignoring filtration order.
    """
    if theta < 0:
        raise ValueError(f"threshold must be nonnegative, got {theta!r}")
    groups: list[list[tuple[int, ...]]] = [[] for _ in range(k.max_dim + 1)]
    for s in k.simplices:
        if s.filtration_value <= theta:
            groups[s.dim].append(s.vertices)
    local = [{v: r for r, v in enumerate(g)} for g in groups]
    ranks = [0] * (k.max_dim + 2)
    for dim in range(1, k.max_dim + 1):
        rows = []
        for verts in groups[dim]:
            row = 0
            for drop in range(len(verts)):
                row |= 1 << local[dim - 1][verts[:drop] + verts[drop + 1:]]
            rows.append(row)
        ranks[dim] = gf2_rank(rows)
    betti = tuple(len(groups[i]) - ranks[i] - ranks[i + 1] for i in range(k.max_dim))
    return BettiProfile(theta, betti)
