"""Filtered flag (clique) complexes of weighted graphs."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import WeightedGraph

DEFAULT_MAX_DIM = 2


@dataclass(frozen=True, order=True)
class Simplex:
    # field order doubles as the filtration sort key
    filtration_value: float
    dim: int
    vertices: tuple[int, ...]

    def faces(self) -> list[tuple[int, ...]]:
        """Vertex tuples of the codimension-1 faces (empty for a vertex)."""
        if self.dim == 0:
            return []
        return [self.vertices[:k] + self.vertices[k + 1:] for k in range(len(self.vertices))]


@dataclass(frozen=True)
class FilteredComplex:
    simplices: tuple[Simplex, ...]
    max_dim: int
    node_count: int
    node_labels: tuple[str, ...] = ()

    def index(self) -> dict[tuple[int, ...], int]:
        """Map from vertex tuple to filtration position."""
        return {s.vertices: k for k, s in enumerate(self.simplices)}

    def subcomplex(self, theta: float) -> list[Simplex]:
        return [s for s in self.simplices if s.filtration_value <= theta]

    def __len__(self) -> int:
        return len(self.simplices)


def build_flag_complex(g: WeightedGraph, max_dim: int = DEFAULT_MAX_DIM) -> FilteredComplex:
    """Flag complex of ``g`` truncated at ``max_dim``.

    Each clique is grown from a smaller clique by appending a common neighbour
    with a higher index, so every clique is produced once. A clique enters the
    filtration at the largest weight among its edges; vertices enter at 0.
    """
    if max_dim < 1:
        raise ValueError(f"max_dim must be at least 1, got {max_dim}")
    n = g.node_count
    weight = [dict() for _ in range(n)]
    for i, j, w in g.edges:
        weight[i][j] = w
        weight[j][i] = w
    upper = [frozenset(j for j in weight[i] if j > i) for i in range(n)]

    simplices = [Simplex(0.0, 0, (i,)) for i in range(n)]
    # frontier entries: (vertices, filtration value, candidate extensions)
    frontier = []
    for i, j, w in g.edges:
        simplices.append(Simplex(w, 1, (i, j)))
        frontier.append(((i, j), w, upper[i] & upper[j]))
    for dim in range(2, max_dim + 1):
        grown = []
        for verts, value, cand in frontier:
            for v in sorted(cand):
                wv = weight[v]
                f = max(value, max(wv[u] for u in verts))
                nv = verts + (v,)
                simplices.append(Simplex(f, dim, nv))
                if dim < max_dim:
                    grown.append((nv, f, cand & upper[v]))
        frontier = grown
    simplices.sort()
    return FilteredComplex(tuple(simplices), max_dim, n, g.node_labels)


def simplex_count_by_dim(k: FilteredComplex) -> list[int]:
    counts = [0] * (k.max_dim + 1)
    for s in k.simplices:
        counts[s.dim] += 1
    return counts


def validate_complex(k: FilteredComplex) -> None:
    """Raise ValueError naming the first simplex that breaks closure or order."""
    seen: dict[tuple[int, ...], Simplex] = {}
    for pos, s in enumerate(k.simplices):
        if list(s.vertices) != sorted(set(s.vertices)) or len(s.vertices) != s.dim + 1:
            raise ValueError(f"simplex {s.vertices} at position {pos} is malformed")
        if s.dim > k.max_dim:
            raise ValueError(f"simplex {s.vertices} exceeds max_dim {k.max_dim}")
        if s.vertices in seen:
            raise ValueError(f"simplex {s.vertices} appears twice")
        for face in s.faces():
            f = seen.get(face)
            if f is None:
                raise ValueError(f"simplex {s.vertices} at position {pos} appears before its face {face}")
            if f.filtration_value > s.filtration_value:
                raise ValueError(
                    f"simplex {s.vertices} has filtration {s.filtration_value} below its face {face}"
                )
        seen[s.vertices] = s

