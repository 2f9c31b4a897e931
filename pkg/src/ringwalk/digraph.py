"""Rearrangement digraph over unblocked configurations, plus graph-side oracles.

Vertices are configurations; there is an edge ``X -> X + delta_i`` whenever
the target is again a configuration (all gaps >= 1).  Breadth-first distances
on this bounded graph give an independent check of the closed-form ``phi``,
and the reversal map is checked directly as an isomorphism between the graph
and its converse.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidStateError, StateSpaceTooLarge
from .rearrangement import delta_vector
from .state_space import DEFAULT_MAX_STATES, count_configurations, iter_configurations

UNREACHABLE = -1


@dataclass(frozen=True)
class RearrangementDigraph:
    k: int
    n: int
    vertices: tuple[tuple[int, ...], ...]
    # adjacency[u] holds (v, i): an edge u -> v realised by generator i (1-based)
    adjacency: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    def index(self, config: Sequence[int]) -> int:
        try:
            return self._index[tuple(config)]
        except KeyError:
            raise InvalidStateError(f"{tuple(config)} is not a vertex of the (k={self.k}, n={self.n}) digraph") from None

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, out in enumerate(self.adjacency) for v, _ in out]

    def has_edge(self, u: int, v: int) -> bool:
        return any(w == v for w, _ in self.adjacency[u])


def build_digraph(k: int, n: int, max_vertices: int | None = DEFAULT_MAX_STATES) -> RearrangementDigraph:
    count = count_configurations(k, n)
    if max_vertices is not None and count > max_vertices:
        raise StateSpaceTooLarge(f"(k={k}, n={n}) has {count} configurations, above the cap of {max_vertices}")
    vertices = tuple(iter_configurations(k, n))
    index = {v: i for i, v in enumerate(vertices)}
    gens = [delta_vector(i, k) for i in range(1, k + 1)]
    adjacency = []
    for x in vertices:
        out = []
        for i, d in enumerate(gens, start=1):
            if not any(d):
                continue  # k == 1: the generator is zero, no self-loops
            y = tuple(a + b for a, b in zip(x, d))
            if min(y) >= 1:
                out.append((index[y], i))
        adjacency.append(tuple(out))
    return RearrangementDigraph(k, n, vertices, tuple(adjacency))


def bfs_from(g: RearrangementDigraph, source: int) -> np.ndarray:
    dist = np.full(len(g.vertices), UNREACHABLE, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v, _ in g.adjacency[u]:
            if dist[v] == UNREACHABLE:
                dist[v] = du
                queue.append(v)
    return dist


def bfs_distance(g: RearrangementDigraph, x: Sequence[int], y: Sequence[int]) -> int | None:
    """Length of a shortest directed path from x to y, or None if unreachable."""
    d = int(bfs_from(g, g.index(x))[g.index(y)])
    return None if d == UNREACHABLE else d


def all_pairs_distances(g: RearrangementDigraph) -> np.ndarray:
    return np.vstack([bfs_from(g, u) for u in range(len(g.vertices))]) if g.vertices else np.zeros((0, 0), int)


@dataclass(frozen=True)
class SelfConverseResult:
    ok: bool
    # vertex index -> image index under reversal; present when ok
    mapping: tuple[int, ...] | None = None
    # first offending edge (u, v) of g whose image (phi(v), phi(u)) is missing
    violation: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_self_converse(g: RearrangementDigraph) -> SelfConverseResult:
    """Check that reversal maps every edge (u, v) to an edge (rev v, rev u) and back."""
    mapping = tuple(g.index(v[::-1]) for v in g.vertices)
    edges = set(g.edges())
    for u, v in sorted(edges):
        if (mapping[v], mapping[u]) not in edges:
            return SelfConverseResult(False, None, (g.vertices[u], g.vertices[v]))
    # the map is an involution on vertices, so the edge map is onto as well
    return SelfConverseResult(True, mapping, None)


def is_strongly_connected(g: RearrangementDigraph) -> bool:
    if not g.vertices:
        return True
    if (bfs_from(g, 0) == UNREACHABLE).any():
        return False
    reverse: list[list[int]] = [[] for _ in g.vertices]
    for u, v in g.edges():
        reverse[v].append(u)
    rg = RearrangementDigraph(g.k, g.n, g.vertices, tuple(tuple((w, 0) for w in r) for r in reverse))
    return not (bfs_from(rg, 0) == UNREACHABLE).any()


def to_dot(g: RearrangementDigraph) -> str:
    def name(v: tuple[int, ...]) -> str:
        return '"(' + ",".join(map(str, v)) + ')"'

    lines = [f"digraph rearrangement_k{g.k}_n{g.n} {{"]
    for v in g.vertices:
        lines.append(f"  {name(v)};")
    for u, out in enumerate(g.adjacency):
        for v, i in out:
            lines.append(f"  {name(g.vertices[u])} -> {name(g.vertices[v])} [label=\"{i}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
