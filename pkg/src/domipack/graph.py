"""Immutable simple undirected graphs, structural edits, generators, and
DIMACS-style text I/O.

Vertices are dense 0-based indices. Edits never mutate: they return a new
graph together with a :class:`VertexMap` describing where old vertices went
and which vertices are new.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ParseError


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Adjacency is stored as a tuple of sorted tuples, so instances are
    hashable, comparable, and safe to share between threads.
    """

    __slots__ = ("n", "_adj", "_m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={n}")
        adj: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
            m += 1
        self.n = n
        self._m = m
        self._adj = tuple(tuple(sorted(nbrs)) for nbrs in adj)

    @property
    def m(self) -> int:
        return self._m

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max(len(nbrs) for nbrs in self._adj)

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self._adj[u]

    def closed_neighborhood(self, v: int) -> frozenset[int]:
        """N[v]: the vertex together with its neighbors; size degree(v)+1."""
        self._check_vertex(v)
        return frozenset(self._adj[v]) | {v}

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, sorted lexicographically."""
        return [(u, v) for u in range(self.n) for v in self._adj[u] if u < v]

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise ValueError(f"vertex {v} out of range for n={self.n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"

    # structural edits ----------------------------------------------------

    def add_pendants(self, requests: Mapping[int, int]) -> tuple["Graph", "VertexMap"]:
        """Attach degree-1 vertices: ``requests[v] = c`` hangs c new leaves
        off v. Original vertices keep their indices; leaves are appended
        grouped by anchor in ascending anchor order."""
        for v, c in requests.items():
            self._check_vertex(v)
            if c < 0:
                raise ValueError(f"negative pendant count {c} for vertex {v}")
        new_edges = self.edges()
        forward = {v: frozenset([v]) for v in range(self.n)}
        anchors: dict[int, int] = {}
        next_idx = self.n
        for v in sorted(requests):
            for _ in range(requests[v]):
                new_edges.append((v, next_idx))
                anchors[next_idx] = v
                next_idx += 1
        g2 = Graph(next_idx, new_edges)
        vmap = VertexMap(forward=forward, created=frozenset(anchors), anchors=anchors)
        return g2, vmap

    def replace_by_clique(self, v: int, size: int) -> tuple["Graph", "VertexMap"]:
        """Replace v with a clique of `size` vertices, each adjacent to all
        former neighbors of v. Remaining vertices are packed to the front in
        their original order; the clique occupies the last `size` indices."""
        self._check_vertex(v)
        if size < 1:
            raise ValueError("clique size must be >= 1 (deletion not supported)")
        keep = [w for w in range(self.n) if w != v]
        relabel = {w: i for i, w in enumerate(keep)}
        clique = list(range(len(keep), len(keep) + size))
        edges = [
            (relabel[a], relabel[b]) for a, b in self.edges() if a != v and b != v
        ]
        edges.extend((clique[i], clique[j]) for i in range(size) for j in range(i + 1, size))
        edges.extend((relabel[w], c) for w in self._adj[v] for c in clique)
        g2 = Graph(len(keep) + size, edges)
        forward = {w: frozenset([relabel[w]]) for w in keep}
        forward[v] = frozenset(clique)
        anchors = {c: v for c in clique}
        vmap = VertexMap(forward=forward, created=frozenset(clique), anchors=anchors)
        return g2, vmap


@dataclass(frozen=True)
class VertexMap:
    """Correspondence across a structural edit.

    forward maps each input vertex to its (disjoint, nonempty) image set;
    created lists output vertices that are new; anchors points each created
    vertex back at the input vertex it was grown from.
    """

    forward: Mapping[int, frozenset[int]]
    created: frozenset[int] = frozenset()
    anchors: Mapping[int, int] = field(default_factory=dict)

    def image(self, v: int) -> frozenset[int]:
        return self.forward[v]


# small named graphs -------------------------------------------------------


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def edgeless_graph(n: int) -> Graph:
    return Graph(n)


# generators ---------------------------------------------------------------


def gen_random_tree(n: int, seed: int) -> Graph:
    """Uniform random labeled tree via a Prufer sequence; n-1 edges."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Graph(1)
    if n == 2:
        return Graph(2, [(0, 1)])
    rng = random.Random(seed)
    prufer = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for v in prufer:
        degree[v] += 1
    edges = []
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in prufer:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((u, w))
    return Graph(n, edges)


def gen_random_interval_graph(n: int, seed: int) -> Graph:
    """Intersection graph of n closed intervals with integer endpoints in
    [0, 4n]; shared endpoints count as overlap. Interval graphs are strongly
    chordal, so these feed the ordering-dependent solvers in tests."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    intervals = []
    for _ in range(n):
        a = rng.randint(0, 4 * n)
        b = rng.randint(0, 4 * n)
        intervals.append((min(a, b), max(a, b)))
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if intervals[i][0] <= intervals[j][1] and intervals[j][0] <= intervals[i][1]
    ]
    return Graph(n, edges)


def gen_random_graph(n: int, edge_probability: float, seed: int) -> Graph:
    """G(n, p) with a seeded RNG."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= edge_probability <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < edge_probability
    ]
    return Graph(n, edges)


# text format --------------------------------------------------------------
#
#   c <comment>            (also '#' comments, e.g. valuemap headers)
#   p edge <n> <m>
#   e <u> <v>              (1-based endpoints, m lines)


def parse_graph(text: str) -> Graph:
    n, edges, _ = _parse_graph_lines(text.splitlines())
    return Graph(n, edges)


def _parse_graph_lines(
    lines: Iterable[str],
) -> tuple[int, list[tuple[int, int]], list[tuple[int, list[str]]]]:
    """Shared DIMACS reader. Returns (n, edges, trailing-lines) where
    trailing lines are the non-graph lines (used by the instance format)."""
    n = None
    declared_m = 0
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    trailing: list[tuple[int, list[str]]] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("second 'p' header", line_no)
            if len(parts) != 4 or parts[1] != "edge":
                raise ParseError(f"malformed header {line!r}", line_no)
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"non-integer header fields in {line!r}", line_no)
            if n < 1:
                raise ParseError(f"vertex count must be >= 1, got {n}", line_no)
            if declared_m < 0:
                raise ParseError(f"negative edge count {declared_m}", line_no)
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge line before 'p edge' header", line_no)
            if len(parts) != 3:
                raise ParseError(f"malformed edge line {line!r}", line_no)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"non-integer endpoints in {line!r}", line_no)
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"endpoint out of range in {line!r}", line_no)
            if u == v:
                raise ParseError(f"self-loop in {line!r}", line_no)
            key = (min(u, v) - 1, max(u, v) - 1)
            if key in seen:
                raise ParseError(f"duplicate edge in {line!r}", line_no)
            seen.add(key)
            edges.append(key)
        else:
            trailing.append((line_no, parts))
    if n is None:
        raise ParseError("missing 'p edge <n> <m>' header")
    if len(edges) != declared_m:
        raise ParseError(
            f"header declares {declared_m} edges but {len(edges)} 'e' lines found"
        )
    return n, edges, trailing


def serialize_graph(g: Graph, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"
