"""Graphs, certificate and identifier assignments, distances and views.

Vertices are the dense integers ``0..n-1``. Identifiers, when a model needs
them, are kept in a separate :class:`IdentifierAssignment` so that vertex
indices never leak into anonymous verification.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

INF = math.inf


def _norm_edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Graph:
    """Finite simple undirected graph with optional binary vertex labels.

    ``meta`` is free-form metadata (family name, parameters, named vertices)
    and takes no part in equality.
    """

    n: int
    edges: frozenset
    labels: tuple | None = None
    meta: Mapping = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for e in self.edges:
            a, b = e
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge {e} has an endpoint outside 0..{self.n - 1}")
            norm.add(_norm_edge(a, b))
        object.__setattr__(self, "edges", frozenset(norm))
        if self.labels is not None:
            labels = tuple(int(x) for x in self.labels)
            if len(labels) != self.n:
                raise ValueError("labels must be total over vertices")
            if any(x not in (0, 1) for x in labels):
                raise ValueError("labels must be 0 or 1")
            object.__setattr__(self, "labels", labels)
        adj = [set() for _ in range(self.n)]
        for a, b in norm:
            adj[a].add(b)
            adj[b].add(a)
        object.__setattr__(self, "_adj", tuple(frozenset(s) for s in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, labels=None, meta=None) -> "Graph":
        edges = list(edges)
        seen = set()
        for a, b in edges:
            e = _norm_edge(a, b)
            if e in seen:
                raise ValueError(f"parallel edge {e}")
            seen.add(e)
        return cls(n, frozenset(seen), None if labels is None else tuple(labels), dict(meta or {}))

    def neighbors(self, u: int) -> frozenset:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._adj[a]

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def labeled_set(self) -> frozenset:
        if self.labels is None:
            return frozenset()
        return frozenset(v for v, x in enumerate(self.labels) if x)

    def with_labels(self, labels) -> "Graph":
        return Graph(self.n, self.edges, tuple(labels), dict(self.meta))

    def with_meta(self, **extra) -> "Graph":
        meta = dict(self.meta)
        meta.update(extra)
        return Graph(self.n, self.edges, self.labels, meta)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the isomorphic copy where vertex ``v`` becomes ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("relabel needs a permutation of 0..n-1")
        edges = frozenset(_norm_edge(perm[a], perm[b]) for a, b in self.edges)
        labels = None
        if self.labels is not None:
            new = [0] * self.n
            for v, x in enumerate(self.labels):
                new[perm[v]] = x
            labels = tuple(new)
        return Graph(self.n, edges, labels, {})

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, reindexed; also returns new-index -> old-index."""
        old = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(old)}
        edges = [(pos[a], pos[b]) for a, b in self.edges if a in pos and b in pos]
        labels = None if self.labels is None else [self.labels[v] for v in old]
        return Graph.from_edges(len(old), edges, labels), old


@dataclass(frozen=True)
class CertificateAssignment:
    """Total map vertex -> symbol in ``{0..alphabet_size-1}``."""

    alphabet_size: int
    symbols: tuple

    def __post_init__(self):
        if self.alphabet_size < 1:
            raise ValueError("alphabet size must be at least 1")
        symbols = tuple(int(s) for s in self.symbols)
        for v, s in enumerate(symbols):
            if not 0 <= s < self.alphabet_size:
                raise ValueError(f"symbol {s} at vertex {v} outside alphabet of size {self.alphabet_size}")
        object.__setattr__(self, "symbols", symbols)

    def __getitem__(self, v: int) -> int:
        return self.symbols[v]

    def __len__(self) -> int:
        return len(self.symbols)

    def used(self) -> int:
        return len(set(self.symbols))


@dataclass(frozen=True)
class IdentifierAssignment:
    """Injective map vertex -> positive integer."""

    ids: tuple

    def __post_init__(self):
        ids = tuple(int(x) for x in self.ids)
        if any(x <= 0 for x in ids):
            raise ValueError("identifiers must be positive")
        if len(set(ids)) != len(ids):
            raise ValueError("identifiers must be pairwise distinct")
        object.__setattr__(self, "ids", ids)

    def __getitem__(self, v: int) -> int:
        return self.ids[v]

    def __len__(self) -> int:
        return len(self.ids)


def _check_vertex(G: Graph, u: int):
    if not isinstance(u, int) or not 0 <= u < G.n:
        raise ValueError(f"invalid vertex {u!r} for a graph on {G.n} vertices")


def bfs_distances(G: Graph, sources, limit=None) -> dict:
    """Multi-source BFS; returns vertex -> distance for reached vertices."""
    dist = {}
    q = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            q.append(s)
    while q:
        x = q.popleft()
        dx = dist[x]
        if limit is not None and dx >= limit:
            continue
        for y in G.neighbors(x):
            if y not in dist:
                dist[y] = dx + 1
                q.append(y)
    return dist


def distance(G: Graph, u: int, v: int):
    """Hop distance between ``u`` and ``v``; ``math.inf`` when disconnected."""
    _check_vertex(G, u)
    _check_vertex(G, v)
    if u == v:
        return 0
    return bfs_distances(G, [u]).get(v, INF)


def ball(G: Graph, u: int, r: int) -> frozenset:
    _check_vertex(G, u)
    if r < 0:
        raise ValueError("radius must be non-negative")
    return frozenset(bfs_distances(G, [u], limit=r))


def layer(G: Graph, u: int, i: int) -> frozenset:
    """Vertices at distance exactly ``i`` from ``u``."""
    _check_vertex(G, u)
    if i < 0:
        raise ValueError("layer index must be non-negative")
    return frozenset(v for v, dv in bfs_distances(G, [u], limit=i).items() if dv == i)


def eccentricity(G: Graph, u: int):
    dist = bfs_distances(G, [u])
    if len(dist) < G.n:
        return INF
    return max(dist.values())


@dataclass(frozen=True)
class View:
    """Everything vertex ``root`` sees at distance ``radius``.

    ``edges`` holds exactly the host edges with an endpoint in
    ``B(root, radius - 1)``; edges joining two vertices at distance exactly
    ``radius`` are absent. ``dist`` maps each visible vertex to its distance
    from the root (equal to the host distance).
    """

    root: int
    radius: int
    dist: Mapping
    edges: frozenset
    certs: Mapping
    labels: Mapping | None = None
    ids: Mapping | None = None

    @property
    def vertices(self):
        return self.dist.keys()

    def __len__(self) -> int:
        return len(self.dist)

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.dist}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def neighbors(self, v: int) -> set:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def layer(self, i: int) -> list:
        return sorted(v for v, dv in self.dist.items() if dv == i)

    def labeled(self) -> list:
        if self.labels is None:
            return []
        return sorted(v for v, x in self.labels.items() if x)

    def sees_whole_component(self) -> bool:
        """True when no vertex lies at distance ``radius``: nothing is hidden."""
        return all(dv < self.radius for dv in self.dist.values())


def extract_view(G: Graph, c, ids, u: int, d: int) -> View:
    """View of ``u`` at distance ``d`` under certificates ``c``.

    ``c`` may be a :class:`CertificateAssignment` or any indexable sequence
    of symbols; ``ids`` is an :class:`IdentifierAssignment` or ``None``.
    """
    _check_vertex(G, u)
    if d < 1:
        raise ValueError("view radius must be at least 1")
    dist = bfs_distances(G, [u], limit=d)
    edges = set()
    for x, dx in dist.items():
        if dx <= d - 1:
            for y in G.neighbors(x):
                edges.add(_norm_edge(x, y))
    symbols = c.symbols if isinstance(c, CertificateAssignment) else c
    certs = {v: symbols[v] for v in dist}
    labels = None if G.labels is None else {v: G.labels[v] for v in dist}
    idmap = None if ids is None else {v: ids[v] for v in dist}
    return View(u, d, dist, frozenset(edges), certs, labels, idmap)
