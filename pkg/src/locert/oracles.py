"""Exact deciders for the certified properties.

Every scheme verdict in the test and acceptance suites is compared against
one of these. They either answer exactly or raise :class:`CapacityError`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import networkx as nx

from locert.errors import CapacityError, PreconditionError
from locert.graph import Graph, bfs_distances

MAX_COLORING_VERTICES = 400
MAX_BALL_VERTICES = 256
MAX_CONTRACTED_EXACT = 24
MAX_MATCHING_COUNT_VERTICES = 16


@dataclass(frozen=True)
class ColorPartition:
    k: int
    classes: tuple  # tuple of frozensets, ordered by least member

    @classmethod
    def from_coloring(cls, k, coloring: dict):
        groups = {}
        for v in sorted(coloring):
            groups.setdefault(coloring[v], set()).add(v)
        classes = sorted((frozenset(g) for g in groups.values()), key=min)
        return cls(k, tuple(classes))

    def class_of(self, v):
        for c in self.classes:
            if v in c:
                return c
        raise KeyError(v)

    def as_coloring(self) -> dict:
        return {v: i for i, c in enumerate(self.classes) for v in c}


@dataclass(frozen=True)
class Matching:
    edges: frozenset
    perfect: bool

    @classmethod
    def of(cls, G: Graph, edges):
        edges = frozenset((min(a, b), max(a, b)) for a, b in edges)
        seen = set()
        for a, b in edges:
            if a in seen or b in seen:
                raise ValueError("matching edges must be vertex-disjoint")
            seen.update((a, b))
        return cls(edges, len(seen) == G.n)

    def partner(self) -> dict:
        out = {}
        for a, b in self.edges:
            out[a], out[b] = b, a
        return out


# -- colouring ---------------------------------------------------------------


def _dsatur_search(n, adj, k, order_hint=None):
    """Backtracking k-colouring with saturation ordering and colour symmetry breaking."""
    colour = [-1] * n
    forbid = [[0] * k for _ in range(n)]  # forbid[v][c] = number of neighbours coloured c
    sat = [0] * n
    deg = [len(adj[v]) for v in range(n)]
    hint = order_hint or list(range(n))
    rank = {v: i for i, v in enumerate(hint)}

    def assign(v, c):
        colour[v] = c
        for w in adj[v]:
            if forbid[w][c] == 0:
                sat[w] += 1
            forbid[w][c] += 1

    def unassign(v, c):
        colour[v] = -1
        for w in adj[v]:
            forbid[w][c] -= 1
            if forbid[w][c] == 0:
                sat[w] -= 1

    def pick():
        best, key = -1, None
        for v in range(n):
            if colour[v] < 0:
                kv = (sat[v], deg[v], -rank[v])
                if key is None or kv > key:
                    best, key = v, kv
        return best

    def rec(placed, used):
        if placed == n:
            return True
        v = pick()
        for c in range(min(used + 1, k)):
            if forbid[v][c] == 0:
                assign(v, c)
                if rec(placed + 1, max(used, c + 1)):
                    return True
                unassign(v, c)
        return False

    if rec(0, 0):
        return list(colour)
    return None


def chromatic_feasible(G: Graph, k: int, cap: int = MAX_COLORING_VERTICES):
    """A proper k-colouring as a :class:`ColorPartition`, or ``None``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if G.n > cap:
        raise CapacityError(f"exact colouring capped at {cap} vertices, got {G.n}")
    if G.n == 0:
        return ColorPartition(k, ())
    adj = [G.neighbors(v) for v in G.vertices]
    colour = _dsatur_search(G.n, adj, k)
    if colour is None:
        return None
    return ColorPartition.from_coloring(k, dict(enumerate(colour)))


def is_proper_coloring(G: Graph, colouring) -> bool:
    return all(colouring[a] != colouring[b] for a, b in G.edges)


class BallStatus(enum.Enum):
    UNIQUE = "unique"
    MULTIPLE = "multiple"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class BallPartition:
    status: BallStatus
    partition: ColorPartition | None = None


def _partitions(vertices, edges, k, order, limit):
    """Canonical colourings (colours in order of first appearance along ``order``).

    Each partition of ``vertices`` into at most ``k`` independent sets is
    produced exactly once; stops after ``limit`` of them.
    """
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    back = [[] for _ in range(n)]  # earlier neighbours, by position
    for a, b in edges:
        pa, pb = pos[a], pos[b]
        if pa < pb:
            back[pb].append(pa)
        else:
            back[pa].append(pb)
    colour = [-1] * n
    found = []

    def rec(i, used):
        if i == n:
            found.append(tuple(colour))
            return len(found) >= limit
        banned = {colour[j] for j in back[i]}
        for c in range(min(used + 1, k)):
            if c not in banned:
                colour[i] = c
                if rec(i + 1, max(used, c + 1)):
                    return True
        colour[i] = -1
        return False

    rec(0, 0)
    return [{order[i]: c for i, c in enumerate(col)} for col in found]


@lru_cache(maxsize=65536)
def _cached_partition(vertices: frozenset, edges: frozenset, k: int, center):
    adj = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    # BFS order from the centre keeps forced colours early.
    order, seen = [], set()
    starts = [center] + sorted(vertices - {center}) if center in vertices else sorted(vertices)
    for s in starts:
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in sorted(adj[x]):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    found = _partitions(vertices, edges, k, order, limit=2)
    if not found:
        return BallPartition(BallStatus.INFEASIBLE)
    if len(found) > 1:
        return BallPartition(BallStatus.MULTIPLE)
    return BallPartition(BallStatus.UNIQUE, ColorPartition.from_coloring(k, found[0]))


def partition_status(vertices, edges, k: int, center=None, cap: int = MAX_BALL_VERTICES) -> BallPartition:
    """Unique / Multiple / Infeasible for the graph ``(vertices, edges)``."""
    vertices = frozenset(vertices)
    if len(vertices) > cap:
        raise CapacityError(f"ball colouring capped at {cap} vertices, got {len(vertices)}")
    return _cached_partition(vertices, frozenset(edges), k, center)


def ball_color_partition(G: Graph, u: int, r: int, k: int, cap: int = MAX_BALL_VERTICES) -> BallPartition:
    """Colourings of the subgraph induced by ``B(u, r)``, up to renaming colours."""
    verts = frozenset(bfs_distances(G, [u], limit=r))
    edges = [(a, b) for a, b in G.edges if a in verts and b in verts]
    return partition_status(verts, edges, k, center=u, cap=cap)


def uniquely_colorable_at_distance(G: Graph, k: int, d: int, cap: int = MAX_BALL_VERTICES) -> bool:
    return all(ball_color_partition(G, u, d, k, cap).status is BallStatus.UNIQUE for u in G.vertices)


# -- domination ---------------------------------------------------------------


def is_dominating_at_distance(G: Graph, t: int) -> bool:
    if G.labels is None:
        raise PreconditionError("domination needs a labeled graph")
    S = G.labeled_set
    if G.n == 0:
        return True
    if not S:
        return False
    dist = bfs_distances(G, S, limit=t)
    return len(dist) == G.n


def distances_to_labeled(G: Graph) -> dict:
    if G.labels is None:
        raise PreconditionError("domination needs a labeled graph")
    return bfs_distances(G, G.labeled_set)


# -- matchings ----------------------------------------------------------------


def find_perfect_matching(G: Graph):
    """A perfect matching of ``G`` or ``None`` (blossom algorithm via networkx)."""
    if G.n % 2:
        return None
    H = nx.Graph()
    H.add_nodes_from(G.vertices)
    H.add_edges_from(G.edge_list())
    mate = nx.max_weight_matching(H, maxcardinality=True)
    if 2 * len(mate) != G.n:
        return None
    return Matching.of(G, mate)


def _matching_leaves(G: Graph, cap, limit=None):
    if G.n > cap:
        raise CapacityError(f"exhaustive matching enumeration capped at {cap} vertices, got {G.n}")
    matched = [False] * G.n
    current = []

    def rec():
        try:
            v = matched.index(False)
        except ValueError:
            yield list(current)
            return
        matched[v] = True
        for w in sorted(G.neighbors(v)):
            if not matched[w]:
                matched[w] = True
                current.append((v, w))
                yield from rec()
                current.pop()
                matched[w] = False
        matched[v] = False

    yield from rec()


def count_perfect_matchings(G: Graph, cap: int = MAX_MATCHING_COUNT_VERTICES) -> int:
    return sum(1 for _ in _matching_leaves(G, cap))


def all_perfect_matchings(G: Graph, cap: int = MAX_MATCHING_COUNT_VERTICES):
    return [Matching.of(G, m) for m in _matching_leaves(G, cap)]


def is_matching_coloring(G: Graph, phi):
    """Matching whose edges are exactly the monochromatic ones, if it is perfect."""
    edges = []
    for v in G.vertices:
        same = [w for w in G.neighbors(v) if phi[w] == phi[v]]
        if len(same) != 1:
            return None
        if v < same[0]:
            edges.append((v, same[0]))
    return Matching.of(G, edges)


def _require_perfect(G: Graph, M: Matching):
    if not M.perfect or any(e not in G.edges for e in M.edges):
        raise PreconditionError("a perfect matching of G is required")


def greedy_matching_coloring(G: Graph, M: Matching) -> list:
    """Colour matched edges in lexicographic order with the least free colour.

    An edge ``(u, v)`` of ``M`` must avoid every colour already given to a
    matched edge touching ``N(u) | N(v)``; at most ``2*Delta - 2`` are barred.
    """
    _require_perfect(G, M)
    partner = M.partner()
    colour = {}
    for a, b in sorted(M.edges):
        barred = set()
        for x in (a, b):
            for y in G.neighbors(x):
                if y not in (a, b) and y in colour:
                    barred.add(colour[y])
        c = 0
        while c in barred:
            c += 1
        colour[a] = colour[b] = c
        del partner[a], partner[b]
    return [colour[v] for v in G.vertices]


def contract_matching(G: Graph, M: Matching):
    """Graph with one vertex per edge of ``M``; returns (H, vertex -> H-vertex)."""
    _require_perfect(G, M)
    owner = {}
    for i, (a, b) in enumerate(sorted(M.edges)):
        owner[a] = owner[b] = i
    edges = {(min(owner[a], owner[b]), max(owner[a], owner[b]))
             for a, b in G.edges if owner[a] != owner[b]}
    return Graph.from_edges(len(M.edges), edges), owner


def degeneracy_order(G: Graph) -> list:
    """Smallest-last order: repeatedly remove a minimum-degree vertex."""
    deg = {v: G.degree(v) for v in G.vertices}
    removed, order = set(), []
    while len(order) < G.n:
        v = min((x for x in G.vertices if x not in removed), key=lambda x: (deg[x], x))
        order.append(v)
        removed.add(v)
        for w in G.neighbors(v):
            if w not in removed:
                deg[w] -= 1
    order.reverse()
    return order


def degeneracy_coloring(G: Graph) -> list:
    colour = [-1] * G.n
    for v in degeneracy_order(G):
        used = {colour[w] for w in G.neighbors(v)}
        c = 0
        while c in used:
            c += 1
        colour[v] = c
    return colour


def contraction_matching_coloring(G: Graph, M: Matching, backend: str = "exact", k: int = 4):
    """k-matching colouring obtained by colouring ``G / M``, or ``None``."""
    H, owner = contract_matching(G, M)
    if backend == "exact":
        part = chromatic_feasible(H, k, cap=MAX_CONTRACTED_EXACT)
        if part is None:
            return None
        col = part.as_coloring()
        hcol = [col[x] for x in H.vertices]
    elif backend == "degeneracy":
        hcol = degeneracy_coloring(H)
        if H.n and max(hcol) + 1 > k:
            return None
    else:
        raise ValueError(f"unknown colouring backend {backend!r}")
    return [hcol[owner[v]] for v in G.vertices]
