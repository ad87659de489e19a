"""Generators for the gadget graphs used in the lower and upper bounds.

Every generator records its parameters in ``Graph.meta["family"]`` and the
named vertices (parts, cliques, copies) the attacks need to address.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from locert.graph import CertificateAssignment, Graph, IdentifierAssignment


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{1..r}``, stored in one-line notation ``images``."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, r: int) -> "Permutation":
        return cls(tuple(range(1, r + 1)))

    @classmethod
    def all(cls, r: int):
        return [cls(p) for p in itertools.permutations(range(1, r + 1))]

    @classmethod
    def from_cycles(cls, r: int, *cycles) -> "Permutation":
        images = list(range(1, r + 1))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b
        return cls(tuple(images))

    @property
    def r(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __str__(self) -> str:
        return "-".join(map(str, self.images))


def _meta(name, **params):
    return {"family": {"name": name, **params}}


def complete_k_partite(k: int, m: int) -> Graph:
    """Complete k-partite graph with parts ``V_1..V_k`` of size ``m``.

    Part ``i`` (1-based) holds vertices ``(i-1)*m .. i*m-1``. The metadata
    flag ``crossing_ready`` records whether ``m >= max(k, 3)``, the size the
    crossing argument needs.
    """
    if k < 2:
        raise ValueError("complete_k_partite needs k >= 2")
    if m < 1:
        raise ValueError("part size must be positive")
    parts = [list(range(i * m, (i + 1) * m)) for i in range(k)]
    edges = [
        (a, b)
        for i, j in itertools.combinations(range(k), 2)
        for a in parts[i]
        for b in parts[j]
    ]
    meta = _meta("complete_k_partite", k=k, m=m)
    meta["parts"] = parts
    meta["crossing_ready"] = m >= max(k, 3)
    return Graph.from_edges(k * m, edges, meta=meta)


def part_of(G: Graph, v: int) -> int:
    """0-based index of the part holding ``v`` in a complete k-partite graph."""
    for i, part in enumerate(G.meta["parts"]):
        if v in part:
            return i
    raise KeyError(v)


def cross_edges(G: Graph, remove, add) -> Graph:
    """Swap two edges for two others, leaving every other adjacency alone."""
    remove = [tuple(e) for e in remove]
    add = [tuple(e) for e in add]
    if len(remove) != 2 or len(add) != 2:
        raise ValueError("cross_edges swaps exactly two edges for two edges")
    norm = lambda e: (min(e), max(e))  # noqa: E731
    rem = {norm(e) for e in remove}
    new = {norm(e) for e in add}
    if len(rem) != 2 or len(new) != 2:
        raise ValueError("duplicate edge in crossing")
    for e in rem:
        if e not in G.edges:
            raise ValueError(f"edge {e} to remove is not present")
    for e in new:
        if e in G.edges:
            raise ValueError(f"edge {e} to add is already present")
    meta = dict(G.meta)
    meta["crossing"] = {"removed": sorted(rem), "added": sorted(new)}
    return Graph(G.n, frozenset((G.edges - rem) | new), G.labels, meta)


def _clique_path_edges(r, s, index):
    edges = []
    for p in range(1, s + 1):
        for i, j in itertools.combinations(range(1, r + 1), 2):
            edges.append((index(i, p), index(j, p)))
    for p in range(1, s):
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                if i != j:
                    edges.append((index(i, p), index(j, p + 1)))
    return edges


def clique_path(r: int, s: int) -> Graph:
    """Chain of ``s`` cliques of size ``r`` joined by antimatchings.

    Vertex ``(i, p)`` (both 1-based) has index ``(p-1)*r + (i-1)``.
    """
    if r < 2 or s < 2:
        raise ValueError("clique_path needs r >= 2 and s >= 2")
    index = lambda i, p: (p - 1) * r + (i - 1)  # noqa: E731
    meta = _meta("clique_path", r=r, s=s)
    meta["names"] = {index(i, p): [i, p] for p in range(1, s + 1) for i in range(1, r + 1)}
    return Graph.from_edges(r * s, _clique_path_edges(r, s, index), meta=meta)


def double_clique_path_index(r: int, s: int, copy: int, i: int, p: int) -> int:
    """Index of ``(i, p)`` in copy 0 (unprimed) or copy 1 (primed)."""
    return copy * r * s + (p - 1) * r + (i - 1)


def permuted_double_clique_path(r: int, s: int, sigma: Permutation, tau: Permutation) -> Graph:
    """Two clique paths closed into a ring through a sigma- and a tau-antimatching.

    The sigma-antimatching joins the first cliques: ``(i,1)`` is adjacent to
    every ``(j,1)'`` except ``j = sigma(i)``; the tau-antimatching does the
    same on the last cliques. The identifier layout is fixed by
    :func:`double_clique_path_ids` and does not depend on the permutations.
    """
    if r < 2 or s < 2:
        raise ValueError("needs r >= 2 and s >= 2")
    if sigma.r != r or tau.r != r:
        raise ValueError("permutations must act on 1..r")
    idx = lambda c, i, p: double_clique_path_index(r, s, c, i, p)  # noqa: E731
    edges = []
    for c in (0, 1):
        edges += _clique_path_edges(r, s, lambda i, p, c=c: idx(c, i, p))
    for perm, p in ((sigma, 1), (tau, s)):
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                if j != perm(i):
                    edges.append((idx(0, i, p), idx(1, j, p)))
    meta = _meta("permuted_double_clique_path", r=r, s=s, sigma=list(sigma.images), tau=list(tau.images))
    meta["names"] = {
        idx(c, i, p): [c, i, p] for c in (0, 1) for p in range(1, s + 1) for i in range(1, r + 1)
    }
    meta["id_convention"] = "1..2rs in construction order"
    return Graph.from_edges(2 * r * s, edges, meta=meta)


def double_clique_path_ids(r: int, s: int) -> IdentifierAssignment:
    return IdentifierAssignment(tuple(range(1, 2 * r * s + 1)))


def labeled_path(t: int) -> Graph:
    """Path ``u_0..u_t`` where only ``u_0`` is labeled."""
    if t < 1:
        raise ValueError("labeled_path needs t >= 1")
    labels = [1] + [0] * t
    return Graph.from_edges(t + 1, [(i, i + 1) for i in range(t)], labels, _meta("labeled_path", t=t))


def path(n: int, labels=None) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], labels, _meta("path", n=n))


def cycle(n: int, labels=None) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], labels, _meta("cycle", n=n))


def unlabeled_cycle(length: int, certs, alphabet_size=None):
    """Unlabeled cycle ``v_0..v_{len-1}`` carrying a cyclic certificate pattern."""
    certs = list(certs)
    if length < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    if len(certs) != length:
        raise ValueError(f"pattern has {len(certs)} symbols for a cycle of length {length}")
    G = cycle(length, labels=[0] * length)
    C = alphabet_size if alphabet_size is not None else max(certs) + 1
    return G, CertificateAssignment(C, tuple(certs))


def half_graph_index(delta: int, side: str, i: int, copy: int = 0) -> int:
    """Index of ``u_i`` / ``v_i`` (1-based) in copy ``copy`` of a half graph."""
    base = copy * 2 * delta
    return base + (i - 1 if side == "u" else delta + i - 1)


def half_graph(delta: int) -> Graph:
    """Half graph ``B_delta``: ``u_i`` adjacent to ``v_j`` whenever ``i >= j``."""
    if delta < 1:
        raise ValueError("half_graph needs delta >= 1")
    u = lambda i: half_graph_index(delta, "u", i)  # noqa: E731
    v = lambda i: half_graph_index(delta, "v", i)  # noqa: E731
    edges = [(u(i), v(j)) for i in range(1, delta + 1) for j in range(1, i + 1)]
    meta = _meta("half_graph", delta=delta)
    meta["names"] = {u(i): f"u{i}" for i in range(1, delta + 1)} | {v(i): f"v{i}" for i in range(1, delta + 1)}
    return Graph.from_edges(2 * delta, edges, meta=meta)


def broken_half_graph_pair(delta: int, j1: int, j2: int) -> Graph:
    """Two copies of ``B_delta`` with the surgery that kills every perfect matching.

    Copy ``'`` occupies ``0..2delta-1`` and copy ``''`` the next ``2delta``
    indices. For each ``i`` in ``j1..j2-1`` the edge ``(u_i'', v_j1'')`` is
    replaced by ``(u_i'', v_j2')``.
    """
    if not 1 <= j1 < j2 <= delta:
        raise ValueError("need 1 <= j1 < j2 <= delta")
    u = lambda i, c: half_graph_index(delta, "u", i, c)  # noqa: E731
    v = lambda i, c: half_graph_index(delta, "v", i, c)  # noqa: E731
    edges = set()
    for c in (0, 1):
        for i in range(1, delta + 1):
            for j in range(1, i + 1):
                edges.add((u(i, c), v(j, c)))
    removed, added = [], []
    for i in range(j1, j2):
        edges.discard((u(i, 1), v(j1, 1)))
        removed.append((u(i, 1), v(j1, 1)))
        edges.add((u(i, 1), v(j2, 0)))
        added.append((u(i, 1), v(j2, 0)))
    meta = _meta("broken_half_graph_pair", delta=delta, j1=j1, j2=j2)
    meta["removed"] = removed
    meta["added"] = added
    meta["names"] = {
        x(i, c): f"{side}{i}{quote}"
        for c, quote in ((0, "'"), (1, "''"))
        for side, x in (("u", u), ("v", v))
        for i in range(1, delta + 1)
    }
    meta["hall_set"] = [v(j1, 1)] + [v(i, 1) for i in range(j2, delta + 1)]
    return Graph.from_edges(4 * delta, sorted(edges), meta=meta)


def half_graph_ids(delta: int, sigma: Permutation) -> IdentifierAssignment:
    """Identifiers of ``B_delta(sigma)``: ``u_i`` gets ``sigma(i)``, ``v_i`` gets ``delta+i``."""
    ids = [0] * (2 * delta)
    for i in range(1, delta + 1):
        ids[half_graph_index(delta, "u", i)] = sigma(i)
        ids[half_graph_index(delta, "v", i)] = delta + i
    return IdentifierAssignment(tuple(ids))


def grid(rows: int, cols: int) -> Graph:
    idx = lambda r, c: r * cols + c  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((idx(r, c), idx(r, c + 1)))
            if r + 1 < rows:
                edges.append((idx(r, c), idx(r + 1, c)))
    return Graph.from_edges(rows * cols, edges, meta=_meta("grid", rows=rows, cols=cols))


def gnp(n: int, p: float, seed: int = 0) -> Graph:
    """Uniform G(n, p); only meant for building test corpora."""
    rng = random.Random(seed)
    edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges, meta=_meta("gnp", n=n, p=p, seed=seed))


def random_tree(n: int, seed: int = 0) -> Graph:
    rng = random.Random(seed)
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    return Graph.from_edges(n, edges, meta=_meta("random_tree", n=n, seed=seed))


def random_two_tree(n: int, seed: int = 0, keep: float = 1.0) -> Graph:
    """Random partial 2-tree (treewidth <= 2) on ``n >= 2`` vertices.

    Each new vertex attaches to both ends of a random existing edge; every
    non-tree edge is then kept with probability ``keep``.
    """
    rng = random.Random(seed)
    edges = [(0, 1)]
    tree = {(0, 1)}
    for v in range(2, n):
        a, b = rng.choice(edges)
        edges.append((a, v))
        edges.append((b, v))
        tree.add((a, v))
    kept = [e for e in edges if e in tree or rng.random() < keep]
    return Graph.from_edges(n, kept, meta=_meta("random_two_tree", n=n, seed=seed, keep=keep))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2), meta=_meta("complete_graph", n=n))
