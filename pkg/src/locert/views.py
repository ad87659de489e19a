"""Canonical encoding of rooted, decorated views.

Two views are equal when a root-preserving isomorphism maps one onto the
other while preserving certificates, labels and (when present) identifiers.
Equality is decided by comparing canonical encodings:

1. every vertex gets a base colour ``(is_root, cert, label, id)``;
2. classes of true twins (same colour, same closed neighbourhood) and false
   twins (same colour, same open neighbourhood) are collapsed into a single
   vertex carrying the class size, repeatedly;
3. the reduced graph is canonised by individualisation-refinement, taking
   the lexicographically least encoding over all leaves of the search tree.

Step 2 keeps the search tree small on the stars and complete multipartite
pieces that appear in the transfer attacks.
"""

from __future__ import annotations

from locert.errors import CapacityError
from locert.graph import View

MAX_VIEW_VERTICES = 64
MAX_SEARCH_LEAVES = 200_000

_BASE, _TRUE_TWINS, _FALSE_TWINS = 0, 1, 2


def _base_colours(view: View):
    verts = sorted(view.vertices)
    colours = []
    for v in verts:
        label = -1 if view.labels is None else view.labels[v]
        ident = -1 if view.ids is None else view.ids[v]
        colours.append((_BASE, 1, (int(v == view.root), view.certs[v], label, ident)))
    pos = {v: i for i, v in enumerate(verts)}
    adj = [set() for _ in verts]
    for a, b in view.edges:
        adj[pos[a]].add(pos[b])
        adj[pos[b]].add(pos[a])
    return colours, adj


def _collapse(colours, adj, kind):
    """Merge twin classes of one kind; returns (colours, adj, changed)."""
    groups = {}
    for v in range(len(colours)):
        nb = frozenset(adj[v] | {v}) if kind == _TRUE_TWINS else frozenset(adj[v])
        groups.setdefault((colours[v], nb), []).append(v)
    merged = [g for g in groups.values() if len(g) > 1]
    if not merged:
        return colours, adj, False
    drop = set()
    new_colour = list(colours)
    for g in merged:
        rep = g[0]
        new_colour[rep] = (kind, len(g), colours[rep])
        drop.update(g[1:])
    keep = [v for v in range(len(colours)) if v not in drop]
    pos = {v: i for i, v in enumerate(keep)}
    out_adj = [{pos[w] for w in adj[v] if w in pos} for v in keep]
    return [new_colour[v] for v in keep], out_adj, True


def _reduce_twins(colours, adj):
    changed = True
    while changed:
        colours, adj, a = _collapse(colours, adj, _TRUE_TWINS)
        colours, adj, b = _collapse(colours, adj, _FALSE_TWINS)
        changed = a or b
    return colours, adj


def _refine(cells, adj):
    """Colour refinement; ranks are assigned by sorted signature."""
    count = len(set(cells))
    while True:
        sig = [(cells[v], tuple(sorted(cells[w] for w in adj[v]))) for v in range(len(cells))]
        order = {s: i for i, s in enumerate(sorted(set(sig)))}
        cells = [order[s] for s in sig]
        if len(order) == count:
            return cells
        count = len(order)


class _Search:
    def __init__(self, adj, initial, max_leaves):
        self.adj = adj
        self.initial = initial
        self.max_leaves = max_leaves
        self.leaves = 0
        self.best = None

    def run(self, cells):
        cells = _refine(cells, self.adj)
        n = len(cells)
        if len(set(cells)) == n:
            self.leaves += 1
            if self.leaves > self.max_leaves:
                raise CapacityError(
                    f"canonical search exceeded {self.max_leaves} leaves",
                    {"leaves": self.leaves},
                )
            inv = sorted(range(n), key=cells.__getitem__)
            enc = (
                tuple(self.initial[v] for v in inv),
                tuple(sorted((min(cells[a], cells[b]), max(cells[a], cells[b]))
                             for a in range(n) for b in self.adj[a] if a < b)),
            )
            if self.best is None or enc < self.best:
                self.best = enc
            return
        sizes = {}
        for c in cells:
            sizes[c] = sizes.get(c, 0) + 1
        target = min(c for c, k in sizes.items() if k > 1)
        for v in range(n):
            if cells[v] == target:
                nxt = [2 * c + 1 for c in cells]
                nxt[v] = 2 * cells[v]
                self.run(nxt)


def canonical_form(view: View, max_vertices=MAX_VIEW_VERTICES, max_leaves=MAX_SEARCH_LEAVES):
    """Hashable encoding equal for exactly the isomorphic decorated views."""
    if len(view) > max_vertices:
        raise CapacityError(f"view has {len(view)} vertices, cap is {max_vertices}")
    colours, adj = _base_colours(view)
    colours, adj = _reduce_twins(colours, adj)
    palette = sorted(set(colours))
    rank = {c: i for i, c in enumerate(palette)}
    initial = [rank[c] for c in colours]
    search = _Search(adj, initial, max_leaves)
    search.run(list(initial))
    return (view.radius, tuple(palette), search.best)


def _literally_equal(a: View, b: View) -> bool:
    return (
        a.root == b.root
        and a.radius == b.radius
        and a.edges == b.edges
        and dict(a.dist) == dict(b.dist)
        and dict(a.certs) == dict(b.certs)
        and (a.labels or None) == (b.labels or None)
        and (a.ids or None) == (b.ids or None)
    )


def views_equal(a: View, b: View) -> bool:
    if (a.ids is None) != (b.ids is None):
        raise ValueError("cannot compare a view with identifiers to one without")
    if a.radius != b.radius or len(a) != len(b) or len(a.edges) != len(b.edges):
        return False
    if _literally_equal(a, b):
        return True
    if sorted(a.certs.values()) != sorted(b.certs.values()):
        return False
    return canonical_form(a) == canonical_form(b)
