"""Certification schemes: a prover for YES instances and a vertex verifier.

Every verifier is a pure function of a :class:`View` returning
``(accepted, step)``; ``step`` names the rule that decided. Anonymous
verifiers are handed views without identifiers, so they cannot read them.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import partial
from typing import Callable

from locert.errors import PreconditionError
from locert.graph import CertificateAssignment, Graph, View, bfs_distances, extract_view
from locert.oracles import (
    BallStatus,
    Matching,
    chromatic_feasible,
    contraction_matching_coloring,
    find_perfect_matching,
    greedy_matching_coloring,
    is_dominating_at_distance,
    partition_status,
    uniquely_colorable_at_distance,
)
from locert.words import Word, integer_root_ceil, locate_factor, scheme_word

ANONYMOUS = "anonymous"
LCP = "locally-checkable-proofs"


@dataclass(frozen=True)
class Decision:
    vertex: int
    accepted: bool
    step: str


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    rejecting_vertices: frozenset
    decisions: tuple

    def to_json(self, per_vertex: bool = False) -> dict:
        out = {"accepted": self.accepted, "rejecting_vertices": sorted(self.rejecting_vertices)}
        if per_vertex:
            out["decisions"] = [
                {"vertex": d.vertex, "accepted": d.accepted, "step": d.step} for d in self.decisions
            ]
        return out


@dataclass(frozen=True)
class Scheme:
    name: str
    alphabet_size: int
    distance: int
    model: str
    params: tuple
    verifier: Callable = field(compare=False, repr=False)

    def param(self, key, default=None):
        return dict(self.params).get(key, default)

    def decide(self, G: Graph, c, u: int, ids=None) -> Decision:
        view = extract_view(G, c, ids if self.model == LCP else None, u, self.distance)
        ok, step = self.verifier(view)
        return Decision(u, ok, step)


def _symbols(s: Scheme, c):
    if isinstance(c, CertificateAssignment):
        if c.alphabet_size > s.alphabet_size:
            raise ValueError(
                f"assignment alphabet {c.alphabet_size} exceeds scheme alphabet {s.alphabet_size}"
            )
        return c.symbols
    c = tuple(c)
    if any(not 0 <= x < s.alphabet_size for x in c):
        raise ValueError(f"symbols must lie in 0..{s.alphabet_size - 1}")
    return c


def verify_all(s: Scheme, G: Graph, c, ids=None, stop_at_first_reject: bool = False) -> Verdict:
    """Run the vertex verifier everywhere; optionally stop at the first rejection."""
    symbols = _symbols(s, c)
    if len(symbols) != G.n:
        raise ValueError("assignment must cover every vertex")
    if s.model == LCP and ids is None:
        raise ValueError(f"scheme {s.name} needs identifiers")
    decisions = []
    for u in G.vertices:
        d = s.decide(G, symbols, u, ids)
        decisions.append(d)
        if stop_at_first_reject and not d.accepted:
            break
    rejecting = frozenset(d.vertex for d in decisions if not d.accepted)
    return Verdict(not rejecting, rejecting, tuple(decisions))


# -- colouring ------------------------------------------------------------------


def _verify_coloring(view: View):
    mine = view.certs[view.root]
    if any(view.certs[w] == mine for w in view.neighbors(view.root)):
        return False, "neighbor shares certificate"
    return True, "proper"


def coloring_scheme(k: int, d: int = 1) -> Scheme:
    if k < 1:
        raise ValueError("k must be at least 1")
    return Scheme("coloring", k, d, ANONYMOUS, (("k", k),), _verify_coloring)


def prove_coloring(G: Graph, k: int) -> CertificateAssignment:
    part = chromatic_feasible(G, k)
    if part is None:
        raise PreconditionError(f"graph is not {k}-colorable")
    col = part.as_coloring()
    return CertificateAssignment(k, tuple(col[v] for v in G.vertices))


# -- uniquely colourable graphs -------------------------------------------------


@dataclass(frozen=True)
class _DigitCode:
    k: int
    d: int
    delta: int
    base: int
    radius: int  # marker search radius
    offset: int  # first layer of digit group 1
    two_cert: bool


def _local_bfs(adj, src, limit):
    dist = {src: 0}
    q = deque([src])
    while q:
        x = q.popleft()
        if dist[x] >= limit:
            continue
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def _markers(view: View, adj, code: _DigitCode):
    """Vertices of the view that play the role of the spaced set."""
    certs = view.certs
    if not code.two_cert:
        return [x for x in view.vertices if certs[x] == code.base]
    out = []
    for x, dx in view.dist.items():
        if dx > view.radius - 3 or certs[x] != 1:
            continue
        near = _local_bfs(adj, x, 2)
        if all(certs[y] == (1 if dy == 1 else 0) for y, dy in near.items() if dy > 0):
            out.append(x)
    return out


def _color_value(view: View, adj, markers, centre, code: _DigitCode):
    """``a(centre)`` as read from the digit layers, or ``(None, step)``."""
    around = _local_bfs(adj, centre, code.d - 2)
    verts = frozenset(around)
    edges = frozenset((a, b) for a, b in view.edges if a in verts and b in verts)
    part = partition_status(verts, edges, code.k, center=centre)
    if part.status is BallStatus.INFEASIBLE:
        return None, "ball not colorable"
    if part.status is BallStatus.MULTIPLE:
        return None, "ball not uniquely colorable"
    near = [x for x in markers if around.get(x, math.inf) <= code.radius]
    if not near:
        return None, "(i) no marker nearby"
    own = part.partition.class_of(centre)
    top = code.offset + 3 * code.delta - 1
    values = set()
    for x in sorted(near):
        dx = _local_bfs(adj, x, top)
        value = 0
        for i in range(1, code.delta + 1):
            lo = code.offset + 3 * (i - 1)
            seen = {view.certs[y] for y in own if lo <= dx.get(y, -1) <= lo + 2}
            if len(seen) != 1:
                return None, "(ii) digit layer inconsistent" if seen else "(ii) digit layer empty"
            value = value * code.base + seen.pop()
        values.add(value)
    if len(values) > 1:
        return None, "(iii) markers disagree"
    value = values.pop()
    if value >= code.k:
        return None, "(iii) color out of range"
    return value, "ok"


def _whole_component_verdict(view: View, adj, code: _DigitCode):
    if not view.sees_whole_component():
        return None
    verts = sorted(view.vertices)
    diam = 0
    for x in verts:
        diam = max(diam, max(_local_bfs(adj, x, len(verts)).values()))
    if diam > code.radius:
        return None
    pos = {v: i for i, v in enumerate(verts)}
    H = Graph.from_edges(len(verts), [(pos[a], pos[b]) for a, b in view.edges])
    ok = chromatic_feasible(H, code.k) is not None
    return ok, "small component " + ("colorable" if ok else "not colorable")


def _verify_digit_code(view: View, code: _DigitCode):
    adj = view.adjacency()
    small = _whole_component_verdict(view, adj, code)
    if small is not None:
        return small
    markers = _markers(view, adj, code)
    value, step = _color_value(view, adj, markers, view.root, code)
    if value is None:
        return False, step
    for w in sorted(adj[view.root]):
        other, _ = _color_value(view, adj, markers, w, code)
        if other == value:
            return False, "(iv) neighbor has the same color"
    return True, "(v)"


def _uc_code(k: int, d: int) -> _DigitCode:
    if d < 11:
        raise ValueError("the uniquely-colorable scheme needs d >= 11")
    delta = (d - 2) // 9
    base = integer_root_ceil(k, delta)
    return _DigitCode(k, d, delta, base, 6 * delta, 1, False)


def _two_code(k: int) -> _DigitCode:
    if k < 2:
        raise ValueError("the two-certificate scheme needs k >= 2")
    delta = math.ceil(math.log2(k))
    return _DigitCode(k, 9 * delta + 8, delta, 2, 6 * delta + 4, 3, True)


def uniquely_colorable_scheme(k: int, d: int) -> Scheme:
    code = _uc_code(k, d)
    return Scheme(
        "uniquely-colorable", code.base + 1, d, ANONYMOUS,
        (("k", k), ("d", d), ("delta", code.delta), ("f", code.base)),
        partial(_verify_digit_code, code=code),
    )


def two_certificate_scheme(k: int) -> Scheme:
    code = _two_code(k)
    return Scheme(
        "two-certificates", 2, code.d, ANONYMOUS,
        (("k", k), ("d", code.d), ("delta", code.delta)),
        partial(_verify_digit_code, code=code),
    )


def spaced_set(G: Graph, spacing: int) -> list:
    """Greedy set with pairwise distances >= ``spacing``, scanning by index."""
    chosen = []
    near = {}
    for v in G.vertices:
        if v in near:
            continue
        chosen.append(v)
        for x, dx in bfs_distances(G, [v], limit=spacing - 1).items():
            near.setdefault(x, dx)
    return chosen


def _digit(value: int, i: int, base: int, width: int) -> int:
    """``i``-th digit (1 = most significant) of ``value`` written with ``width`` digits."""
    return (value // base ** (width - i)) % base


def _coloring_or_raise(G: Graph, k: int, d_unique: int, check: bool):
    if check and not uniquely_colorable_at_distance(G, k, d_unique):
        raise PreconditionError(f"graph is not uniquely {k}-colorable at distance {d_unique}")
    part = chromatic_feasible(G, k)
    if part is None:
        raise PreconditionError(f"graph is not {k}-colorable")
    col = part.as_coloring()
    return [col[v] for v in G.vertices]


def prove_uniquely_colorable(G: Graph, k: int, d: int, check: bool = True) -> CertificateAssignment:
    code = _uc_code(k, d)
    phi = _coloring_or_raise(G, k, d - 2, check)
    X = spaced_set(G, 6 * code.delta + 1)
    dist = bfs_distances(G, X)
    certs = []
    for v in G.vertices:
        dv = dist[v]
        if dv == 0:
            certs.append(code.base)
        elif dv <= 3 * code.delta:
            certs.append(_digit(phi[v], math.ceil(dv / 3), code.base, code.delta))
        else:
            certs.append(0)
    return CertificateAssignment(code.base + 1, tuple(certs))


def two_certificate_assignment(G: Graph, k: int, coloring) -> CertificateAssignment:
    """The prover's layout built from any colouring, proper or not."""
    code = _two_code(k)
    X = spaced_set(G, 6 * code.delta + 5)
    dist = bfs_distances(G, X)
    certs = []
    for v in G.vertices:
        dv = dist[v]
        if dv <= 1:
            certs.append(1)
        elif dv == 2 or dv > 3 * code.delta + 2:
            certs.append(0)
        else:
            certs.append(_digit(coloring[v], math.ceil((dv - 2) / 3), 2, code.delta))
    return CertificateAssignment(2, tuple(certs))


def prove_two_certificates(G: Graph, k: int, check: bool = True) -> CertificateAssignment:
    code = _two_code(k)
    phi = _coloring_or_raise(G, k, code.d - 2, check)
    return two_certificate_assignment(G, k, phi)


def color_values(s: Scheme, G: Graph, c) -> dict:
    """``a(v)`` for every vertex under a digit-code scheme (``None`` if undefined)."""
    code = s.verifier.keywords["code"]
    symbols = _symbols(s, c)
    out = {}
    for v in G.vertices:
        view = extract_view(G, symbols, None, v, s.distance)
        adj = view.adjacency()
        out[v], _ = _color_value(view, adj, _markers(view, adj, code), v, code)
    return out


# -- domination -----------------------------------------------------------------


def _decode(symbol: int, tau: int):
    return symbol // tau, symbol % tau + 1


def _encode(level: int, letter: int, tau: int) -> int:
    return level * tau + letter - 1


def _labeled(view: View, x) -> bool:
    return bool(view.labels and view.labels[x])


def _verify_domination_d1(view: View, tau: int, word: Word, footnote: bool):
    u = view.root
    nbrs = sorted(view.neighbors(u))
    if _labeled(view, u) or any(_labeled(view, x) for x in nbrs):
        if footnote and not _labeled(view, u) and _decode(view.certs[u], tau)[1] != word[1]:
            return False, "(i) letter does not start the word"
        return True, "(i)"
    letter_of = {}
    for x in [u] + nbrs:
        lvl, letter = _decode(view.certs[x], tau)
        if letter_of.setdefault(lvl, letter) != letter:
            return False, "(ii)"
    lvl, letter = _decode(view.certs[u], tau)
    before = letter_of.get((lvl - 1) % 3)
    if before is None or not word.has_factor((before, letter)):
        return False, "(iii)"
    after = letter_of.get((lvl + 1) % 3)
    if after is not None and not word.has_factor((before, letter, after)):
        return False, "(iv)"
    return True, "(v)"


def _descending_words(adj, levels, letters, root, d):
    """Letter strings ``pi2(u_d)..pi2(u_0)`` over all decreasing walks from ``root``."""
    memo = {}

    def walk(x, j):
        key = (x, j)
        if key not in memo:
            if j == 0:
                memo[key] = frozenset({(letters[x],)})
            else:
                down = (levels[x] - 1) % 3
                out = set()
                for y in adj[x]:
                    if levels[y] == down:
                        out.update(s + (letters[x],) for s in walk(y, j - 1))
                memo[key] = frozenset(out)
        return memo[key]

    return walk(root, d)


def _verify_domination(view: View, tau: int, word: Word):
    if any(_labeled(view, x) for x in view.vertices):
        return True, "(i)"
    adj = view.adjacency()
    levels, letters = {}, {}
    for x, sym in view.certs.items():
        levels[x], letters[x] = _decode(sym, tau)
    found = _descending_words(adj, levels, letters, view.root, view.radius)
    if not found:
        return False, "(ii)"
    if len(found) > 1:
        return False, "(iii) decreasing walks disagree"
    f = next(iter(found))
    if not word.has_factor(f):
        return False, "(iii) not a factor"
    up = (levels[view.root] + 1) % 3
    for w in adj[view.root]:
        if levels[w] == up and not word.has_factor(f + (letters[w],)):
            return False, "(iv)"
    return True, "(v)"


def domination_d1_scheme(t: int, footnote: bool = False) -> Scheme:
    word = scheme_word(t, 2)
    tau = word.alphabet_size
    return Scheme(
        "domination-d1", 3 * tau, 1, ANONYMOUS, (("t", t), ("tau", tau), ("footnote", footnote)),
        partial(_verify_domination_d1, tau=tau, word=word, footnote=footnote),
    )


def domination_scheme(t: int, d: int) -> Scheme:
    if d < 1:
        raise ValueError("d must be at least 1")
    word = scheme_word(t, d + 1)
    tau = word.alphabet_size
    return Scheme(
        "domination", 3 * tau, d, ANONYMOUS, (("t", t), ("d", d), ("tau", tau)),
        partial(_verify_domination, tau=tau, word=word),
    )


def _prove_domination(G: Graph, t: int, order: int) -> CertificateAssignment:
    if not is_dominating_at_distance(G, t):
        raise PreconditionError(f"labeled set does not dominate at distance {t}")
    word = scheme_word(t, order)
    tau = word.alphabet_size
    dist = bfs_distances(G, G.labeled_set)
    certs = [0 if dist[v] == 0 else _encode(dist[v] % 3, word[dist[v]], tau) for v in G.vertices]
    return CertificateAssignment(3 * tau, tuple(certs))


def prove_domination_d1(G: Graph, t: int) -> CertificateAssignment:
    return _prove_domination(G, t, 2)


def prove_domination(G: Graph, t: int, d: int) -> CertificateAssignment:
    return _prove_domination(G, t, d + 1)


def recover_distances(s: Scheme, G: Graph, c) -> dict:
    """Distance to the labeled set as read from certificates, vertex by vertex.

    A vertex that sees a labeled vertex reads the distance off its view;
    otherwise the letters of a decreasing walk are located in the word.
    """
    tau = s.param("tau")
    t = s.param("t")
    d = s.distance
    word = scheme_word(t, d + 1)
    symbols = _symbols(s, c)
    out = {}
    for v in G.vertices:
        view = extract_view(G, symbols, None, v, d)
        marked = [x for x in view.vertices if _labeled(view, x)]
        if marked:
            out[v] = min(view.dist[x] for x in marked)
            continue
        levels, letters = {}, {}
        for x, sym in view.certs.items():
            levels[x], letters[x] = _decode(sym, tau)
        found = _descending_words(view.adjacency(), levels, letters, v, d)
        pos = locate_factor(word, next(iter(found))) if len(found) == 1 else None
        out[v] = None if pos is None else pos + d
    return out


# -- matching -------------------------------------------------------------------


def _verify_matching(view: View):
    mine = view.certs[view.root]
    same = sum(1 for w in view.neighbors(view.root) if view.certs[w] == mine)
    return (same == 1), f"{same} same-symbol neighbors"


def matching_scheme(alphabet_size: int) -> Scheme:
    return Scheme("matching", alphabet_size, 1, ANONYMOUS, (("C", alphabet_size),), _verify_matching)


def prove_matching(G: Graph, backend: str = "greedy", k: int = 4,
                   coloring_backend: str = "exact") -> CertificateAssignment:
    M = find_perfect_matching(G)
    if M is None:
        raise PreconditionError("graph has no perfect matching")
    if backend == "greedy":
        phi = greedy_matching_coloring(G, M)
    elif backend == "contraction":
        phi = contraction_matching_coloring(G, M, coloring_backend, k)
        if phi is None:
            raise PreconditionError(f"{coloring_backend} backend found no {k}-coloring of the contraction")
    else:
        raise ValueError(f"unknown matching backend {backend!r}")
    return CertificateAssignment(max(phi, default=0) + 1, tuple(phi))


def decode_constructive_matching(G: Graph, ids, c, validity):
    """Valid edges as a perfect matching, or ``None``.

    ``validity(id_a, cert_a, id_b, cert_b)`` must not depend on the order of
    the two endpoints; an asymmetric answer on any edge raises ``ValueError``.
    """
    symbols = c.symbols if isinstance(c, CertificateAssignment) else tuple(c)
    ident = (lambda v: None) if ids is None else (lambda v: ids[v])
    valid = []
    for a, b in G.edge_list():
        ab = bool(validity(ident(a), symbols[a], ident(b), symbols[b]))
        if ab != bool(validity(ident(b), symbols[b], ident(a), symbols[a])):
            raise ValueError(f"validity predicate is not symmetric on edge {(a, b)}")
        if ab:
            valid.append((a, b))
    count = [0] * G.n
    for a, b in valid:
        count[a] += 1
        count[b] += 1
    if any(x != 1 for x in count):
        return None
    return Matching.of(G, valid)


def equal_certificates(id_a, cert_a, id_b, cert_b) -> bool:
    return cert_a == cert_b


# -- permissive verifier --------------------------------------------------------


def _accept(view: View):
    return True, "accept"


def accept_all_scheme(alphabet_size: int, d: int = 1) -> Scheme:
    """Accepts every view; used to drive the transfer attacks on arbitrary assignments."""
    return Scheme("accept-all", alphabet_size, d, ANONYMOUS, (("C", alphabet_size),), _accept)


SCHEME_FACTORIES = {
    "coloring": lambda p: coloring_scheme(int(p["k"]), int(p.get("d", 1))),
    "uniquely-colorable": lambda p: uniquely_colorable_scheme(int(p["k"]), int(p["d"])),
    "two-certificates": lambda p: two_certificate_scheme(int(p["k"])),
    "domination-d1": lambda p: domination_d1_scheme(int(p["t"]), str(p.get("footnote", "0")) in ("1", "true", "True")),
    "domination": lambda p: domination_scheme(int(p["t"]), int(p.get("d", 1))),
    "matching": lambda p: matching_scheme(int(p["C"])),
}


def make_scheme(name: str, params: dict) -> Scheme:
    if name not in SCHEME_FACTORIES:
        raise ValueError(f"unknown scheme {name!r}; choose from {sorted(SCHEME_FACTORIES)}")
    try:
        return SCHEME_FACTORIES[name](params)
    except KeyError as exc:
        raise ValueError(f"scheme {name!r} needs parameter {exc.args[0]}") from None
