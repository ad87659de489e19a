"""Soundness checks: certificate search and view-preserving transfer attacks.

Search enumerates assignments vertex by vertex in BFS order and checks a
vertex as soon as its whole ball is assigned, so a rejection prunes every
completion of the prefix. The space is cut into blocks by the symbols of
the first few positions; the cut does not depend on the worker count, so
counts and results are identical for any number of workers.

Each attack rebuilds a NO instance from an assignment on a YES instance and
records, for every vertex of the NO instance, a vertex of a YES instance
whose view is equal, plus oracle evidence that the target is a NO instance.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from locert.errors import CapacityError, PreconditionError
from locert.families import (
    Permutation,
    broken_half_graph_pair,
    complete_k_partite,
    cross_edges,
    double_clique_path_ids,
    half_graph,
    half_graph_index,
    labeled_path,
    permuted_double_clique_path,
    unlabeled_cycle,
)
from locert.graph import CertificateAssignment, Graph, ball, extract_view
from locert.oracles import chromatic_feasible, find_perfect_matching, is_dominating_at_distance
from locert.schemes import Scheme, verify_all
from locert.views import views_equal

DEFAULT_BUDGET = 10 ** 8
BLOCK_TARGET = 64


class AttackInapplicable(PreconditionError):
    """The assignment does not meet the pigeonhole condition the attack relies on."""


@dataclass
class SearchReport:
    scheme: str
    mode: str
    alphabet_size: int
    assignments_examined: int
    verifier_calls: int
    accepting_assignment: tuple | None
    accepting: list = field(default_factory=list)
    max_distinct: int | None = None
    elapsed: float = 0.0

    def to_json(self, include_timings: bool = False) -> dict:
        out = {
            "scheme": self.scheme,
            "mode": self.mode,
            "alphabet_size": self.alphabet_size,
            "max_distinct": self.max_distinct,
            "assignments_examined": self.assignments_examined,
            "verifier_calls": self.verifier_calls,
            "accepting_assignment": None if self.accepting_assignment is None else list(self.accepting_assignment),
            "accepting_count": len(self.accepting),
        }
        if include_timings:
            out["elapsed"] = self.elapsed
        return out


# -- exhaustive search ----------------------------------------------------------


def _bfs_order(G: Graph) -> list:
    seen, order = set(), []
    for s in G.vertices:
        if s in seen:
            continue
        seen.add(s)
        q = deque([s])
        while q:
            x = q.popleft()
            order.append(x)
            for y in sorted(G.neighbors(x)):
                if y not in seen:
                    seen.add(y)
                    q.append(y)
    return order


def _plan(s: Scheme, G: Graph):
    order = _bfs_order(G)
    pos = {v: i for i, v in enumerate(order)}
    ready = [[] for _ in order]
    for u in G.vertices:
        ready[max(pos[x] for x in ball(G, u, s.distance))].append(u)
    return order, ready


def _prefix_length(C: int, n: int) -> int:
    p = 0
    while p < n and C ** p < BLOCK_TARGET:
        p += 1
    return p


class _Exceeded(Exception):
    pass


def _run_block(args):
    s, G, ids, C, order, ready, prefix, budget, limit, max_distinct = args
    n = len(order)
    certs = [0] * G.n
    used = [0] * C
    state = {"calls": 0, "examined": 0, "distinct": 0}
    found = []
    p = len(prefix)

    def ok(i):
        for u in ready[i]:
            state["calls"] += 1
            if state["calls"] > budget:
                raise _Exceeded
            if not s.decide(G, certs, u, ids).accepted:
                return False
        return True

    def rec(i):
        if i == n:
            state["examined"] += 1
            found.append(tuple(certs))
            return len(found) >= limit
        for a in ([prefix[i]] if i < p else range(C)):
            fresh = used[a] == 0
            if fresh and max_distinct is not None and state["distinct"] >= max_distinct:
                state["examined"] += C ** (n - max(i + 1, p))
                continue
            certs[order[i]] = a
            used[a] += 1
            state["distinct"] += fresh
            try:
                if ok(i):
                    if rec(i + 1):
                        return True
                else:
                    state["examined"] += C ** (n - max(i + 1, p))
            finally:
                used[a] -= 1
                state["distinct"] -= fresh
        return False

    try:
        rec(0)
        exceeded = False
    except _Exceeded:
        exceeded = True
    return exceeded, state["calls"], state["examined"], found


def _workers(workers):
    if workers is None:
        workers = int(os.environ.get("LOCERT_WORKERS", "1"))
    return max(1, int(workers))


def _budget(budget):
    if budget is None:
        budget = int(float(os.environ.get("LOCERT_BUDGET", DEFAULT_BUDGET)))
    if budget <= 0:
        raise ValueError("budget must be positive")
    return budget


def exhaustive_search(s: Scheme, G: Graph, C: int | None = None, ids=None, budget: int | None = None,
                      workers: int | None = None, collect: bool = False, limit: int | None = None,
                      max_distinct: int | None = None) -> SearchReport:
    """Search all assignments over ``{0..C-1}`` for one the verifier accepts everywhere.

    With ``collect`` every accepting assignment is returned (up to ``limit``);
    otherwise the search stops at the first one in enumeration order.
    ``max_distinct`` restricts the search to assignments using at most that
    many different symbols. ``budget`` bounds verifier calls.
    """
    C = s.alphabet_size if C is None else C
    if not 1 <= C <= s.alphabet_size:
        raise ValueError(f"alphabet size must lie in 1..{s.alphabet_size}")
    budget = _budget(budget)
    workers = _workers(workers)
    limit = (limit or float("inf")) if collect else 1
    start = time.perf_counter()
    order, ready = _plan(s, G)
    p = _prefix_length(C, G.n)
    prefixes = list(itertools.product(range(C), repeat=p))
    calls = examined = 0
    found = []

    def absorb(b, result):
        nonlocal calls, examined
        exceeded, c_calls, c_examined, c_found = result
        if exceeded or calls + c_calls > budget:
            raise CapacityError(
                f"search budget of {budget} verifier calls exceeded",
                {"blocks_done": b, "blocks_total": len(prefixes),
                 "assignments_examined": examined, "verifier_calls": calls},
            )
        calls += c_calls
        examined += c_examined
        found.extend(c_found)
        return len(found) >= limit

    def args(prefix, remaining):
        return (s, G, ids, C, order, ready, prefix, remaining, limit - len(found), max_distinct)

    if workers == 1 or len(prefixes) == 1:
        for b, prefix in enumerate(prefixes):
            if absorb(b, _run_block(args(prefix, budget - calls))):
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # every block gets the full budget and the full limit; merging in
            # block order reproduces the serial result exactly
            futures = [pool.submit(_run_block, (s, G, ids, C, order, ready, prefix, budget, limit, max_distinct))
                       for prefix in prefixes]
            for b, fut in enumerate(futures):
                exceeded, c_calls, c_examined, c_found = fut.result()
                if len(found) + len(c_found) > limit:
                    c_found = c_found[: int(limit - len(found))]
                if absorb(b, (exceeded, c_calls, c_examined, c_found)):
                    for rest in futures[b + 1:]:
                        rest.cancel()
                    break
    report = SearchReport(
        s.name, "exhaustive", C, examined, calls, found[0] if found else None,
        found if collect else found[:1], max_distinct, time.perf_counter() - start,
    )
    if report.accepting_assignment is not None:
        assert verify_all(s, G, report.accepting_assignment, ids).accepted
    return report


def naive_search(s: Scheme, G: Graph, C: int | None = None, ids=None, collect: bool = False) -> SearchReport:
    """Unpruned enumeration in plain lexicographic order over vertex indices."""
    C = s.alphabet_size if C is None else C
    start = time.perf_counter()
    examined = calls = 0
    found = []
    for certs in itertools.product(range(C), repeat=G.n):
        examined += 1
        verdict = verify_all(s, G, certs, ids, stop_at_first_reject=True)
        calls += len(verdict.decisions)
        if verdict.accepted:
            found.append(certs)
            if not collect:
                break
    return SearchReport(s.name, "naive", C, examined, calls, found[0] if found else None,
                        found, None, time.perf_counter() - start)


def sample_search(s: Scheme, G: Graph, samples: int, C: int | None = None, seed: int = 0,
                  ids=None, extra=()) -> SearchReport:
    """Uniform random assignments (plus any ``extra`` structured ones).

    Sampling is evidence, not proof; the report mode says so.
    """
    C = s.alphabet_size if C is None else C
    rng = random.Random(seed)
    start = time.perf_counter()
    examined = calls = 0
    found = []
    candidates = itertools.chain(
        (tuple(getattr(x, "symbols", x)) for x in extra),
        (tuple(rng.randrange(C) for _ in G.vertices) for _ in range(samples)),
    )
    for certs in candidates:
        examined += 1
        verdict = verify_all(s, G, certs, ids, stop_at_first_reject=True)
        calls += len(verdict.decisions)
        if verdict.accepted:
            found.append(certs)
    return SearchReport(s.name, "sampling", C, examined, calls, found[0] if found else None,
                        found, None, time.perf_counter() - start)


# -- attack outcomes -------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    vertex: int
    reference: str
    reference_vertex: int
    equal: bool


@dataclass
class AttackOutcome:
    kind: str
    radius: int
    target: Graph
    assignment: CertificateAssignment
    ids: object
    references: dict  # name -> (graph, certificate symbols, ids or None)
    witnesses: tuple
    no_certificate: dict
    details: dict = field(default_factory=dict)

    @property
    def views_preserved(self) -> bool:
        return all(w.equal for w in self.witnesses)

    @property
    def verified(self) -> bool:
        return self.views_preserved and self.no_certificate.get("confirmed", False)

    def recheck(self) -> bool:
        """Recompute every witness comparison from scratch."""
        return all(
            _same_view(self.target, self.assignment.symbols, self.ids, w.vertex,
                       *self.references[w.reference], w.reference_vertex, self.radius)
            for w in self.witnesses
        ) and self.no_certificate.get("confirmed", False)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "radius": self.radius,
            "target": {"n": self.target.n, "edges": [list(e) for e in self.target.edge_list()]},
            "assignment": list(self.assignment.symbols),
            "witnesses": [
                {"vertex": w.vertex, "reference": w.reference, "reference_vertex": w.reference_vertex,
                 "views_equal": w.equal}
                for w in self.witnesses
            ],
            "no_certificate": self.no_certificate,
            "details": self.details,
            "verified": self.verified,
        }


def _same_view(G, c, ids, u, H, hc, hids, v, d) -> bool:
    return views_equal(extract_view(G, c, ids, u, d), extract_view(H, hc, hids, v, d))


def _witnesses(target, c, ids, pairs, references, d):
    out = []
    for u, (name, v) in sorted(pairs.items()):
        H, hc, hids = references[name]
        out.append(Witness(u, name, v, _same_view(target, c, ids, u, H, hc, hids, v, d)))
    return tuple(out)


@lru_cache(maxsize=4096)
def _colorable(G: Graph, k: int) -> bool:
    return chromatic_feasible(G, k) is not None


def _require_accepted(scheme, G, c, ids=None):
    if scheme is not None and not verify_all(scheme, G, c, ids).accepted:
        raise PreconditionError(f"scheme {scheme.name} does not accept the given assignment")


def _as_symbols(c):
    return tuple(c.symbols) if isinstance(c, CertificateAssignment) else tuple(int(x) for x in c)


def _target_verdict(scheme, G, c, ids=None):
    if scheme is None:
        return None
    return verify_all(scheme, G, c, ids).accepted


# -- crossing attack -------------------------------------------------------------


def crossing_attack(k: int, m: int, c, scheme: Scheme | None = None, d: int = 1) -> AttackOutcome:
    """Swap two edges of the complete k-partite graph without changing any view.

    Needs at most ``k-1`` symbols so that each part holds two equal symbols
    and two parts share one; lowest indices win every tie.
    """
    G = complete_k_partite(k, m)
    symbols = _as_symbols(c)
    if len(symbols) != G.n:
        raise ValueError("assignment must cover every vertex")
    if len(set(symbols)) > k - 1:
        raise AttackInapplicable(f"assignment uses {len(set(symbols))} symbols, at least {k} defeats the pigeonhole")
    if not G.meta["crossing_ready"]:
        raise AttackInapplicable(f"parts of size {m} < max(k, 3)")
    _require_accepted(scheme, G, symbols)
    pairs = []
    for part in G.meta["parts"]:
        first = {}
        for v in part:
            a = symbols[v]
            if a in first:
                pairs.append((first[a], v, a))
                break
            first[a] = v
    i, j = next((i, j) for i, j in itertools.combinations(range(k), 2) if pairs[i][2] == pairs[j][2])
    (ui, vi, _), (uj, vj, _) = pairs[i], pairs[j]
    target = cross_edges(G, [(ui, uj), (vi, vj)], [(ui, vi), (uj, vj)])
    cert = CertificateAssignment(max(symbols) + 1, symbols)
    refs = {"G_k": (G, symbols, None)}
    wit = _witnesses(target, symbols, None, {v: ("G_k", v) for v in G.vertices}, refs, d)
    colorable = _colorable(target, k)
    return AttackOutcome(
        "crossing", d, target, cert, None, refs, wit,
        {"oracle": "chromatic_feasible", "k": k, "colorable": colorable, "confirmed": not colorable},
        {"k": k, "m": m, "parts": [i + 1, j + 1], "u_i": ui, "v_i": vi, "u_j": uj, "v_j": vj,
         "symbol": pairs[i][2], "target_accepted": _target_verdict(scheme, target, symbols)},
    )


# -- permutation mix ---------------------------------------------------------------


def permutation_mix_attack(r: int, s: int, sigma: Permutation, tau: Permutation, c_sigma, c_tau,
                           scheme: Scheme | None = None, d: int | None = None):
    """Glue the sigma end of one instance to the tau end of another.

    Returns ``None`` when the two assignments differ somewhere: then there
    is nothing to transfer.
    """
    if sigma == tau:
        raise PreconditionError("sigma and tau must differ")
    d = s // 2 if d is None else d
    if d < 1 or 2 * d > s:
        raise ValueError("need 1 <= d <= s/2")
    a, b = _as_symbols(c_sigma), _as_symbols(c_tau)
    n = 2 * r * s
    if len(a) != n or len(b) != n:
        raise ValueError(f"assignments must cover the {n} vertices of the fixed layout")
    ids = double_clique_path_ids(r, s)
    G_ss = permuted_double_clique_path(r, s, sigma, sigma)
    G_tt = permuted_double_clique_path(r, s, tau, tau)
    _require_accepted(scheme, G_ss, a, ids)
    _require_accepted(scheme, G_tt, b, ids)
    if a != b:
        return None
    target = permuted_double_clique_path(r, s, sigma, tau)
    refs = {"G(sigma,sigma)": (G_ss, a, ids), "G(tau,tau)": (G_tt, a, ids)}
    pairs = {}
    for v, (_copy, _i, p) in target.meta["names"].items():
        pairs[v] = ("G(sigma,sigma)" if p <= s - d else "G(tau,tau)", v)
    wit = _witnesses(target, a, ids, pairs, refs, d)
    colorable = _colorable(target, r)
    return AttackOutcome(
        "permutation-mix", d, target, CertificateAssignment(max(a) + 1, a), ids, refs, wit,
        {"oracle": "chromatic_feasible", "k": r, "colorable": colorable, "confirmed": not colorable},
        {"r": r, "s": s, "sigma": str(sigma), "tau": str(tau),
         "target_accepted": _target_verdict(scheme, target, a, ids)},
    )


# -- period attack ---------------------------------------------------------------------


def find_repetition(symbols, t: int, d: int):
    """Lowest ``(i, j)``, ``1 <= i < j <= t-2d+1``, with equal ``2d``-windows."""
    width = 2 * d
    seen = {}
    best = None
    for pos in range(1, t - width + 2):
        window = tuple(symbols[pos:pos + width])
        if window in seen:
            cand = (seen[window], pos)
            if best is None or cand < best:
                best = cand
        else:
            seen[window] = pos
    return best


def period_attack(t: int, d: int, c, scheme: Scheme | None = None):
    """Wrap a repeated window of the labeled path into an unlabeled cycle.

    Returns ``None`` when no ``2d``-window repeats. Certificates at
    positions 0 and t only enter through the windows that contain them.
    """
    if not 2 * d < t:
        raise ValueError("period attack needs d < t/2")
    P = labeled_path(t)
    symbols = _as_symbols(c)
    if len(symbols) != t + 1:
        raise ValueError("assignment must cover u_0..u_t")
    _require_accepted(scheme, P, symbols)
    rep = find_repetition(symbols, t, d)
    if rep is None:
        return None
    i, j = rep
    r = j - i
    if d == 1 and r == 1:
        length, source = 3, [i + 1] * 3
    elif d == 1 and r == 2:
        length, source = 4, [i + 1, i + 2, i + 1, i + 2]
    elif d == 1:
        # cycle u_i..u_{j-1}; the vertex carrying c(u_i) plays u_j
        length, source = r, [j] + list(range(i + 1, j))
    else:
        length = r * (2 * d + 1)
        source = [i + d + (ell % r) for ell in range(length)]
    certs = [symbols[p] for p in source]
    target, cert = unlabeled_cycle(length, certs, max(symbols) + 1)
    refs = {"P": (P, symbols, None)}
    wit = _witnesses(target, cert.symbols, None, {v: ("P", source[v]) for v in target.vertices}, refs, d)
    dominated = is_dominating_at_distance(target, t)
    return AttackOutcome(
        "period", d, target, cert, None, refs, wit,
        {"oracle": "is_dominating_at_distance", "t": t, "dominating": dominated, "confirmed": not dominated},
        {"t": t, "i": i, "j": j, "period": r, "cycle_length": length,
         "target_accepted": _target_verdict(scheme, target, cert.symbols)},
    )


# -- half-graph attack -----------------------------------------------------------------


def half_graph_attack(delta: int, c, scheme: Scheme | None = None, d: int = 1):
    """Two copies of the half graph with the surgery at a repeated v-symbol.

    Returns ``None`` when the ``v`` side carries ``delta`` distinct symbols.
    """
    B = half_graph(delta)
    symbols = _as_symbols(c)
    if len(symbols) != B.n:
        raise ValueError("assignment must cover the half graph")
    _require_accepted(scheme, B, symbols)
    v = lambda i, copy=0: half_graph_index(delta, "v", i, copy)  # noqa: E731
    rep = next(
        ((j1, j2) for j1, j2 in itertools.combinations(range(1, delta + 1), 2)
         if symbols[v(j1)] == symbols[v(j2)]),
        None,
    )
    if rep is None:
        return None
    j1, j2 = rep
    target = broken_half_graph_pair(delta, j1, j2)
    doubled = symbols + symbols
    pairs = {x: ("B", x % (2 * delta)) for x in target.vertices}
    pairs[v(j2, 0)] = ("B", v(j1))
    pairs[v(j1, 1)] = ("B", v(j2))
    refs = {"B": (B, symbols, None)}
    wit = _witnesses(target, doubled, None, pairs, refs, d)
    matching = find_perfect_matching(target)
    hall = target.meta["hall_set"]
    nbhd = sorted(set().union(*(target.neighbors(x) for x in hall)))
    names = target.meta["names"]
    return AttackOutcome(
        "half-graph", d, target, CertificateAssignment(max(symbols) + 1, doubled), None, refs, wit,
        {"oracle": "find_perfect_matching", "perfect_matching": matching is not None,
         "hall_set": [names[x] for x in hall], "hall_neighborhood": [names[x] for x in nbhd],
         "confirmed": matching is None and len(nbhd) < len(hall)},
        {"delta": delta, "j1": j1, "j2": j2,
         "removed": [[names[a], names[b]] for a, b in target.meta["removed"]],
         "added": [[names[a], names[b]] for a, b in target.meta["added"]],
         "target_accepted": _target_verdict(scheme, target, doubled)},
    )
