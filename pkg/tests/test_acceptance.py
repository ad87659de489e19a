"""Acceptance criteria 1-11, each timed against its limit.

Criteria 2, 6 and 8 quantify over accepting assignments of sound verifiers
with too few symbols; there are none, so each test also runs the attack on
every enumerated (or sampled) assignment without a scheme gate, which is
where the witnesses and oracles actually get exercised.
"""

import itertools
import random

import pytest

from locert.adversary import (
    crossing_attack,
    exhaustive_search,
    half_graph_attack,
    period_attack,
    sample_search,
)
from locert.experiment import ExperimentConfig, run_experiment
from locert.families import (
    Permutation,
    broken_half_graph_pair,
    complete_k_partite,
    cycle,
    grid,
    half_graph,
    labeled_path,
    path,
    permuted_double_clique_path,
    random_tree,
    random_two_tree,
)
from locert.graph import Graph, bfs_distances
from locert.oracles import (
    all_perfect_matchings,
    chromatic_feasible,
    contraction_matching_coloring,
    count_perfect_matchings,
    find_perfect_matching,
    greedy_matching_coloring,
    is_dominating_at_distance,
    is_matching_coloring,
    is_proper_coloring,
)
from locert.schemes import (
    color_values,
    coloring_scheme,
    domination_d1_scheme,
    matching_scheme,
    prove_domination_d1,
    prove_two_certificates,
    recover_distances,
    spaced_set,
    two_certificate_assignment,
    two_certificate_scheme,
    verify_all,
)
from locert.words import de_bruijn_word, integer_root_ceil

pytestmark = pytest.mark.acceptance


def test_criterion_01_coloring_equivalence(criterion):
    with criterion(1, "G_{3,5}(sigma,tau) 3-colorable iff sigma = tau, 36 pairs", 10):
        perms = Permutation.all(3)
        assert len(perms) == 6
        for sigma, tau in itertools.product(perms, repeat=2):
            G = permuted_double_clique_path(3, 5, sigma, tau)
            assert (chromatic_feasible(G, 3) is not None) == (sigma == tau)


def _few_symbol_assignments(k, n):
    for c in itertools.product(range(k), repeat=n):
        if len(set(c)) <= k - 1:
            yield c


def test_criterion_02_crossing_attack(criterion):
    with criterion(2, "crossing attack on G_k, k in {2,3,4}", 60):
        for k in (2, 3):
            m = max(k, 3)
            G = complete_k_partite(k, m)
            s = coloring_scheme(k)
            rep = exhaustive_search(s, G, collect=True, max_distinct=k - 1)
            assert rep.accepting == []
            count = 0
            for c in _few_symbol_assignments(k, G.n):
                out = crossing_attack(k, m, c)
                assert out.views_preserved and out.no_certificate["confirmed"]
                assert len(out.witnesses) == G.n
                count += 1
            # constant assignments for k=2; those missing a symbol for k=3
            assert count == {2: 2, 3: 3 * 2 ** 9 - 3}[k]
        G = complete_k_partite(4, 4)
        s = coloring_scheme(4)
        rng = random.Random(2024)
        for _ in range(10 ** 4):
            palette = rng.sample(range(4), 3)
            c = tuple(rng.choice(palette) for _ in G.vertices)
            assert not verify_all(s, G, c, stop_at_first_reject=True).accepted
            out = crossing_attack(4, 4, c)
            assert out.verified and len(out.witnesses) == 16


def test_criterion_03_de_bruijn(criterion):
    with criterion(3, "de Bruijn words, k <= 6, n <= 4", 5):
        for k in range(1, 7):
            for n in range(1, 5):
                w = de_bruijn_word(k, n)
                assert len(w) == k ** n
                factors = [w.letters[p:p + n] for p in range(len(w) - n + 1)]
                assert len(factors) == len(set(factors))


def _labeled_by_spacing(G: Graph, t: int) -> Graph:
    S = set(spaced_set(G, t + 1))
    return Graph.from_edges(G.n, G.edge_list(), [1 if v in S else 0 for v in G.vertices])


def _domination_corpus(t):
    yield labeled_path(t)
    for n, seed in ((20, 1), (45, 2), (60, 3)):
        yield _labeled_by_spacing(random_tree(n, seed=seed), t)
    for n in (t + 2, 2 * t + 5, 57):
        yield _labeled_by_spacing(cycle(n), t)


def test_criterion_04_domination_upper_bound(criterion):
    with criterion(4, "domination d=1 prover on paths, trees, cycles, t in {4,9,16}", 30):
        for t in (4, 9, 16):
            s = domination_d1_scheme(t)
            bound = 3 * integer_root_ceil(t, 2)
            assert s.alphabet_size == bound
            for G in _domination_corpus(t):
                assert is_dominating_at_distance(G, t)
                c = prove_domination_d1(G, t)
                assert len(set(c.symbols)) <= bound
                assert verify_all(s, G, c).accepted
                assert recover_distances(s, G, c) == bfs_distances(G, G.labeled_set)


def test_criterion_05_domination_soundness(criterion):
    with criterion(5, "t=4 verifier, unlabeled P_5, C=6: no accepting assignment", 5):
        rep = exhaustive_search(domination_d1_scheme(4), path(5, labels=[0] * 5), 6)
        assert rep.accepting_assignment is None


def test_criterion_06_period_attack(criterion):
    with criterion(6, "period attack, t=10, d=1, all 2^11 two-symbol assignments", 30):
        s = domination_d1_scheme(10)
        P = labeled_path(10)
        rejected = 0
        for c in itertools.product(range(2), repeat=11):
            accepted = verify_all(s, P, c, stop_at_first_reject=True).accepted
            rejected += not accepted
            out = period_attack(10, 1, c)
            assert out is not None and out.views_preserved
            assert out.no_certificate["confirmed"]
        assert rejected == 2 ** 11


def test_criterion_07_matching_bounds(criterion):
    with criterion(7, "half graphs: unique matching, broken pairs, greedy 2*delta-1", 30):
        for delta in range(2, 8):
            B = half_graph(delta)
            assert count_perfect_matchings(B) == 1
            for j1, j2 in itertools.combinations(range(1, delta + 1), 2):
                assert find_perfect_matching(broken_half_graph_pair(delta, j1, j2)) is None
            M = find_perfect_matching(B)
            phi = greedy_matching_coloring(B, M)
            assert len(set(phi)) <= 2 * delta - 1
            assert is_matching_coloring(B, phi).edges == M.edges
        assert count_perfect_matchings(half_graph(8)) == 1


def test_criterion_08_half_graph_attack(criterion):
    with criterion(8, "half-graph attack, delta in {3,4}, all (delta-1)-symbol assignments", 60):
        for delta in (3, 4):
            B = half_graph(delta)
            s = matching_scheme(delta - 1)
            rep = exhaustive_search(s, B, collect=True)
            assert rep.accepting == []
            for c in itertools.product(range(delta - 1), repeat=2 * delta):
                out = half_graph_attack(delta, c)
                assert out is not None and out.views_preserved
                assert out.no_certificate["confirmed"]
                assert len(out.no_certificate["hall_neighborhood"]) < len(out.no_certificate["hall_set"])


def test_criterion_09_contraction_coloring(criterion):
    with criterion(9, "contraction colorings: grids with 4 symbols, 2-trees with 3", 30):
        G = grid(4, 4)
        matchings = all_perfect_matchings(G)[:10]
        assert len(matchings) == 10
        for M in matchings:
            phi = contraction_matching_coloring(G, M, "exact", 4)
            assert phi is not None and len(set(phi)) <= 4
            assert is_matching_coloring(G, phi).edges == M.edges
        found = 0
        for seed in range(200):
            T = random_two_tree(16, seed=seed)
            M = find_perfect_matching(T)
            if M is None:
                continue
            phi = contraction_matching_coloring(T, M, "degeneracy", 3)
            assert phi is not None and len(set(phi)) <= 3
            assert is_matching_coloring(T, phi).edges == M.edges
            found += 1
            if found == 10:
                break
        assert found == 10


def test_criterion_10_two_certificates(criterion):
    with criterion(10, "two-certificate scheme, k=2: C_100 accepted, C_101 rejected", 60):
        s = two_certificate_scheme(2)
        assert s.distance == 17
        even = cycle(100)
        c = prove_two_certificates(even, 2)
        assert verify_all(s, even, c).accepted
        a = color_values(s, even, c)
        assert is_proper_coloring(even, [a[v] for v in even.vertices])
        odd = cycle(101)
        mimics = [two_certificate_assignment(odd, 2, [((v - shift) % 101) % 2 for v in odd.vertices])
                  for shift in range(0, 101, 5)]
        rep = sample_search(s, odd, 10 ** 4, seed=10, extra=mimics)
        assert rep.assignments_examined == 10 ** 4 + len(mimics)
        for accepted in rep.accepting:
            a = color_values(s, odd, accepted)
            assert is_proper_coloring(odd, [a[v] for v in odd.vertices])
        assert rep.accepting == []


def test_criterion_11_determinism(criterion, tmp_path):
    configs = [
        {"kind": "search", "family": "complete_k_partite", "family_params": {"k": 3, "m": 3},
         "scheme": "coloring", "scheme_params": {"k": 3}},
        {"kind": "search", "family": "path", "family_params": {"n": 5, "labeled": 1},
         "scheme": "domination-d1", "scheme_params": {"t": 4}},
        {"kind": "table", "table_property": "domination", "table_values": [2, 4, 5]},
    ]
    with criterion(11, "byte-identical reports with 1 and 2 workers", 10):
        for i, base in enumerate(configs):
            outputs = []
            for workers in (1, 2):
                stem = tmp_path / f"c{i}w{workers}"
                cfg = ExperimentConfig.from_json({
                    **base, "workers": workers, "seed": 7, "json_out": f"{stem}.json",
                    "csv_out": f"{stem}.csv", "figure_out": f"{stem}.png",
                })
                run_experiment(cfg)
                files = [stem.with_suffix(".json"), stem.with_suffix(".csv")]
                if base["kind"] == "table":
                    files.append(stem.with_suffix(".png"))
                outputs.append([f.read_bytes() for f in files])
            assert outputs[0] == outputs[1]
