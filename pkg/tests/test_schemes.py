import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locert.errors import PreconditionError
from locert.families import (
    Permutation,
    complete_graph,
    complete_k_partite,
    cycle,
    gnp,
    grid,
    half_graph,
    half_graph_ids,
    half_graph_index,
    labeled_path,
    path,
    permuted_double_clique_path,
    random_two_tree,
)
from locert.graph import CertificateAssignment, Graph, IdentifierAssignment, bfs_distances
from locert.oracles import chromatic_feasible, find_perfect_matching, is_matching_coloring, is_proper_coloring
from locert.schemes import (
    color_values,
    coloring_scheme,
    decode_constructive_matching,
    domination_d1_scheme,
    domination_scheme,
    equal_certificates,
    make_scheme,
    matching_scheme,
    prove_coloring,
    prove_domination,
    prove_domination_d1,
    prove_matching,
    prove_two_certificates,
    prove_uniquely_colorable,
    recover_distances,
    spaced_set,
    two_certificate_assignment,
    two_certificate_scheme,
    uniquely_colorable_scheme,
    verify_all,
)
from locert.words import scheme_word


def test_verify_all_examples():
    s = coloring_scheme(3)
    assert verify_all(s, complete_graph(3), (0, 1, 2)).accepted
    v = verify_all(coloring_scheme(2), path(2), (0, 0))
    assert not v.accepted and v.rejecting_vertices == {0, 1}
    with pytest.raises(ValueError):
        verify_all(coloring_scheme(2), path(2), CertificateAssignment(3, (0, 2)))
    with pytest.raises(ValueError):
        verify_all(coloring_scheme(2), path(2), (0, 5))


def test_verdict_json():
    v = verify_all(coloring_scheme(2), path(3), (0, 0, 1))
    assert v.to_json() == {"accepted": False, "rejecting_vertices": [0, 1]}
    assert len(v.to_json(per_vertex=True)["decisions"]) == 3


def test_stop_at_first_reject():
    v = verify_all(coloring_scheme(2), path(4), (0, 0, 0, 0), stop_at_first_reject=True)
    assert len(v.decisions) == 1 and not v.accepted


def test_prove_coloring_examples():
    c = prove_coloring(complete_graph(3), 3)
    assert sorted(c.symbols) == [0, 1, 2]
    K33 = complete_k_partite(2, 3)
    c = prove_coloring(K33, 2)
    assert len(set(c.symbols[:3])) == 1 and c.symbols[0] != c.symbols[3]
    ident = Permutation.identity(3)
    G = permuted_double_clique_path(3, 5, ident, ident)
    assert verify_all(coloring_scheme(3), G, prove_coloring(G, 3)).accepted
    with pytest.raises(PreconditionError):
        prove_coloring(cycle(5), 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.floats(0.2, 0.7), st.integers(0, 10 ** 6), st.integers(2, 3))
def test_coloring_decoding_soundness(n, p, seed, k):
    G = gnp(n, p, seed)
    s = coloring_scheme(k)
    for certs in itertools.product(range(k), repeat=n):
        if verify_all(s, G, certs, stop_at_first_reject=True).accepted:
            assert is_proper_coloring(G, list(certs))


def _relabel(G, c, perm):
    H = G.relabel(perm)
    hc = [0] * G.n
    for v in G.vertices:
        hc[perm[v]] = c[v]
    return H, hc


def _decision_multiset(s, G, c):
    return sorted((d.accepted, d.step) for d in verify_all(s, G, c).decisions)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_anonymity_under_relabeling(seed):
    rng = random.Random(seed)
    G = labeled_path(8)
    cases = [
        (coloring_scheme(3), gnp(8, 0.4, seed)),
        (domination_d1_scheme(8), G),
        (domination_scheme(8, 2), G),
        (matching_scheme(3), gnp(8, 0.4, seed)),
    ]
    for s, H in cases:
        c = [rng.randrange(s.alphabet_size) for _ in H.vertices]
        perm = list(range(H.n))
        rng.shuffle(perm)
        K, kc = _relabel(H, c, perm)
        assert _decision_multiset(s, H, c) == _decision_multiset(s, K, kc)


def test_anonymity_digit_code():
    rng = random.Random(5)
    s = uniquely_colorable_scheme(2, 11)
    G = cycle(30)
    c = list(prove_uniquely_colorable(G, 2, 11).symbols)
    for _ in range(3):
        perm = list(range(G.n))
        rng.shuffle(perm)
        K, kc = _relabel(G, c, perm)
        assert _decision_multiset(s, G, c) == _decision_multiset(s, K, kc)


# -- uniquely colourable ---------------------------------------------------------


def test_uniquely_colorable_parameters():
    s = uniquely_colorable_scheme(3, 11)
    assert s.alphabet_size == 4 and s.param("delta") == 1 and s.param("f") == 3
    assert uniquely_colorable_scheme(9, 20).alphabet_size == 4  # delta 2, f = 3
    with pytest.raises(ValueError):
        uniquely_colorable_scheme(3, 10)


def test_uniquely_colorable_on_double_clique_path():
    ident = Permutation.identity(3)
    G = permuted_double_clique_path(3, 30, ident, ident)
    c = prove_uniquely_colorable(G, 3, 11)
    assert set(c.symbols) <= {0, 1, 2, 3}
    s = uniquely_colorable_scheme(3, 11)
    assert verify_all(s, G, c).accepted
    a = color_values(s, G, c)
    assert is_proper_coloring(G, [a[v] for v in G.vertices])


def test_uniquely_colorable_even_cycle():
    G = cycle(60)
    s = uniquely_colorable_scheme(2, 11)
    assert verify_all(s, G, prove_uniquely_colorable(G, 2, 11)).accepted


def test_uniquely_colorable_small_component_shortcut():
    s = uniquely_colorable_scheme(2, 11)
    assert verify_all(s, cycle(6), [0] * 6).accepted
    assert not verify_all(s, cycle(7), [0] * 7).accepted


def test_uniquely_colorable_rejects_odd_cycle():
    G = cycle(61)
    s = uniquely_colorable_scheme(2, 11)
    rng = random.Random(0)
    structured = [prove_uniquely_colorable(cycle(60), 2, 11).symbols + (0,)]
    structured += [tuple([2] + [0] * 60), tuple([0] * 61), tuple([1] * 61)]
    with pytest.raises(PreconditionError):
        prove_uniquely_colorable(G, 2, 11)
    for certs in structured + [tuple(rng.randrange(3) for _ in range(61)) for _ in range(200)]:
        assert not verify_all(s, G, certs, stop_at_first_reject=True).accepted


def test_uniquely_colorable_prover_precondition():
    # balls of C_4 at distance 9 see the whole 4-cycle, which is uniquely 2-colorable,
    # but three colours give a 4-cycle several partitions
    with pytest.raises(PreconditionError):
        prove_uniquely_colorable(cycle(4), 3, 11)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_uniquely_colorable_acceptance_yields_coloring(seed):
    rng = random.Random(seed)
    G = cycle(40)
    s = uniquely_colorable_scheme(2, 11)
    c = list(prove_uniquely_colorable(G, 2, 11).symbols)
    for _ in range(rng.randrange(3)):
        c[rng.randrange(40)] = rng.randrange(3)
    if verify_all(s, G, c).accepted:
        a = color_values(s, G, c)
        assert is_proper_coloring(G, [a[v] for v in G.vertices])


# -- two certificates -------------------------------------------------------------


def test_two_certificate_parameters():
    s = two_certificate_scheme(2)
    assert s.alphabet_size == 2 and s.distance == 17 and s.param("delta") == 1
    assert two_certificate_scheme(5).distance == 9 * 3 + 8


def test_two_certificates_even_cycle():
    G = cycle(100)
    c = prove_two_certificates(G, 2)
    assert set(c.symbols) <= {0, 1} and c.alphabet_size == 2
    s = two_certificate_scheme(2)
    assert verify_all(s, G, c).accepted
    a = color_values(s, G, c)
    assert is_proper_coloring(G, [a[v] for v in G.vertices])


def test_two_certificates_layout():
    G = cycle(100)
    c = prove_two_certificates(G, 2).symbols
    X = spaced_set(G, 11)
    dist = bfs_distances(G, X)
    for v in G.vertices:
        if dist[v] <= 1:
            assert c[v] == 1
        elif dist[v] == 2:
            assert c[v] == 0


def test_two_certificates_reject_odd_cycle():
    G = cycle(101)
    s = two_certificate_scheme(2)
    rng = random.Random(1)
    fake = [v % 2 for v in G.vertices]
    candidates = [two_certificate_assignment(G, 2, fake).symbols]
    candidates += [tuple(rng.randrange(2) for _ in G.vertices) for _ in range(200)]
    for certs in candidates:
        assert not verify_all(s, G, certs, stop_at_first_reject=True).accepted


def test_spaced_set_spacing():
    G = cycle(50)
    X = spaced_set(G, 7)
    dist = bfs_distances(G, X)
    assert max(dist.values()) <= 6
    for a, b in itertools.combinations(X, 2):
        assert bfs_distances(G, [a])[b] >= 7


# -- domination ---------------------------------------------------------------------


def test_domination_d1_examples():
    G = labeled_path(4)
    c = prove_domination_d1(G, 4)
    s = domination_d1_scheme(4)
    assert s.alphabet_size == 6 and verify_all(s, G, c).accepted
    star = Graph.from_edges(5, [(0, i) for i in range(1, 5)], labels=[1, 0, 0, 0, 0])
    v = verify_all(domination_d1_scheme(7), star, prove_domination_d1(star, 7))
    assert v.accepted and {d.step for d in v.decisions} == {"(i)"}


def test_domination_d1_unlabeled_path_has_no_certificate():
    s = domination_d1_scheme(4)
    P5 = path(5, labels=[0] * 5)
    for certs in itertools.product(range(6), repeat=5):
        assert not verify_all(s, P5, certs, stop_at_first_reject=True).accepted


def test_domination_general_examples():
    G = labeled_path(8)
    s = domination_scheme(8, 2)
    assert s.alphabet_size == 6
    c = prove_domination(G, 8, 2)
    assert verify_all(s, G, c).accepted
    assert len(set(c.symbols)) <= 6


def test_domination_large_d_accepts_at_first_step():
    G = labeled_path(3)
    s = domination_scheme(3, 3)
    v = verify_all(s, G, prove_domination(G, 3, 3))
    assert v.accepted and {d.step for d in v.decisions} == {"(i)"}


@pytest.mark.parametrize("t,d", [(6, 1), (9, 1), (16, 1), (8, 2), (27, 2), (20, 3)])
def test_domination_digit_law(t, d):
    G = labeled_path(t)
    s = domination_scheme(t, d)
    c = prove_domination(G, t, d)
    assert verify_all(s, G, c).accepted
    word = scheme_word(t, d + 1)
    tau = s.param("tau")
    for i in range(1, t + 1):
        assert c.symbols[i] % tau + 1 == word[i]
    assert recover_distances(s, G, c) == {v: v for v in G.vertices}


def test_domination_symbol_count():
    for t, d in [(8, 1), (8, 2), (30, 2), (64, 2)]:
        c = prove_domination(labeled_path(t), t, d)
        tau = scheme_word(t, d + 1).alphabet_size
        assert len(set(c.symbols)) <= 3 * tau


def test_domination_on_other_graphs():
    for seed in range(4):
        G = random_two_tree(20, seed=seed)
        labels = [1 if v % 7 == 0 else 0 for v in G.vertices]
        G = Graph.from_edges(G.n, G.edge_list(), labels)
        for d in (1, 2):
            s = domination_scheme(9, d)
            assert verify_all(s, G, prove_domination(G, 9, d)).accepted
        assert verify_all(domination_d1_scheme(9), G, prove_domination_d1(G, 9)).accepted


def test_domination_prover_precondition():
    with pytest.raises(PreconditionError):
        prove_domination_d1(labeled_path(6), 5)


def test_footnote_flag():
    G = labeled_path(4)
    c = list(prove_domination_d1(G, 4).symbols)
    plain, strict = domination_d1_scheme(4), domination_d1_scheme(4, footnote=True)
    assert verify_all(strict, G, c).accepted
    tau = plain.param("tau")
    c[1] = c[1] - c[1] % tau + (c[1] % tau + 1) % tau  # change the letter of u_1
    assert verify_all(plain, G, c).rejecting_vertices.isdisjoint({0, 1})
    assert 1 in verify_all(strict, G, c).rejecting_vertices


# -- matching -----------------------------------------------------------------------


def test_matching_examples():
    one = Graph.from_edges(2, [(0, 1)])
    c = prove_matching(one)
    assert c.symbols == (0, 0) and verify_all(matching_scheme(1), one, c).accepted
    B = half_graph(5)
    c = prove_matching(B)
    assert c.alphabet_size <= 9 and verify_all(matching_scheme(c.alphabet_size), B, c).accepted
    G = grid(4, 4)
    c = prove_matching(G, "contraction", 4)
    assert c.alphabet_size <= 4 and verify_all(matching_scheme(4), G, c).accepted
    with pytest.raises(PreconditionError):
        prove_matching(complete_graph(3))
    with pytest.raises(ValueError):
        prove_matching(one, "other")


def _small_graphs():
    yield path(4)
    yield cycle(6)
    yield grid(2, 3)
    yield half_graph(3)
    yield complete_graph(4)
    for seed in range(6):
        yield gnp(8, 0.35, seed)
    yield gnp(10, 0.3, 11)


@pytest.mark.parametrize("C", [2, 3])
def test_matching_decoding_soundness_exhaustive(C):
    s = matching_scheme(C)
    for G in _small_graphs():
        if C ** G.n > 70000:
            continue
        for certs in itertools.product(range(C), repeat=G.n):
            if verify_all(s, G, certs, stop_at_first_reject=True).accepted:
                M = decode_constructive_matching(G, None, certs, equal_certificates)
                assert M is not None and M.perfect
                assert is_matching_coloring(G, list(certs)).edges == M.edges


def test_matching_decoding_soundness_alphabet_four():
    s = matching_scheme(4)
    for G in (path(4), cycle(6), grid(2, 4), half_graph(4), gnp(8, 0.4, 3)):
        for certs in itertools.product(range(4), repeat=G.n):
            if verify_all(s, G, certs, stop_at_first_reject=True).accepted:
                M = decode_constructive_matching(G, None, certs, equal_certificates)
                assert M is not None and M.perfect


def test_decode_constructive_examples():
    G = half_graph(4)
    c = prove_matching(G)
    assert decode_constructive_matching(G, None, c, equal_certificates) == find_perfect_matching(G)
    assert decode_constructive_matching(complete_graph(3), None, (0, 1, 2), lambda *a: True) is None
    with pytest.raises(ValueError):
        decode_constructive_matching(path(2), IdentifierAssignment((1, 2)), (0, 0),
                                     lambda ia, ca, ib, cb: ia < ib)


def test_decoded_matching_reveals_permutation():
    delta = 4
    B = half_graph(delta)
    c = prove_matching(B)
    u = lambda i: half_graph_index(delta, "u", i)  # noqa: E731
    v = lambda i: half_graph_index(delta, "v", i)  # noqa: E731
    for sigma in Permutation.all(delta):
        ids = half_graph_ids(delta, sigma)
        M = decode_constructive_matching(B, ids, c, equal_certificates)
        assert M.edges == {tuple(sorted((u(i), v(i)))) for i in range(1, delta + 1)}
        mate = M.partner()
        recovered = tuple(ids[mate[v(i)]] for i in range(1, delta + 1))
        assert recovered == sigma.images


def test_make_scheme():
    assert make_scheme("coloring", {"k": "3"}).alphabet_size == 3
    assert make_scheme("domination-d1", {"t": "4", "footnote": "1"}).param("footnote")
    with pytest.raises(ValueError):
        make_scheme("nope", {})
    with pytest.raises(ValueError):
        make_scheme("coloring", {})


def test_prover_completeness_corpus():
    for G in (cycle(8), grid(3, 4), complete_k_partite(3, 3), random_two_tree(15, seed=2)):
        k = next(k for k in range(1, 5) if chromatic_feasible(G, k) is not None)
        assert verify_all(coloring_scheme(k), G, prove_coloring(G, k)).accepted
    for G in (cycle(8), grid(3, 4), half_graph(6), path(10)):
        c = prove_matching(G)
        assert verify_all(matching_scheme(c.alphabet_size), G, c).accepted
