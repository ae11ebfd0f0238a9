import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eyefree.constructions import b_construction, r_construction
from eyefree.igraph import BLUE, GREEN, RED, WHITE, Graph, IGraph, color_swap
from eyefree.pattern import (
    Pattern,
    check_findIa,
    check_findIb,
    contains,
    count_copies,
    eye,
    greedy_whiten,
    is_embedding,
    is_free,
    transversal_independent,
)

from .conftest import random_igraph
from .oracles import all_injections_embeds, brute_copies


def random_pattern(rng, h):
    pairs = list(combinations(range(h), 2))
    return Pattern(h, frozenset(e for e in pairs if rng.random() < 0.5))


def test_eye_shapes():
    H = eye(2, 2)
    assert H.h == 4 and len(H.edges) == 5
    P = eye(1, 2)
    assert P.edges == frozenset({(0, 1), (0, 2)})
    H = eye(2, 3)
    assert H.h * (H.h - 1) // 2 == 10 and 10 - len(H.edges) == 3
    blue = [(u, v) for u, v in combinations(range(5), 2) if not H.is_red(u, v)]
    assert set(blue) == {(2, 3), (2, 4), (3, 4)}
    for bad in [(0, 2), (1, 1), (2, 0)]:
        with pytest.raises(ValueError):
            eye(*bad)


@pytest.mark.parametrize("a,b", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_green_clique_contains_eye(a, b):
    H = eye(a, b)
    K = IGraph.constant(a + b, GREEN)
    emb = contains(K, H)
    assert emb is not None and is_embedding(K, H, emb)
    assert count_copies(K, H) == 1
    assert count_copies(IGraph.constant(a + b + 1, GREEN), H) == a + b + 1


@pytest.mark.parametrize("a,b", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_constructions_are_eye_free(a, b):
    H = eye(a, b)
    for n in range(1, 9):
        assert contains(b_construction(n, a), H) is None
        assert contains(r_construction(n, b - 1), H) is None


def test_contains_matches_oracle():
    rng = random.Random(3)
    for _ in range(400):
        n = rng.randint(1, 7)
        h = rng.randint(1, min(5, n))
        C = random_igraph(rng, n, white=True)
        H = random_pattern(rng, h)
        emb = contains(C, H)
        assert (emb is not None) == all_injections_embeds(C, h, set(H.edges))
        if emb is not None:
            assert is_embedding(C, H, emb)
        assert count_copies(C, H) == brute_copies(C, h, set(H.edges))
        assert (emb is None) == (count_copies(C, H) == 0)


def test_contains_restrictions():
    H = eye(1, 2)
    C = IGraph.from_upper(4, [RED, RED, BLUE, BLUE, BLUE, BLUE])
    assert contains(C, H) is not None
    assert contains(C, H, within=[1, 2, 3]) is None
    assert contains(C, H, through=3) is None
    assert contains(C, H, through=1) is not None


@settings(max_examples=80)
@given(st.integers(0, 2**31), st.integers(3, 7))
def test_monotone_under_green_and_white(seed, n):
    rng = random.Random(seed)
    C = random_igraph(rng, n)
    H = random_pattern(rng, rng.randint(2, min(4, n)))
    u, v = sorted(rng.sample(range(n), 2))
    before = contains(C, H) is not None
    if before:
        assert contains(C.recolor({(u, v): GREEN}), H) is not None
    else:
        assert contains(C.recolor({(u, v): WHITE}), H) is None


@settings(max_examples=80)
@given(st.integers(0, 2**31), st.integers(2, 7))
def test_swap_duality(seed, n):
    rng = random.Random(seed)
    C = random_igraph(rng, n, white=True)
    H = random_pattern(rng, rng.randint(1, min(5, n)))
    assert (contains(C, H) is None) == (contains(color_swap(C), H.swapped()) is None)


def test_pattern_text_round_trip():
    H = eye(2, 3)
    assert Pattern.from_text(H.to_text()) == H
    with pytest.raises(ValueError):
        Pattern.from_text("4\n0 1\n")


def test_greedy_whiten():
    H = eye(2, 2)
    B = b_construction(6, 2)
    assert greedy_whiten(B, H) == B
    W = greedy_whiten(IGraph.constant(4, GREEN), H)
    assert W.counts()[WHITE] >= 1 and is_free(W, H)
    rng = random.Random(11)
    for _ in range(100):
        C = random_igraph(rng, 8)
        W = greedy_whiten(C, H)
        assert count_copies(W, H) == 0
        # only whitening happened
        assert all(W.codes[i] in (C.codes[i], WHITE) for i in range(64))


def test_greedy_whiten_deterministic():
    rng = random.Random(5)
    C = random_igraph(rng, 7)
    assert greedy_whiten(C, eye(2, 2)) == greedy_whiten(C, eye(2, 2))


# forbidden configurations --------------------------------------------------

def blowup_plus(rng, parts_n, m, inside, extra):
    """Blowup with parts of size m (internally ``inside``, green across) and ``extra`` loose vertices."""
    n = parts_n * m + extra
    parts = [list(range(i * m, (i + 1) * m)) for i in range(parts_n)]
    cols = {}
    for i, P in enumerate(parts):
        for u, v in combinations(P, 2):
            cols[(u, v)] = inside
        for Q in parts[i + 1:]:
            for u in P:
                for v in Q:
                    cols[(u, v)] = GREEN
    for z in range(parts_n * m, n):
        for y in range(z):
            if (y, z) not in cols:
                cols[(y, z)] = rng.choice((RED, BLUE, GREEN))
    return IGraph.from_pairs(n, cols), parts


@pytest.mark.parametrize("a,b", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_findIa_exact_blowup_has_no_violation(a, b):
    G, parts = blowup_plus(random.Random(0), a, 4, BLUE, 0)
    assert check_findIa(G, parts, a, b).ok


def test_findIa_vertex_violation_gives_witness():
    rng = random.Random(1)
    for a, b in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        G, parts = blowup_plus(rng, a, 4, BLUE, 1)
        z = a * 4
        G = G.recolor({(y, z): RED for P in parts for y in P})
        rep = check_findIa(G, parts, a, b)
        assert not rep.ok
        for viol in rep.violations:
            assert is_embedding(G, eye(a, b), viol.witness)
        assert contains(G, eye(a, b)) is not None


def test_findIa_vertex_missing_a_part_is_silent():
    a, b = 2, 2
    G, parts = blowup_plus(random.Random(2), a, 4, BLUE, 1)
    z = 8
    changes = {(y, z): RED for y in parts[0]}
    changes.update({(y, z): BLUE for y in parts[1]})
    G = G.recolor(changes)
    assert not any(v.vertices == (z,) for v in check_findIa(G, parts, a, b).violations)


def test_findIb_vertex_violation_gives_witness():
    rng = random.Random(3)
    for a, b in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        G, parts = blowup_plus(rng, b - 1, a + 2, RED, 1)
        z = (b - 1) * (a + 2)
        changes = {(y, z): BLUE for P in parts for y in P}
        changes.update({(y, z): GREEN for y in parts[0]})
        G = G.recolor(changes)
        rep = check_findIb(G, parts, a, b)
        assert not rep.ok
        for viol in rep.violations:
            assert is_embedding(G, eye(a, b), viol.witness)


def test_find_checks_reject_bad_parts():
    G = IGraph.constant(4, RED)
    with pytest.raises(ValueError):
        check_findIa(G, [[0, 1], [2, 3]], 2, 2)
    with pytest.raises(ValueError):
        check_findIb(G, [[0, 1]], 2, 3)


# transversals ----------------------------------------------------------------

def test_transversal_empty_graph():
    parts = [[0, 1], [2, 3], [4, 5]]
    sel = transversal_independent(Graph(6, [0] * 6), parts)
    assert sel is not None and len(sel) == 3


def test_transversal_dense_graph_may_fail():
    n, m = 4, 2
    parts = [[0, 1], [2, 3]]
    G = Graph.from_edges(n, [(u, v) for u in parts[0] for v in parts[1]])
    assert G.edge_count() >= m * m
    assert transversal_independent(G, parts) is None


def test_transversal_sparse_t2():
    rng = random.Random(4)
    m, t, k = 12, 2, 3
    parts = [list(range(i * m, (i + 1) * m)) for i in range(k)]
    bound = (m / (2 * t)) ** 2
    for _ in range(30):
        edges = set()
        while len(edges) < int(bound) - 1:
            u, v = rng.sample(range(m * k), 2)
            edges.add((min(u, v), max(u, v)))
        G = Graph.from_edges(m * k, edges)
        sel = transversal_independent(G, parts, t)
        assert sel is not None
        for P in parts:
            assert len(set(sel) & set(P)) == t
        assert all(not G.has_edge(u, v) for u, v in combinations(sel, 2))


def test_transversal_unequal_parts_rejected():
    with pytest.raises(ValueError):
        transversal_independent(Graph(3, [0] * 3), [[0], [1, 2]])
