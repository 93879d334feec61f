from __future__ import annotations

import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerbounds.generators import fixture_names, gen_complete, gen_cycle, gen_path, load_fixture
from powerbounds.graph import (
    Graph,
    GraphError,
    closed_walk_counts,
    distance_matrix,
    encode_edge_list,
    encode_graph6,
    girth,
    graph_power,
    harmonic_mean_sk,
    is_bipartite,
    is_connected,
    is_k_partially_walk_regular,
    parse_edge_list,
    parse_graph6,
    read_graph6_stream,
    sphere_sizes,
)


@st.composite
def graphs(draw, max_n: int = 12):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def to_nx(G: Graph) -> nx.Graph:
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges())
    return H


# --- graph6 ---------------------------------------------------------------

def test_graph6_star():
    G = parse_graph6("D?{")
    assert G.n == 5
    assert sorted(G.edges()) == [(0, 4), (1, 4), (2, 4), (3, 4)]


def test_graph6_single_edge_and_empty():
    assert parse_graph6("A_").edges() == [(0, 1)]
    G = parse_graph6("B?")
    assert G.n == 3 and G.num_edges == 0


@pytest.mark.parametrize("bad", ["", "A", "A_?", "B\x7f", "D?{x"])
def test_graph6_malformed(bad):
    with pytest.raises(GraphError):
        parse_graph6(bad)


def test_graph6_header_accepted():
    assert parse_graph6(">>graph6<<A_").edges() == [(0, 1)]


@pytest.mark.parametrize("name", fixture_names())
def test_graph6_roundtrip_fixtures(name):
    G = load_fixture(name)
    assert parse_graph6(encode_graph6(G)).rows == G.rows


@given(graphs(max_n=70))
@settings(max_examples=60, deadline=None)
def test_graph6_roundtrip_random(G):
    assert parse_graph6(encode_graph6(G)).rows == G.rows


@given(graphs())
@settings(max_examples=40, deadline=None)
def test_graph6_matches_networkx(G):
    text = encode_graph6(G)
    H = nx.from_graph6_bytes(text.encode())
    assert sorted(tuple(sorted(e)) for e in H.edges()) == sorted(G.edges())


def test_graph6_stream_skips_blank_lines():
    gs = list(read_graph6_stream(["A_", "", "B?\n"]))
    assert [g.n for g in gs] == [2, 3]


# --- edge lists -----------------------------------------------------------

def test_edge_list_examples():
    P3 = parse_edge_list("3 2\n0 1\n1 2")
    assert P3.n == 3 and P3.edges() == [(0, 1), (1, 2)]
    K2 = parse_edge_list("2 1\n0 1")
    assert K2.n == 2 and K2.edges() == [(0, 1)]


def test_edge_list_rejects_self_loop_and_range():
    with pytest.raises(GraphError):
        parse_edge_list("0 0")
    with pytest.raises(GraphError):
        parse_edge_list("2 1\n0 5")


def test_edge_list_duplicates_collapse():
    G = parse_edge_list("0 1\n1 0\n0 1\n1 2")
    assert G.edges() == [(0, 1), (1, 2)]


def test_edge_list_roundtrip():
    G = load_fixture("petersen")
    assert parse_edge_list(encode_edge_list(G)).rows == G.rows


def test_graph_invariants_enforced():
    with pytest.raises(GraphError):
        Graph(2, (0b10, 0b00))  # asymmetric
    with pytest.raises(GraphError):
        Graph(1, (0b1,))  # loop
    with pytest.raises(GraphError):
        Graph(0, ())


# --- metrics --------------------------------------------------------------

def test_distance_examples():
    assert distance_matrix(gen_complete(3)).diameter == 1
    assert distance_matrix(load_fixture("petersen")).diameter == 2
    assert distance_matrix(gen_cycle(8)).diameter == 4


def test_disconnected_distance_sentinel():
    G = Graph.from_edges(4, [(0, 1), (2, 3)])
    D = distance_matrix(G)
    assert not D.connected
    assert math.isinf(D.diameter)
    assert not is_connected(G)
    # pairs in different components are never adjacent in any power
    assert not graph_power(G, 5).has_edge(0, 2)


@given(graphs())
@settings(max_examples=50, deadline=None)
def test_distances_match_networkx(G):
    D = distance_matrix(G)
    lengths = dict(nx.all_pairs_shortest_path_length(to_nx(G)))
    for u in range(G.n):
        for v in range(G.n):
            exp = lengths[u].get(v)
            if exp is None:
                assert math.isinf(D[u, v]) or D[u, v] >= G.n
            else:
                assert D[u, v] == exp


@given(graphs())
@settings(max_examples=40, deadline=None)
def test_distance_matrix_is_a_metric(G):
    D = distance_matrix(G)
    n = G.n
    for u in range(n):
        assert D[u, u] == 0
        for v in range(n):
            assert D[u, v] == D[v, u]
            for w in range(n):
                assert D[u, w] <= D[u, v] + D[v, w]


def test_graph_power_examples():
    C5 = gen_cycle(5)
    assert graph_power(C5, 2).num_edges == 10
    G = load_fixture("heawood")
    assert graph_power(G, 1) == G
    with pytest.raises(GraphError):
        graph_power(G, 0)


@given(graphs(), st.integers(1, 5))
@settings(max_examples=50, deadline=None)
def test_graph_power_definition(G, k):
    P = graph_power(G, k)
    D = distance_matrix(G)
    for u in range(G.n):
        for v in range(G.n):
            assert P.has_edge(u, v) == (u != v and D[u, v] < G.n and D[u, v] <= k)


@given(graphs())
@settings(max_examples=40, deadline=None)
def test_graph_power_edge_count_monotone(G):
    counts = [graph_power(G, k).num_edges for k in range(1, G.n + 1)]
    assert counts == sorted(counts)
    D = distance_matrix(G)
    if D.connected and G.n > 1:
        diam = int(D.diameter)
        assert all(c == counts[diam - 1] for c in counts[diam - 1:])


def test_girth_examples():
    assert girth(load_fixture("heawood")) == 6
    assert girth(load_fixture("coxeter")) == 7
    assert math.isinf(girth(gen_path(3)))


@given(graphs())
@settings(max_examples=50, deadline=None)
def test_girth_matches_networkx(G):
    exp = nx.girth(to_nx(G))
    assert girth(G) == exp


def test_sphere_sizes_examples():
    assert sphere_sizes(load_fixture("heawood"), 2) == [10] * 14
    assert sphere_sizes(gen_cycle(8), 0) == [1] * 8
    assert sphere_sizes(gen_cycle(8), 2) == [5] * 8


def test_harmonic_mean_examples():
    assert harmonic_mean_sk(load_fixture("heawood"), 2) == pytest.approx(10)
    assert harmonic_mean_sk(gen_path(3), 1) == pytest.approx(9 / 4)
    assert harmonic_mean_sk(gen_cycle(9), 3) == pytest.approx(7)


def test_harmonic_mean_rejects_disconnected():
    with pytest.raises(GraphError):
        harmonic_mean_sk(Graph.from_edges(4, [(0, 1), (2, 3)]), 1)


def test_walk_regularity_examples():
    assert is_k_partially_walk_regular(gen_path(5), 1)
    assert is_k_partially_walk_regular(load_fixture("frucht"), 2)
    assert not is_k_partially_walk_regular(gen_path(3), 2)
    assert is_k_partially_walk_regular(load_fixture("petersen"), 8)


def test_closed_walk_counts_triangle():
    walks = closed_walk_counts(gen_complete(3), 3)
    assert walks[0] == [1, 1, 1]
    assert walks[1] == [0, 0, 0]
    assert walks[2] == [2, 2, 2]
    assert walks[3] == [2, 2, 2]


@given(graphs(max_n=9), st.integers(0, 5))
@settings(max_examples=40, deadline=None)
def test_closed_walks_match_matrix_powers(G, k):
    import numpy as np

    A = G.adjacency_matrix()
    M = np.eye(G.n, dtype=np.int64)
    walks = closed_walk_counts(G, k)
    for i in range(k + 1):
        assert list(np.diag(M)) == walks[i]
        M = M @ A


def test_is_bipartite():
    parts = is_bipartite(gen_cycle(6))
    assert parts is not None and sorted(parts[0] + parts[1]) == list(range(6))
    assert is_bipartite(gen_cycle(5)) is None
