from __future__ import annotations

import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerbounds.generators import (
    bowtie_product,
    fixture_names,
    from_spec,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_generalized_petersen,
    gen_incidence_pg2,
    gen_odd_graph,
    gen_prism,
    gen_random_regular,
    load_fixture,
    with_balanced_ordering,
)
from powerbounds.graph import GraphError, distance_matrix, girth, is_bipartite, is_connected


def nxg(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges())
    return H


def iso(G, H) -> bool:
    return nx.is_isomorphic(nxg(G), nxg(H))


# Order, degree and girth of every shipped fixture (standard values for these named graphs).
FIXTURE_FACTS = {
    "bidiakis_cube": (12, 3, 4),
    "coxeter": (28, 3, 7),
    "desargues": (20, 3, 6),
    "dodecahedron": (20, 3, 5),
    "durer": (12, 3, 3),
    "dyck": (32, 3, 6),
    "f26a": (26, 3, 6),
    "flower_snark": (20, 3, 5),
    "franklin": (12, 3, 4),
    "frucht": (12, 3, 3),
    "heawood": (14, 3, 6),
    "hexahedron": (8, 3, 4),
    "icosahedron": (12, 5, 3),
    "mcgee": (24, 3, 7),
    "moebius_kantor": (16, 3, 6),
    "nauru": (24, 3, 6),
    "pappus": (18, 3, 6),
    "petersen": (10, 3, 5),
    "truncated_tetrahedron": (12, 3, 3),
    "tutte_coxeter": (30, 3, 8),
}


def test_fixture_list_complete():
    assert sorted(FIXTURE_FACTS) == fixture_names()


@pytest.mark.parametrize("name", sorted(FIXTURE_FACTS))
def test_fixture_facts(name):
    G = load_fixture(name)
    n, d, g = FIXTURE_FACTS[name]
    assert G.n == n
    assert set(G.degrees()) == {d}
    assert girth(G) == g
    assert is_connected(G)


@pytest.mark.parametrize("name, builder", [
    ("petersen", nx.petersen_graph), ("heawood", nx.heawood_graph), ("desargues", nx.desargues_graph),
    ("dodecahedron", nx.dodecahedral_graph), ("icosahedron", nx.icosahedral_graph),
    ("hexahedron", nx.cubical_graph), ("frucht", nx.frucht_graph),
    ("truncated_tetrahedron", nx.truncated_tetrahedron_graph), ("tutte_coxeter", nx.tutte_graph),
    ("pappus", nx.pappus_graph),
])
def test_fixtures_match_networkx(name, builder):
    H = builder()
    if name == "tutte_coxeter":
        H = nx.LCF_graph(30, [-13, -9, 7, -7, 9, 13], 5)
    assert nx.is_isomorphic(nxg(load_fixture(name)), H)


def test_unknown_fixture():
    with pytest.raises(GraphError):
        load_fixture("no_such_graph")


def test_cycle_examples():
    assert iso(gen_cycle(3), gen_complete(3))
    assert girth(gen_cycle(8)) == 8
    with pytest.raises(GraphError):
        gen_cycle(2)


def test_odd_graph_examples():
    assert iso(gen_odd_graph(2), gen_complete(3))
    O3 = gen_odd_graph(3)
    assert iso(O3, load_fixture("petersen"))
    O4 = gen_odd_graph(4)
    assert O4.n == 35 and set(O4.degrees()) == {4}
    assert distance_matrix(O4).diameter == 3


@pytest.mark.parametrize("ell", [2, 3, 4, 5])
def test_odd_graph_degree_and_diameter(ell):
    G = gen_odd_graph(ell)
    assert G.n == math.comb(2 * ell - 1, ell - 1)
    assert set(G.degrees()) == {ell}
    assert distance_matrix(G).diameter == ell - 1


def test_odd_graph_cap():
    with pytest.raises(GraphError):
        gen_odd_graph(9, cap=1000)


def test_prism_examples():
    assert gen_prism(3).n == 6
    assert iso(gen_prism(4), load_fixture("hexahedron"))
    G = gen_prism(5)
    assert G.n == 10 and girth(G) == 4


@pytest.mark.parametrize("n", range(3, 17))
def test_prism_is_cartesian_product(n):
    H = nx.cartesian_product(nx.cycle_graph(n), nx.complete_graph(2))
    assert nx.is_isomorphic(nxg(gen_prism(n)), H)


@pytest.mark.parametrize("n", range(3, 12))
def test_gp_n1_equals_prism(n):
    assert gen_generalized_petersen(n, 1).rows == gen_prism(n).rows


def test_gp_examples():
    assert iso(gen_generalized_petersen(5, 2), load_fixture("petersen"))
    assert iso(gen_generalized_petersen(8, 3), load_fixture("moebius_kantor"))
    assert iso(gen_generalized_petersen(10, 3), load_fixture("desargues"))
    assert iso(gen_generalized_petersen(12, 5), load_fixture("nauru"))
    assert iso(gen_generalized_petersen(10, 2), load_fixture("dodecahedron"))
    with pytest.raises(GraphError):
        gen_generalized_petersen(6, 3)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_pg2_incidence(q):
    G = gen_incidence_pg2(q)
    assert G.n == 2 * (q * q + q + 1)
    assert set(G.degrees()) == {q + 1}
    assert girth(G) == 6
    assert is_bipartite(G) is not None
    # any two points share exactly one line
    pts = range(q * q + q + 1)
    for u in pts:
        for v in pts:
            if u < v:
                assert (G.rows[u] & G.rows[v]).bit_count() == 1


def test_pg2_q2_is_heawood():
    assert iso(gen_incidence_pg2(2), load_fixture("heawood"))


def test_pg2_unsupported():
    with pytest.raises(GraphError):
        gen_incidence_pg2(6)


def bowtie_oracle(G1, G2):
    """Edge set of the product written straight from its definition."""
    G1, G2 = with_balanced_ordering(G1), with_balanced_ordering(G2)
    (A1, B1), (A2, B2) = G1.parts, G2.parts
    H = nx.Graph()
    H.add_nodes_from([("a", x, y) for x in A1 for y in A2] + [("b", x, y) for x in B1 for y in B2])
    for i in range(len(A1)):
        for u, v in G2.edges():
            a2, b2 = (u, v) if u in A2 else (v, u)
            H.add_edge(("a", A1[i], a2), ("b", B1[i], b2))
    for j in range(len(A2)):
        for u, v in G1.edges():
            a1, b1 = (u, v) if u in A1 else (v, u)
            H.add_edge(("a", a1, A2[j]), ("b", b1, B2[j]))
    return H


@pytest.mark.parametrize("m1, m2", [(8, 8), (8, 12), (4, 6), (6, 10)])
def test_bowtie_of_cycles(m1, m2):
    P = bowtie_product(gen_cycle(m1), gen_cycle(m2))
    assert P.n == 2 * (m1 // 2) * (m2 // 2)
    assert set(P.degrees()) == {3}
    assert nx.is_isomorphic(nxg(P), bowtie_oracle(gen_cycle(m1), gen_cycle(m2)))


def test_bowtie_girth_six():
    assert girth(bowtie_product(gen_cycle(8), gen_cycle(8))) == 6
    assert girth(bowtie_product(gen_cycle(8), gen_cycle(12))) == 6


def test_bowtie_k2_k2():
    # one vertex per side on each factor: the product has 2 * 1 * 1 vertices
    P = bowtie_product(gen_complete(2), gen_complete(2))
    assert P.n == 2 and P.edges() == [(0, 1)]


@pytest.mark.parametrize("a, b", [(2, 2), (3, 3), (2, 3)])
def test_bowtie_regularity(a, b):
    G1, G2 = gen_complete_bipartite(a, a), gen_cycle(2 * b + 2)
    P = bowtie_product(G1, G2)
    assert set(P.degrees()) == {a + 2 - 1}


def test_bowtie_rejects_non_bipartite():
    with pytest.raises(GraphError):
        bowtie_product(gen_cycle(5), gen_cycle(8))
    with pytest.raises(GraphError):
        bowtie_product(gen_complete_bipartite(2, 3), gen_cycle(8))


@given(st.integers(6, 30), st.integers(3, 5), st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_random_regular(n, d, seed):
    if n * d % 2:
        n += 1
    G = gen_random_regular(n, d, seed)
    assert set(G.degrees()) == {d}
    assert is_connected(G)
    assert gen_random_regular(n, d, seed).rows == G.rows


@pytest.mark.parametrize("spec, n, m", [
    ("odd:4", 35, 70), ("prism:10", 20, 30), ("gp:8,3", 16, 24), ("cycle:8", 8, 8),
    ("pg2:2", 14, 21), ("bowtie:cycle:8,cycle:12", 48, 72), ("named:coxeter", 28, 42),
    ("kmm:2,3", 5, 6), ("complete:4", 4, 6),
])
def test_from_spec(spec, n, m):
    G = from_spec(spec)
    assert (G.n, G.num_edges) == (n, m)


@pytest.mark.parametrize("spec", ["odd", "odd:x", "gp:8", "nosuch:3", "bowtie:cycle:8"])
def test_from_spec_errors(spec):
    with pytest.raises(GraphError):
        from_spec(spec)
