"""Regenerate the shipped graph6 fixtures.

Needs networkx (dev dependency only).  Graphs networkx lacks are built from
LCF notation or from their standard combinatorial constructions; the test
suite checks every fixture against its known order, degree, girth and
k-independence number.
"""

from __future__ import annotations

import itertools
from pathlib import Path

import networkx as nx

OUT = Path(__file__).resolve().parents[1] / "src" / "powerbounds" / "fixtures"


def lcf(n: int, shifts: list[int], reps: int) -> nx.Graph:
    return nx.LCF_graph(n, shifts, reps)


def coxeter() -> nx.Graph:
    fano = [{0, 1, 3}, {1, 2, 4}, {2, 3, 5}, {3, 4, 6}, {4, 5, 0}, {5, 6, 1}, {6, 0, 2}]
    verts = [frozenset(c) for c in itertools.combinations(range(7), 3) if set(c) not in fano]
    g = nx.Graph()
    g.add_nodes_from(range(len(verts)))
    for i, j in itertools.combinations(range(len(verts)), 2):
        if not verts[i] & verts[j]:
            g.add_edge(i, j)
    return g


def generalized_petersen(n: int, j: int) -> nx.Graph:
    g = nx.Graph()
    for i in range(n):
        g.add_edges_from([(i, (i + 1) % n), (n + i, n + (i + j) % n), (i, n + i)])
    return g


def flower_snark(n: int = 5) -> nx.Graph:
    g = nx.Graph()
    a, b, c, d = (lambda i: i), (lambda i: n + i), (lambda i: 2 * n + i), (lambda i: 3 * n + i)
    for i in range(n):
        g.add_edges_from([(a(i), b(i)), (a(i), c(i)), (a(i), d(i)), (b(i), b((i + 1) % n))])
    cyc = [c(i) for i in range(n)] + [d(i) for i in range(n)]
    for i in range(2 * n):
        g.add_edge(cyc[i], cyc[(i + 1) % (2 * n)])
    return g


FIXTURES = {
    "heawood": nx.heawood_graph,
    "petersen": nx.petersen_graph,
    "hexahedron": nx.cubical_graph,
    "icosahedron": nx.icosahedral_graph,
    "dodecahedron": nx.dodecahedral_graph,
    "desargues": nx.desargues_graph,
    "moebius_kantor": nx.moebius_kantor_graph,
    "frucht": nx.frucht_graph,
    "truncated_tetrahedron": nx.truncated_tetrahedron_graph,
    "nauru": lambda: generalized_petersen(12, 5),
    "durer": lambda: generalized_petersen(6, 2),
    "coxeter": coxeter,
    "flower_snark": flower_snark,
    "dyck": lambda: lcf(32, [5, -5, 13, -13], 8),
    "f26a": lambda: lcf(26, [-7, 7], 13),
    "bidiakis_cube": lambda: lcf(12, [6, 4, -4], 4),
    "franklin": lambda: lcf(12, [5, -5], 6),
    "pappus": lambda: lcf(18, [5, 7, -7, 7, -7, -5], 3),
    "mcgee": lambda: lcf(24, [12, 7, -7], 8),
    "tutte_coxeter": lambda: lcf(30, [-13, -9, 7, -7, 9, 13], 5),
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, make in FIXTURES.items():
        g = nx.convert_node_labels_to_integers(make(), ordering="sorted")
        data = nx.to_graph6_bytes(g, header=False).decode().strip()
        (OUT / f"{name}.g6").write_text(data + "\n")
        print(f"{name:24s} n={g.number_of_nodes():3d} m={g.number_of_edges()}")


if __name__ == "__main__":
    main()
