"""Generators for the graph families used throughout the package.

Every generator returns a :class:`~powerbounds.graph.Graph`; bipartite
families that feed the balanced bipartite product also attach an ordered
bipartition ``(A, B)`` with ``A[j] ~ B[j]``.
"""

from __future__ import annotations

import itertools
import math
import random
from importlib import resources
from pathlib import Path

from .graph import Graph, GraphError, is_bipartite, parse_graph6

DEFAULT_VERTEX_CAP = 7000


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs n >= 3")
    edges = [(i, (i + 1) % n) for i in range(n)]
    parts = None
    if n % 2 == 0:
        parts = (tuple(range(0, n, 2)), tuple(range(1, n, 2)))
    return Graph.from_edges(n, edges, f"C{n}", parts)


def gen_path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], f"P{n}")


def gen_complete(n: int) -> Graph:
    g = Graph.from_edges(n, itertools.combinations(range(n), 2), f"K{n}")
    if n == 2:
        return Graph(g.n, g.rows, g.name, ((0,), (1,)))
    return g


def gen_complete_bipartite(a: int, b: int) -> Graph:
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    parts = (tuple(range(a)), tuple(range(a, 2 * a))) if a == b else None
    return Graph.from_edges(a + b, edges, f"K{a},{b}", parts)


def gen_odd_graph(ell: int, cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Odd graph O_ell: (ell-1)-subsets of a (2ell-1)-set, adjacent when disjoint."""
    if ell < 2:
        raise GraphError("odd graphs need ell >= 2")
    n = math.comb(2 * ell - 1, ell - 1)
    if n > cap:
        raise GraphError(f"O_{ell} has {n} vertices, above the cap of {cap}")
    ground = 2 * ell - 1
    subsets = [sum(1 << i for i in c) for c in itertools.combinations(range(ground), ell - 1)]
    index = {s: i for i, s in enumerate(subsets)}
    full = (1 << ground) - 1
    edges = []
    for i, s in enumerate(subsets):
        comp = full & ~s
        # neighbours: drop one element from the ell-element complement
        for b in range(ground):
            if comp >> b & 1:
                j = index[comp & ~(1 << b)]
                if i < j:
                    edges.append((i, j))
    return Graph.from_edges(n, edges, f"O{ell}")


def gen_generalized_petersen(n: int, j: int) -> Graph:
    """GP(n, j): outer n-cycle ``0..n-1``, inner j-step cycle ``n..2n-1``, spokes ``i ~ n+i``."""
    if n < 3 or not 1 <= j < n / 2:
        raise GraphError("generalized Petersen graphs need n >= 3 and 1 <= j < n/2")
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((n + i, n + (i + j) % n))
        edges.append((i, n + i))
    return Graph.from_edges(2 * n, edges, f"GP({n},{j})")


def gen_prism(n: int) -> Graph:
    """Prism C_n x K_2, labelled like GP(n, 1)."""
    if n < 3:
        raise GraphError("a prism needs n >= 3")
    g = gen_generalized_petersen(n, 1)
    return g.renamed(f"Prism{n}")


# --------------------------------------------------------------------------
# projective planes
# --------------------------------------------------------------------------

def _gf(q: int):
    """Addition and multiplication tables for GF(q), q in {2, 3, 4, 5}."""
    if q in (2, 3, 5):
        add = [[(a + b) % q for b in range(q)] for a in range(q)]
        mul = [[(a * b) % q for b in range(q)] for a in range(q)]
        return add, mul
    if q == 4:
        # elements as bit-polynomials over GF(2) modulo x^2 + x + 1
        add = [[a ^ b for b in range(4)] for a in range(4)]

        def m(a: int, b: int) -> int:
            r = 0
            for i in range(2):
                if b >> i & 1:
                    r ^= a << i
            if r & 4:
                r ^= 0b111
            return r

        mul = [[m(a, b) for b in range(4)] for a in range(4)]
        return add, mul
    raise GraphError(f"PG(2,{q}) unsupported; q must be one of 2, 3, 4, 5")


def gen_incidence_pg2(q: int) -> Graph:
    """Point-line incidence graph of PG(2, q); points first, then lines."""
    add, mul = _gf(q)
    vecs = [v for v in itertools.product(range(q), repeat=3) if any(v)]
    reps = []
    seen = set()
    for v in vecs:
        if v in seen:
            continue
        orbit = {tuple(mul[s][x] for x in v) for s in range(1, q)}
        seen |= orbit
        reps.append(min(orbit))
    reps.sort()
    N = len(reps)

    def dot(u, v):
        acc = 0
        for a, b in zip(u, v):
            acc = add[acc][mul[a][b]]
        return acc

    edges = [(i, N + j) for i, p in enumerate(reps) for j, l in enumerate(reps) if dot(p, l) == 0]
    g = Graph.from_edges(2 * N, edges, f"PG(2,{q})-incidence")
    return with_balanced_ordering(g)


# --------------------------------------------------------------------------
# balanced bipartite product
# --------------------------------------------------------------------------

def _perfect_matching(G: Graph, left: list[int], right: list[int]) -> dict[int, int] | None:
    match_r: dict[int, int] = {}
    right_set = set(right)

    def augment(u: int, seen: set[int]) -> bool:
        for v in G.neighbors(u):
            if v in right_set and v not in seen:
                seen.add(v)
                if v not in match_r or augment(match_r[v], seen):
                    match_r[v] = u
                    return True
        return False

    for u in left:
        if not augment(u, set()):
            return None
    return {u: v for v, u in match_r.items()}


def with_balanced_ordering(G: Graph) -> Graph:
    """Attach an ordered balanced bipartition ``(A, B)`` with ``A[j] ~ B[j]``."""
    if G.parts is not None:
        return G
    sides = is_bipartite(G)
    if sides is None:
        raise GraphError(f"{G.name or 'graph'} is not bipartite")
    left, right = sides
    if len(left) != len(right):
        raise GraphError(f"{G.name or 'graph'} is bipartite but not balanced")
    m = _perfect_matching(G, left, right)
    if m is None:
        raise GraphError(f"{G.name or 'graph'} has no perfect matching between its sides")
    A = tuple(left)
    B = tuple(m[a] for a in A)
    return Graph(G.n, G.rows, G.name, (A, B))


def bowtie_product(G1: Graph, G2: Graph) -> Graph:
    """Balanced bipartite product of two ordered balanced bipartite graphs.

    Vertices ``A1 x A2`` come first, then ``B1 x B2``; the pair ``(i, j)``
    sits at offset ``i * n2 + j`` inside its half.
    """
    ordered = []
    for G in (G1, G2):
        G = with_balanced_ordering(G)
        A, B = G.parts
        if len(A) != len(B):
            raise GraphError("bowtie inputs must be balanced")
        for a, b in zip(A, B):
            if not G.has_edge(a, b):
                raise GraphError(f"matching edge ({a}, {b}) missing from {G.name or 'input'}")
        ordered.append(G)
    G1, G2 = ordered
    (A1, B1), (A2, B2) = G1.parts, G2.parts
    n1, n2 = len(A1), len(A2)
    posA1 = {v: i for i, v in enumerate(A1)}
    posB1 = {v: i for i, v in enumerate(B1)}
    posA2 = {v: i for i, v in enumerate(A2)}
    posB2 = {v: i for i, v in enumerate(B2)}
    half = n1 * n2

    def a_idx(i, j):
        return i * n2 + j

    def b_idx(i, j):
        return half + i * n2 + j

    def oriented(G, posA, posB):
        out = []
        for u, v in G.edges():
            if u in posA and v in posB:
                out.append((posA[u], posB[v]))
            elif v in posA and u in posB:
                out.append((posA[v], posB[u]))
            else:
                raise GraphError("edge inside one side of the bipartition")
        return out

    E1 = oriented(G1, posA1, posB1)
    E2 = oriented(G2, posA2, posB2)
    edges = set()
    for i in range(n1):
        for a2, b2 in E2:
            edges.add((a_idx(i, a2), b_idx(i, b2)))
    for j in range(n2):
        for a1, b1 in E1:
            edges.add((a_idx(a1, j), b_idx(b1, j)))
    parts = (tuple(range(half)), tuple(range(half, 2 * half)))
    name = f"{G1.name or 'G1'}⋈{G2.name or 'G2'}"
    return Graph.from_edges(2 * half, sorted(edges), name, parts)


# --------------------------------------------------------------------------
# random regular graphs
# --------------------------------------------------------------------------

def gen_random_regular(n: int, d: int, seed: int = 0, connected: bool = True,
                       max_tries: int = 10_000) -> Graph:
    """Uniform-ish random d-regular simple graph via the pairing model with restarts."""
    if (n * d) % 2 or d >= n:
        raise GraphError(f"no {d}-regular graph on {n} vertices")
    from .graph import is_connected

    rng = random.Random(seed)
    for _ in range(max_tries):
        points = [v for v in range(n) for _ in range(d)]
        rng.shuffle(points)
        edges = set()
        ok = True
        for i in range(0, len(points), 2):
            u, v = points[i], points[i + 1]
            if u == v or (min(u, v), max(u, v)) in edges:
                ok = False
                break
            edges.add((min(u, v), max(u, v)))
        if not ok:
            continue
        g = Graph.from_edges(n, sorted(edges), f"RR({n},{d};{seed})")
        if not connected or is_connected(g):
            return g
    raise GraphError(f"failed to sample a {d}-regular graph on {n} vertices")


# --------------------------------------------------------------------------
# named fixtures
# --------------------------------------------------------------------------

def fixture_names() -> list[str]:
    root = resources.files("powerbounds") / "fixtures"
    return sorted(p.name[:-3] for p in root.iterdir() if p.name.endswith(".g6"))


def load_fixture(name: str) -> Graph:
    """Load a shipped graph6 fixture by stem name (``"coxeter"``) or file name."""
    stem = Path(name).name
    if stem.endswith(".g6"):
        stem = stem[:-3]
    path = resources.files("powerbounds") / "fixtures" / f"{stem}.g6"
    if not path.is_file():
        raise GraphError(f"no fixture named {stem!r}; available: {', '.join(fixture_names())}")
    return parse_graph6(path.read_text().splitlines()[0], name=stem)


# --------------------------------------------------------------------------
# generator spec mini-language
# --------------------------------------------------------------------------

def _ints(arg: str, count: int, kind: str) -> list[int]:
    try:
        vals = [int(x) for x in arg.split(",")]
    except ValueError:
        raise GraphError(f"bad arguments {arg!r} for {kind}") from None
    if len(vals) != count:
        raise GraphError(f"{kind} takes {count} integer argument(s), got {arg!r}")
    return vals


def from_spec(spec: str, cap: int = DEFAULT_VERTEX_CAP) -> Graph:
    """Build a graph from ``kind:args``, e.g. ``odd:4``, ``gp:8,3`` or ``bowtie:cycle:8,cycle:12``."""
    kind, _, arg = spec.strip().partition(":")
    kind = kind.lower()
    if kind == "bowtie":
        left, right = _split_bowtie(arg)
        return bowtie_product(from_spec(left, cap), from_spec(right, cap))
    if kind == "cycle":
        return gen_cycle(*_ints(arg, 1, kind))
    if kind == "path":
        return gen_path(*_ints(arg, 1, kind))
    if kind in ("complete", "k"):
        return gen_complete(*_ints(arg, 1, kind))
    if kind == "kmm":
        return gen_complete_bipartite(*_ints(arg, 2, kind))
    if kind == "odd":
        return gen_odd_graph(*_ints(arg, 1, kind), cap=cap)
    if kind == "prism":
        return gen_prism(*_ints(arg, 1, kind))
    if kind == "gp":
        return gen_generalized_petersen(*_ints(arg, 2, kind))
    if kind == "pg2":
        return gen_incidence_pg2(*_ints(arg, 1, kind))
    if kind == "rr":
        n, d, seed = _ints(arg, 3, kind)
        return gen_random_regular(n, d, seed)
    if kind == "named":
        return load_fixture(arg)
    raise GraphError(f"unknown generator {kind!r}")


def _split_bowtie(arg: str) -> tuple[str, str]:
    # split at the comma that starts the second generator spec ("x:...")
    for i, ch in enumerate(arg):
        if ch == "," and ":" in arg[i + 1:].split(",")[0]:
            return arg[:i], arg[i + 1:]
    raise GraphError(f"bowtie needs two generator specs, got {arg!r}")
