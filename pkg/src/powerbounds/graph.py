"""Graph representation, text ingestion and distance metrics.

Adjacency is kept as one Python ``int`` bitset per vertex, so neighbourhood
unions and ball growth in BFS are single big-int operations.  Dense numpy
views are built on demand for the spectral code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

INF = math.inf


class GraphError(ValueError):
    """Raised for malformed graph input or violated graph preconditions."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0 .. n-1``.

    ``rows[u]`` is a bitset of the neighbours of ``u``.  ``parts`` optionally
    carries an ordered balanced bipartition ``(A, B)`` with ``A[j] ~ B[j]``,
    which the balanced bipartite product needs.
    """

    n: int
    rows: tuple[int, ...]
    name: str = ""
    parts: tuple[tuple[int, ...], tuple[int, ...]] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        if len(self.rows) != self.n:
            raise GraphError("row count does not match n")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row & ~full:
                raise GraphError(f"vertex {u} has a neighbour outside 0..{self.n - 1}")
            if row >> u & 1:
                raise GraphError(f"self-loop at vertex {u}")
            for v in _bits(row):
                if not self.rows[v] >> u & 1:
                    raise GraphError(f"adjacency not symmetric at ({u}, {v})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str = "",
                   parts=None) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has a vertex index outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows), name, parts)

    def neighbors(self, u: int) -> list[int]:
        return list(_bits(self.rows[u]))

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) == 1

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.rows[u] >> (u + 1) << (u + 1))]

    @property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def adjacency_matrix(self, dtype=np.int64) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=dtype)
        for u, row in enumerate(self.rows):
            nb = list(_bits(row))
            if nb:
                A[u, nb] = 1
        return A

    def renamed(self, name: str) -> "Graph":
        return Graph(self.n, self.rows, name, self.parts)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} n={self.n} m={self.num_edges}>"


# --------------------------------------------------------------------------
# graph6
# --------------------------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def _g6_size(data: str) -> tuple[int, int]:
    """Decode the graph6 vertex-count prefix; returns ``(n, chars consumed)``."""
    if not data:
        raise GraphError("empty graph6 string")
    c0 = ord(data[0]) - 63
    if c0 < 63:
        return c0, 1
    if len(data) >= 2 and ord(data[1]) - 63 == 63:
        if len(data) < 8:
            raise GraphError("truncated graph6 length header")
        vals = [ord(ch) - 63 for ch in data[2:8]]
        width = 6
    else:
        if len(data) < 4:
            raise GraphError("truncated graph6 length header")
        vals = [ord(ch) - 63 for ch in data[1:4]]
        width = 3
    if any(not 0 <= v < 64 for v in vals):
        raise GraphError("malformed graph6 length header")
    n = 0
    for v in vals:
        n = (n << 6) | v
    return n, 1 + (width == 6) + width


def parse_graph6(text: str, name: str = "") -> Graph:
    """Decode one graph6 line (McKay's format)."""
    line = text.strip()
    if line.startswith(_G6_HEADER):
        line = line[len(_G6_HEADER):]
    for ch in line:
        if not 63 <= ord(ch) <= 126:
            raise GraphError(f"character {ch!r} outside the graph6 range 63..126")
    n, pos = _g6_size(line)
    if n < 1:
        raise GraphError("graph6 encodes a graph with no vertices")
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    body = line[pos:]
    if len(body) < nchars:
        raise GraphError(f"graph6 body too short: expected {nchars} chars, got {len(body)}")
    if len(body) > nchars:
        raise GraphError(f"trailing garbage after graph6 body: {body[nchars:]!r}")
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            ch = ord(body[k // 6]) - 63
            if ch >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph(n, tuple(rows), name)


def encode_graph6(G: Graph) -> str:
    n = G.n
    if n < 63:
        head = chr(n + 63)
    elif n < 258048:
        head = "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    else:
        head = "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    bits = [G.rows[i] >> j & 1 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = "".join(chr(63 + int("".join(map(str, bits[i:i + 6])), 2)) for i in range(0, len(bits), 6))
    return head + body


def read_graph6_stream(lines: Iterable[str]) -> Iterator[Graph]:
    """Yield one graph per non-blank line of a graph6 corpus."""
    for lineno, line in enumerate(lines, 1):
        if line.strip():
            try:
                yield parse_graph6(line)
            except GraphError as exc:
                raise GraphError(f"line {lineno}: {exc}") from None


# --------------------------------------------------------------------------
# edge lists
# --------------------------------------------------------------------------

def parse_edge_list(text: str, name: str = "") -> Graph:
    """Parse whitespace-separated 0-indexed vertex pairs.

    A first line ``n m`` is taken as a header when ``m`` equals the number of
    pair lines that follow; otherwise every line is an edge and ``n`` is one
    more than the largest index seen.
    """
    pairs: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise GraphError(f"line {lineno}: expected two integers, got {line!r}")
        try:
            pairs.append((int(toks[0]), int(toks[1])))
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer token in {line!r}") from None
    if not pairs:
        raise GraphError("edge list is empty")
    n = None
    if len(pairs) >= 1 and pairs[0][1] == len(pairs) - 1 and pairs[0][0] >= 1:
        n, _ = pairs[0]
        pairs = pairs[1:]
    if n is None:
        n = 1 + max(max(p) for p in pairs)
    for u, v in pairs:
        if u < 0 or v < 0 or u >= n or v >= n:
            raise GraphError(f"vertex index in ({u}, {v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
    return Graph.from_edges(n, pairs, name)


def encode_edge_list(G: Graph) -> str:
    edges = G.edges()
    return "\n".join([f"{G.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]) + "\n"


# --------------------------------------------------------------------------
# distances
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceMatrix:
    """All-pairs BFS distances; unreachable pairs hold the sentinel ``n``."""

    dist: np.ndarray

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def connected(self) -> bool:
        return bool((self.dist < self.n).all())

    @property
    def diameter(self) -> float:
        return int(self.dist.max()) if self.connected else INF

    def __getitem__(self, uv):
        return self.dist[uv]


def _balls(G: Graph, source: int, radius: int | None = None) -> list[int]:
    """Successive BFS balls around ``source``: ``balls[r]`` = vertices at distance <= r."""
    ball = 1 << source
    frontier = ball
    balls = [ball]
    r = 0
    while frontier and (radius is None or r < radius):
        nxt = 0
        for v in _bits(frontier):
            nxt |= G.rows[v]
        frontier = nxt & ~ball
        if not frontier:
            break
        ball |= frontier
        balls.append(ball)
        r += 1
    return balls


def distance_matrix(G: Graph) -> DistanceMatrix:
    n = G.n
    D = np.full((n, n), n, dtype=np.int64)
    for s in range(n):
        prev = 0
        for r, ball in enumerate(_balls(G, s)):
            idx = list(_bits(ball & ~prev))
            D[s, idx] = r
            prev = ball
    return DistanceMatrix(D)


def ball(G: Graph, u: int, k: int) -> int:
    """Bitset of vertices at distance at most ``k`` from ``u`` (``u`` included)."""
    balls = _balls(G, u, k)
    return balls[min(k, len(balls) - 1)]


def graph_power(G: Graph, k: int) -> Graph:
    """``G^k``: distinct vertices adjacent iff their distance is at most ``k``."""
    if k < 1:
        raise GraphError("graph power needs k >= 1")
    if k == 1:
        return G
    rows = tuple(ball(G, u, k) & ~(1 << u) for u in range(G.n))
    return Graph(G.n, rows, f"{G.name}^{k}" if G.name else "")


def girth(G: Graph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    best = INF
    n = G.n
    for s in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[s] = 0
        queue = [s]
        for u in queue:
            if 2 * dist[u] + 1 >= best:
                break
            for v in _bits(G.rows[u]):
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def is_connected(G: Graph) -> bool:
    return _balls(G, 0)[-1] == (1 << G.n) - 1


def sphere_sizes(G: Graph, k: int) -> list[int]:
    """``s_k(u)``: number of vertices within distance ``k`` of ``u``, ``u`` included."""
    if k < 0:
        raise GraphError("k must be nonnegative")
    return [ball(G, u, k).bit_count() for u in range(G.n)]


def harmonic_mean_sk(G: Graph, k: int) -> float:
    if not is_connected(G):
        raise GraphError("harmonic mean of ball sizes needs a connected graph")
    s = sphere_sizes(G, k)
    return G.n / sum(1.0 / x for x in s)


def closed_walk_counts(G: Graph, k: int) -> list[list[int]]:
    """``counts[l][u] = (A^l)_{uu}`` for ``l = 0..k``, exact integers."""
    n = G.n
    A = G.adjacency_matrix()
    # int64 is exact while the largest walk count stays below 2**62
    dmax = max(G.degrees())
    dtype = np.int64 if dmax <= 1 or k * math.log2(dmax) < 62 else object
    A = A.astype(dtype)
    P = np.eye(n, dtype=np.int64).astype(dtype)
    out = [[1] * n]
    for _ in range(k):
        P = P @ A
        out.append([int(x) for x in np.diagonal(P)])
    return out


def is_k_partially_walk_regular(G: Graph, k: int, tol: float = 0.0) -> bool:
    """True when ``diag(A^l)`` is constant for every ``l <= k``.

    ``tol`` is unused for adjacency matrices, whose walk counts are integers.
    """
    if k < 0:
        raise GraphError("k must be nonnegative")
    return all(len(set(row)) == 1 for row in closed_walk_counts(G, k))


def is_bipartite(G: Graph) -> tuple[list[int], list[int]] | None:
    """Return a 2-colouring ``(side0, side1)`` or ``None``."""
    color = [-1] * G.n
    for s in range(G.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = [s]
        for u in queue:
            for v in _bits(G.rows[u]):
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return [u for u in range(G.n) if color[u] == 0], [u for u in range(G.n) if color[u] == 1]


def vertex_set_bits(vertices: Sequence[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask
