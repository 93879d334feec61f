"""Exact alpha_k and chi_k by branch-and-bound on bitsets of ``G^k``.

These are the ground truth every spectral bound is tested against; each
result carries a witness that is re-validated before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph, _bits, graph_power

DEFAULT_BUDGET = 10 ** 8
CHI_VERTEX_CAP = 64


class OracleError(RuntimeError):
    """A witness failed validation (a bug, never an expected outcome)."""


class _Budget(Exception):
    pass


@dataclass
class OracleResult:
    kind: str
    k: int
    value: int
    witness: list = field(default_factory=list)
    nodes_explored: int = 0
    timed_out: bool = False

    def to_json(self) -> dict:
        return {"kind": self.kind, "k": self.k, "value": self.value, "witness": list(self.witness),
                "nodes_explored": self.nodes_explored, "timed_out": self.timed_out}


def _power_rows(G: Graph, k: int) -> list[int]:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return [0] * G.n
    return list(graph_power(G, k).rows)


def _lowbit(x: int) -> int:
    return (x & -x).bit_length() - 1


# --------------------------------------------------------------------------
# maximum independent set = maximum clique of the complement
# --------------------------------------------------------------------------

class _CliqueSearch:
    """MCQ-style maximum clique with greedy-colouring bounds."""

    def __init__(self, adj: list[int], budget: int):
        self.adj = adj
        self.budget = budget
        self.nodes = 0
        self.best: list[int] = []

    def _colour_order(self, P: int) -> list[tuple[int, int]]:
        out = []
        U = P
        colour = 0
        while U:
            colour += 1
            Q = U
            while Q:
                v = _lowbit(Q)
                Q &= ~self.adj[v] & ~(1 << v)
                U &= ~(1 << v)
                out.append((v, colour))
        return out

    def expand(self, R: list[int], P: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _Budget
        for v, c in reversed(self._colour_order(P)):
            if len(R) + c <= len(self.best):
                return
            R.append(v)
            newP = P & self.adj[v]
            if newP:
                self.expand(R, newP)
            elif len(R) > len(self.best):
                self.best = list(R)
            R.pop()
            P &= ~(1 << v)

    def run(self, seed: list[int]) -> bool:
        self.best = list(seed)
        try:
            self.expand([], (1 << len(self.adj)) - 1)
        except _Budget:
            return False
        return True


def _greedy_independent(rows: list[int]) -> list[int]:
    n = len(rows)
    order = sorted(range(n), key=lambda v: (rows[v].bit_count(), v))
    chosen, blocked = [], 0
    for v in order:
        if not blocked >> v & 1:
            chosen.append(v)
            blocked |= rows[v] | (1 << v)
    return chosen


def alpha_k_exact(G: Graph, k: int, budget: int = DEFAULT_BUDGET) -> OracleResult:
    """Maximum size of a vertex set with pairwise distance greater than ``k``."""
    rows = _power_rows(G, k)
    n = G.n
    full = (1 << n) - 1
    comp = [full & ~rows[v] & ~(1 << v) for v in range(n)]
    search = _CliqueSearch(comp, budget)
    finished = search.run(_greedy_independent(rows))
    witness = sorted(search.best)
    _validate_independent(rows, witness)
    return OracleResult("alpha", k, len(witness), witness, search.nodes, not finished)


def _validate_independent(rows: list[int], witness: list[int]) -> None:
    mask = 0
    for v in witness:
        mask |= 1 << v
    for v in witness:
        if rows[v] & mask:
            raise OracleError(f"witness vertices {v} and {_lowbit(rows[v] & mask)} are within distance k")


def max_clique(rows: list[int], budget: int = DEFAULT_BUDGET) -> tuple[list[int], bool]:
    search = _CliqueSearch(rows, budget)
    finished = search.run([0] if rows else [])
    return sorted(search.best), finished


# --------------------------------------------------------------------------
# chromatic number of G^k
# --------------------------------------------------------------------------

def _dsatur_greedy(rows: list[int]) -> list[int]:
    n = len(rows)
    colour = [-1] * n
    sat = [0] * n  # bitmask of neighbouring colours
    for _ in range(n):
        v = max((u for u in range(n) if colour[u] < 0),
                key=lambda u: (sat[u].bit_count(), rows[u].bit_count(), -u))
        c = _lowbit(~sat[v])
        colour[v] = c
        for w in _bits(rows[v]):
            sat[w] |= 1 << c
    return colour


class _Colouring:
    def __init__(self, rows: list[int], budget: int):
        self.rows = rows
        self.n = len(rows)
        self.budget = budget
        self.nodes = 0

    def try_colour(self, t: int, clique: list[int]) -> list[int] | None:
        n = self.n
        colour = [-1] * n
        sat = [0] * n
        for c, v in enumerate(clique):
            colour[v] = c
            for w in _bits(self.rows[v]):
                sat[w] |= 1 << c
        deg = [r.bit_count() for r in self.rows]
        uncoloured = set(range(n)) - set(clique)

        def rec(used: int) -> bool:
            self.nodes += 1
            if self.nodes > self.budget:
                raise _Budget
            if not uncoloured:
                return True
            v = max(uncoloured, key=lambda u: (sat[u].bit_count(), deg[u], -u))
            if sat[v].bit_count() >= t:
                return False
            limit = min(t, used + 1)
            for c in range(limit):
                if sat[v] >> c & 1:
                    continue
                colour[v] = c
                uncoloured.discard(v)
                changed = []
                for w in _bits(self.rows[v]):
                    if colour[w] < 0 and not sat[w] >> c & 1:
                        sat[w] |= 1 << c
                        changed.append(w)
                if rec(max(used, c + 1)):
                    return True
                for w in changed:
                    sat[w] &= ~(1 << c)
                uncoloured.add(v)
                colour[v] = -1
            return False

        return colour if rec(len(clique)) else None


def chi_k_exact(G: Graph, k: int, budget: int = DEFAULT_BUDGET, cap: int = CHI_VERTEX_CAP) -> OracleResult:
    """Chromatic number of ``G^k`` by iterative deepening from the clique bound."""
    if G.n > cap:
        raise ValueError(f"chi oracle limited to {cap} vertices (got {G.n})")
    rows = _power_rows(G, k)
    clique, _ = max_clique(rows, budget)
    best = _dsatur_greedy(rows)
    upper = max(best) + 1
    search = _Colouring(rows, budget)
    timed_out = False
    value = upper
    try:
        for t in range(len(clique), upper):
            col = search.try_colour(t, clique)
            if col is not None:
                best, value = col, t
                break
    except _Budget:
        timed_out = True
    _validate_colouring(rows, best, value)
    return OracleResult("chi", k, value, best, search.nodes, timed_out)


def _validate_colouring(rows: list[int], colour: list[int], value: int) -> None:
    if any(c < 0 for c in colour) or len(set(colour)) != value:
        raise OracleError("colouring does not use exactly the reported number of colours")
    for v, r in enumerate(rows):
        for w in _bits(r):
            if colour[v] == colour[w]:
                raise OracleError(f"vertices {v} and {w} at distance <= k share colour {colour[v]}")
