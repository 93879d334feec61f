"""Dense two-phase simplex and best-first branch-and-bound.

The models here are tiny (tens of columns, at most a few hundred rows), so
the simplex keeps a full tableau in a numpy array and pivots with a rank-one
update.  Besides ordinary binaries the MILP layer understands *indicator*
constraints ``b = v  =>  row``; a node LP only carries an indicator row once
its binary has been fixed to the activating value, which avoids picking a
big-M constant at all.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

FEAS_TOL = 1e-7
INT_TOL = 1e-6
COST_TOL = 1e-9
PIVOT_TOL = 1e-11
MAX_PIVOTS = 100_000
MAX_NODES = 1_000_000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"

_SENSES = {"<=", ">=", "=="}


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    sense: str
    rhs: float
    name: str = ""

    def __post_init__(self):
        if self.sense not in _SENSES:
            raise ValueError(f"unknown constraint sense {self.sense!r}")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", float(self.rhs))

    def residual(self, x: np.ndarray) -> float:
        """Amount by which ``x`` violates the constraint (0 when satisfied)."""
        lhs = float(np.dot(self.coeffs, x))
        if self.sense == "<=":
            return max(0.0, lhs - self.rhs)
        if self.sense == ">=":
            return max(0.0, self.rhs - lhs)
        return abs(lhs - self.rhs)


@dataclass(frozen=True)
class Indicator:
    """``x[binary] == value`` forces ``constraint``."""

    binary: int
    value: int
    constraint: Constraint


@dataclass
class LpModel:
    num_vars: int
    objective: Sequence[float] | None = None
    maximize: bool = False
    constraints: list[Constraint] = field(default_factory=list)
    lb: Sequence[float] | None = None
    ub: Sequence[float] | None = None
    names: list[str] | None = None

    def __post_init__(self):
        n = self.num_vars
        self.objective = np.zeros(n) if self.objective is None else np.asarray(self.objective, dtype=float)
        self.lb = np.full(n, -np.inf) if self.lb is None else np.asarray(self.lb, dtype=float)
        self.ub = np.full(n, np.inf) if self.ub is None else np.asarray(self.ub, dtype=float)
        if self.names is None:
            self.names = [f"x{i}" for i in range(n)]
        if not (len(self.objective) == len(self.lb) == len(self.ub) == len(self.names) == n):
            raise ValueError("inconsistent model dimensions")
        for con in self.constraints:
            if len(con.coeffs) != n:
                raise ValueError(f"constraint {con.name or '?'} has {len(con.coeffs)} coefficients, expected {n}")

    def add(self, coeffs, sense: str, rhs: float, name: str = "") -> Constraint:
        con = Constraint(tuple(coeffs), sense, rhs, name)
        if len(con.coeffs) != self.num_vars:
            raise ValueError("constraint dimension mismatch")
        self.constraints.append(con)
        return con

    def copy(self) -> "LpModel":
        return LpModel(self.num_vars, self.objective.copy(), self.maximize, list(self.constraints),
                       self.lb.copy(), self.ub.copy(), list(self.names))


@dataclass
class MilpModel:
    base: LpModel
    binaries: tuple[int, ...] = ()
    indicators: list[Indicator] = field(default_factory=list)

    def __post_init__(self):
        self.binaries = tuple(self.binaries)
        n = self.base.num_vars
        if any(not 0 <= j < n for j in self.binaries) or len(set(self.binaries)) != len(self.binaries):
            raise ValueError("binary indices out of range or repeated")
        bset = set(self.binaries)
        for ind in self.indicators:
            if ind.binary not in bset:
                raise ValueError(f"indicator on non-binary variable {ind.binary}")
            if ind.value not in (0, 1):
                raise ValueError("indicator value must be 0 or 1")
        for j in self.binaries:
            self.base.lb[j] = max(self.base.lb[j], 0.0)
            self.base.ub[j] = min(self.base.ub[j], 1.0)


@dataclass
class Solution:
    status: str
    objective: float = math.nan
    x: np.ndarray | None = None
    node_count: int = 0
    pivots: int = 0
    max_violation: float = 0.0
    tolerances: dict = field(default_factory=lambda: {
        "feasibility": FEAS_TOL, "integrality": INT_TOL, "reduced_cost": COST_TOL})

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


# --------------------------------------------------------------------------
# LP
# --------------------------------------------------------------------------

class _Tableau:
    """Standard form ``min c y, A y = b, y >= 0`` with ``b >= 0``."""

    def __init__(self, A: np.ndarray, b: np.ndarray, c: np.ndarray, max_pivots: int):
        self.A, self.b, self.c = A, b, c
        self.max_pivots = max_pivots
        self.pivots = 0

    def _pivot(self, T, basis, r, e):
        T[r] /= T[r, e]
        col = T[:, e].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        basis[r] = e

    def _run(self, T, basis, allowed):
        """Simplex iterations on ``T`` (last row = reduced costs, last col = rhs)."""
        m = T.shape[0] - 1
        stall = 0
        stall_cap = 3 * (m + T.shape[1])
        bland = False
        while True:
            if self.pivots >= self.max_pivots:
                return ITERATION_LIMIT
            red = T[-1, :-1]
            cand = np.flatnonzero((red < -COST_TOL) & allowed)
            if cand.size == 0:
                return OPTIMAL
            e = int(cand[0]) if bland else int(cand[np.argmin(red[cand])])
            col = T[:m, e]
            pos = np.flatnonzero(col > PIVOT_TOL)
            if pos.size == 0:
                return UNBOUNDED
            ratios = T[pos, -1] / col[pos]
            best = ratios.min()
            ties = pos[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = int(min(ties, key=lambda i: basis[i]))
            before = T[-1, -1]
            self._pivot(T, basis, r, e)
            self.pivots += 1
            if abs(T[-1, -1] - before) <= 1e-12 * max(1.0, abs(before)):
                stall += 1
                if stall > stall_cap:
                    bland = True
            else:
                stall = 0

    def solve(self):
        A, b, c = self.A, self.b, self.c
        m, n = A.shape
        # phase 1 with one artificial per row
        T = np.zeros((m + 1, n + m + 1))
        T[:m, :n] = A
        T[:m, n:n + m] = np.eye(m)
        T[:m, -1] = b
        T[-1, :n] = -A.sum(axis=0)
        T[-1, -1] = -b.sum()
        basis = list(range(n, n + m))
        allowed = np.ones(n + m, dtype=bool)
        status = self._run(T, basis, allowed)
        if status == ITERATION_LIMIT:
            return status, None, None
        if -T[-1, -1] > FEAS_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
            return INFEASIBLE, None, None
        # drive artificials out of the basis, dropping redundant rows
        keep = []
        for r in range(m):
            if basis[r] >= n:
                row = T[r, :n]
                j = np.flatnonzero(np.abs(row) > 1e-9)
                if j.size:
                    self._pivot(T, basis, r, int(j[np.argmax(np.abs(row[j]))]))
                    keep.append(r)
            else:
                keep.append(r)
        rows = keep + [m]
        T = T[rows][:, list(range(n)) + [n + m]]
        basis = [basis[r] for r in keep]
        T[-1, :] = 0.0
        T[-1, :n] = c
        for i, j in enumerate(basis):
            T[-1] -= c[j] * T[i]
        status = self._run(T, basis, np.ones(n, dtype=bool))
        if status != OPTIMAL:
            return status, None, None
        y = np.zeros(n)
        # refine the basic solution against the unreduced system
        Ab = A[keep][:, basis]
        try:
            yb = np.linalg.solve(Ab, b[keep])
        except np.linalg.LinAlgError:
            yb = T[:-1, -1]
        y[basis] = np.maximum(yb, 0.0)
        return OPTIMAL, y, basis


def _to_standard_form(model: LpModel, extra: Sequence[Constraint] = ()):
    """Map the model onto ``min c y, A y = b, y >= 0``; returns a back-substitution."""
    n = model.num_vars
    lb, ub = model.lb, model.ub
    # x = shift + S y
    cols = []  # (var, sign)
    shift = np.zeros(n)
    bound_rows = []
    for j in range(n):
        lo, hi = lb[j], ub[j]
        if lo > hi + FEAS_TOL:
            return None
        if math.isfinite(lo) and math.isfinite(hi) and hi - lo <= 0.0:
            shift[j] = lo
            continue
        if math.isfinite(lo):
            shift[j] = lo
            cols.append((j, 1.0))
            if math.isfinite(hi):
                bound_rows.append((len(cols) - 1, hi - lo))
        elif math.isfinite(hi):
            shift[j] = hi
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    S = np.zeros((n, len(cols)))
    for k, (j, s) in enumerate(cols):
        S[j, k] = s
    cons = list(model.constraints) + list(extra)
    rows, senses, rhs = [], [], []
    for con in cons:
        a = np.asarray(con.coeffs)
        rows.append(a @ S)
        senses.append(con.sense)
        rhs.append(con.rhs - float(a @ shift))
    for k, width in bound_rows:
        r = np.zeros(len(cols))
        r[k] = 1.0
        rows.append(r)
        senses.append("<=")
        rhs.append(width)
    n_struct = len(cols)
    n_slack = sum(1 for s in senses if s != "==")
    A = np.zeros((len(rows), n_struct + n_slack))
    b = np.zeros(len(rows))
    k = n_struct
    for i, (r, s, h) in enumerate(zip(rows, senses, rhs)):
        scale = float(np.abs(r).max(initial=0.0))
        if scale == 0.0:
            # empty row: consistent or infeasible on its own
            if (s == "<=" and h < -FEAS_TOL) or (s == ">=" and h > FEAS_TOL) or (s == "==" and abs(h) > FEAS_TOL):
                return None
            scale = 1.0
        A[i, :n_struct] = r / scale
        b[i] = h / scale
        if s == "<=":
            A[i, k] = 1.0
            k += 1
        elif s == ">=":
            A[i, k] = -1.0
            k += 1
        if b[i] < 0:
            A[i] *= -1.0
            b[i] *= -1.0
    sign = -1.0 if model.maximize else 1.0
    c = np.zeros(A.shape[1])
    c[:n_struct] = sign * (model.objective @ S)
    return A, b, c, S, shift, n_struct


def solve_lp(model: LpModel, extra: Sequence[Constraint] = (), max_pivots: int = MAX_PIVOTS) -> Solution:
    """Solve ``model`` (plus ``extra`` rows) with the two-phase simplex."""
    sf = _to_standard_form(model, extra)
    if sf is None:
        return Solution(INFEASIBLE)
    A, b, c, S, shift, n_struct = sf
    if A.shape[0] == 0:
        # only sign restrictions: optimum at y = 0 unless some cost is negative
        if (c < -COST_TOL).any():
            return Solution(UNBOUNDED)
        x = shift.copy()
        return Solution(OPTIMAL, float(model.objective @ x), x)
    tab = _Tableau(A, b, c, max_pivots)
    status, y, _ = tab.solve()
    if status != OPTIMAL:
        return Solution(status, pivots=tab.pivots)
    x = shift + S @ y[:n_struct]
    viol = max((con.residual(x) for con in itertools.chain(model.constraints, extra)), default=0.0)
    return Solution(OPTIMAL, float(model.objective @ x), x, pivots=tab.pivots, max_violation=viol)


# --------------------------------------------------------------------------
# MILP
# --------------------------------------------------------------------------

def _node_lp(model: MilpModel, fixed: dict[int, int]):
    lp = model.base.copy()
    for j, v in fixed.items():
        lp.lb[j] = lp.ub[j] = float(v)
    active = [ind.constraint for ind in model.indicators if fixed.get(ind.binary) == ind.value]
    return lp, active


def _sense_key(model: MilpModel, obj: float) -> float:
    return -obj if model.base.maximize else obj


def _improves(key: float, best_key: float) -> bool:
    if math.isinf(best_key):
        return True
    return key < best_key - 1e-9 * max(1.0, abs(best_key))


def solve_milp(model: MilpModel, max_nodes: int = MAX_NODES, max_pivots: int = MAX_PIVOTS) -> Solution:
    """Best-first branch-and-bound.

    Branching takes the most fractional binary (smallest index on ties);
    when every binary is integral it branches on the violated indicator
    with the largest violation.  Node order is ``(bound, creation order)``
    so repeated runs explore identical trees.
    """
    counter = itertools.count()
    incumbent: Solution | None = None
    best_key = math.inf
    heap: list = []
    nodes = 0
    pivots = 0

    def evaluate(fixed):
        nonlocal pivots
        lp, active = _node_lp(model, fixed)
        sol = solve_lp(lp, active, max_pivots)
        pivots += sol.pivots
        return sol

    root = evaluate({})
    nodes += 1
    if root.status == UNBOUNDED:
        return Solution(UNBOUNDED, node_count=nodes, pivots=pivots)
    if root.status == ITERATION_LIMIT:
        return Solution(ITERATION_LIMIT, node_count=nodes, pivots=pivots)
    if root.ok:
        heapq.heappush(heap, (_sense_key(model, root.objective), next(counter), {}, root))
    while heap:
        key, _, fixed, sol = heapq.heappop(heap)
        if not _improves(key, best_key):
            continue
        x = sol.x
        frac = [(abs(x[j] - round(x[j])), j) for j in model.binaries if j not in fixed]
        frac = [(f, j) for f, j in frac if f > INT_TOL]
        branch = None
        if frac:
            fmax = max(f for f, _ in frac)
            branch = min(j for f, j in frac if f >= fmax - 1e-12)
        else:
            worst, worst_j = 0.0, None
            for ind in model.indicators:
                if ind.binary in fixed or round(x[ind.binary]) != ind.value:
                    continue
                v = ind.constraint.residual(x)
                if v > FEAS_TOL and (v > worst + 1e-12 or (abs(v - worst) <= 1e-12 and ind.binary < worst_j)):
                    worst, worst_j = v, ind.binary
            branch = worst_j
        if branch is None:
            # integral and indicator-feasible: polish with every binary fixed
            full = dict(fixed)
            for j in model.binaries:
                full.setdefault(j, int(round(x[j])))
            leaf = evaluate(full)
            nodes += 1
            if leaf.ok:
                lk = _sense_key(model, leaf.objective)
                if lk < best_key:
                    best_key, incumbent = lk, leaf
            continue
        for v in (0, 1):
            child = dict(fixed)
            child[branch] = v
            if nodes >= max_nodes:
                return Solution(ITERATION_LIMIT, incumbent.objective if incumbent else math.nan,
                                incumbent.x if incumbent else None, nodes, pivots)
            csol = evaluate(child)
            nodes += 1
            if csol.status == ITERATION_LIMIT:
                return Solution(ITERATION_LIMIT, node_count=nodes, pivots=pivots)
            if csol.ok:
                ck = _sense_key(model, csol.objective)
                if _improves(ck, best_key):
                    heapq.heappush(heap, (ck, next(counter), child, csol))
    if incumbent is None:
        return Solution(INFEASIBLE, node_count=nodes, pivots=pivots)
    return Solution(OPTIMAL, incumbent.objective, incumbent.x, nodes, pivots, incumbent.max_violation)


def milp_bruteforce_oracle(model: MilpModel, max_binaries: int = 20) -> Solution:
    """Enumerate every binary assignment and solve the remaining LP."""
    B = model.binaries
    if len(B) > max_binaries:
        raise ValueError(f"{len(B)} binaries exceed the brute-force cap {max_binaries}")
    best: Solution | None = None
    best_key = math.inf
    count = 0
    for bits in itertools.product((0, 1), repeat=len(B)):
        lp, active = _node_lp(model, dict(zip(B, bits)))
        sol = solve_lp(lp, active)
        count += 1
        if sol.status == UNBOUNDED:
            return Solution(UNBOUNDED, node_count=count)
        if sol.ok:
            key = _sense_key(model, sol.objective)
            if key < best_key - 1e-12:
                best, best_key = sol, key
    if best is None:
        return Solution(INFEASIBLE, node_count=count)
    return Solution(OPTIMAL, best.objective, best.x, count, best.pivots, best.max_violation)


# --------------------------------------------------------------------------
# LP-format dump
# --------------------------------------------------------------------------

def _linear(coeffs, names) -> str:
    terms = [f"{'+' if c >= 0 else '-'} {abs(c):.17g} {nm}" for c, nm in zip(coeffs, names) if c != 0]
    return " ".join(terms) if terms else "0"


def to_lp_format(model: LpModel | MilpModel) -> str:
    """CPLEX LP text for cross-checking with external solvers."""
    milp = model if isinstance(model, MilpModel) else MilpModel(model.copy())
    lp = milp.base
    sense = {"<=": "<=", ">=": ">=", "==": "="}
    out = ["Maximize" if lp.maximize else "Minimize", f" obj: {_linear(lp.objective, lp.names)}", "Subject To"]
    for i, con in enumerate(lp.constraints):
        out.append(f" {con.name or f'c{i}'}: {_linear(con.coeffs, lp.names)} {sense[con.sense]} {con.rhs:.17g}")
    for i, ind in enumerate(milp.indicators):
        con = ind.constraint
        out.append(f" {con.name or f'ind{i}'}: {lp.names[ind.binary]} = {ind.value} -> "
                   f"{_linear(con.coeffs, lp.names)} {sense[con.sense]} {con.rhs:.17g}")
    out.append("Bounds")
    bset = set(milp.binaries)
    for j, nm in enumerate(lp.names):
        if j in bset:
            continue
        lo, hi = lp.lb[j], lp.ub[j]
        if math.isinf(lo) and math.isinf(hi):
            out.append(f" {nm} free")
        else:
            out.append(f" {'-inf' if math.isinf(lo) else f'{lo:.17g}'} <= {nm} <= {'+inf' if math.isinf(hi) else f'{hi:.17g}'}")
    if bset:
        out.append("Binaries")
        out.append(" " + " ".join(lp.names[j] for j in milp.binaries))
    out.append("End")
    return "\n".join(out) + "\n"
