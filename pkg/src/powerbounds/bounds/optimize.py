"""LP and MILP searches for the best bounding polynomial.

Every MILP here is posed over polynomial *values* expressed in an
orthonormal basis of degree-``k`` polynomials on the distinct eigenvalues
(see :func:`powerbounds.spectral.orthonormal_basis`).  The sign indicators
``b_j`` are indicator constraints by default; ``big_m`` switches to the
literal big-M rows with doubling on infeasibility.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..graph import Graph, closed_walk_counts, is_k_partially_walk_regular
from ..solver import (
    INFEASIBLE,
    OPTIMAL,
    Constraint,
    Indicator,
    LpModel,
    MilpModel,
    Solution,
    solve_lp,
    solve_milp,
)
from ..spectral import (
    Polynomial,
    Spectrum,
    divided_difference_form,
    eigenvalues_symmetric,
    orthonormal_basis,
    poly_eval,
    poly_matrix_diagonal,
)
from .closed import _count, _full_values, _walk_regular_ok, repair_second_inertial
from .report import (
    COUNT_TOL,
    FAILED,
    BoundError,
    BoundReport,
    make_certificate,
    not_applicable,
    value_tol,
)

EPSILON = 1.0
BIG_M_DOUBLINGS = 10


class SolverFailure(RuntimeError):
    """The LP/MILP solver stopped without an optimal solution."""


def default_big_m(spectrum: Spectrum, k: int) -> float:
    return 1e3 * float(np.abs(spectrum.distinct).max()) ** k


def _thetas(spectrum: Spectrum) -> list:
    return list(spectrum.exact) if spectrum.exact is not None else [float(t) for t in spectrum.distinct]


def _check_k(spectrum: Spectrum, k: int) -> int:
    if k < 1:
        raise BoundError("k must be at least 1")
    return min(k, spectrum.d)


# --------------------------------------------------------------------------
# LPs over polynomial values
# --------------------------------------------------------------------------

def _dd_rows(spectrum: Spectrum, k: int) -> list[np.ndarray]:
    """Divided-difference forms of orders ``k+1 .. d`` (each scaled to unit max-norm)."""
    theta = _thetas(spectrum)
    rows = []
    for m in range(k + 1, spectrum.d + 1):
        form = np.array([float(c) for c in divided_difference_form(theta, m)])
        rows.append(form / np.abs(form).max())
    return rows


def _degree_rows(spectrum: Spectrum, k: int) -> list[np.ndarray]:
    """Orthonormal rows spanning the same space as :func:`_dd_rows`.

    Both annihilate exactly the value vectors of degree-``<= k`` polynomials.
    High-order divided differences on many close eigenvalues are badly
    conditioned, so the LPs use the orthogonal complement of the
    orthonormal-basis columns instead.
    """
    Q, _ = orthonormal_basis(spectrum.distinct, k)
    U, _ = np.linalg.qr(Q, mode="complete")
    return list(U[:, Q.shape[1]:].T)


def _values_polynomial(spectrum: Spectrum, x: np.ndarray, k: int) -> Polynomial:
    """Degree-``<= k`` polynomial through the values ``x`` (least squares in the orthonormal basis)."""
    Q, C = orthonormal_basis(spectrum.distinct, k)
    a, *_ = np.linalg.lstsq(Q, np.asarray(x, dtype=float), rcond=None)
    resid = float(np.abs(Q @ a - x).max())
    if resid > 1e-6 * max(1.0, float(np.abs(x).max())):
        raise SolverFailure(f"LP values are not those of a degree-{k} polynomial (residual {resid:.3g})")
    return Polynomial(tuple(a @ C))


def minor_polynomial(spectrum: Spectrum, k: int, G: Graph | None = None) -> tuple[Polynomial | None, list[BoundReport]]:
    """Minor polynomial ``f_k``: minimize ``sum m_i f(theta_i)`` with ``f(theta_0) = 1``
    and ``f(theta_i) >= 0``.  Returns ``f_k`` and the alpha_k / chi_k reports."""
    t0 = time.perf_counter()
    kk = _check_k(spectrum, k)
    d = spectrum.d
    lb = np.zeros(d + 1)
    ub = np.full(d + 1, np.inf)
    lb[0] = ub[0] = 1.0
    lp = LpModel(d + 1, spectrum.mult.astype(float), lb=lb, ub=ub,
                 names=[f"x{i}" for i in range(d + 1)])
    for i, row in enumerate(_degree_rows(spectrum, kk)):
        lp.add(row, "==", 0.0, f"deg{i}")
    sol = solve_lp(lp)
    if not sol.ok:
        raise SolverFailure(f"minor-polynomial LP: {sol.status}")
    x = sol.x
    f = _values_polynomial(spectrum, x, kk)
    n = spectrum.n
    value = float(np.dot(spectrum.mult, x))
    # closure: the ratio form of f reproduces the LP value
    fv = poly_eval(f.as_float(), spectrum.distinct)
    lam = min(0.0, float(fv[1:].min())) if d else 0.0
    recomputed = (float(np.dot(spectrum.mult, fv)) - n * lam) / (float(fv[0]) - lam)
    verified = abs(recomputed - value) <= 1e-6 * max(1.0, value)
    params = {"values": x.tolist(), "recomputed": recomputed, "k_used": kk}
    status_msg = ""
    applicable = G is None or is_k_partially_walk_regular(G, k)
    cert = make_certificate(f, spectrum)
    reps = [BoundReport("minor-poly", "alpha", k, value, cert, verified, params=dict(params)),
            BoundReport("minor-poly-chi", "chi", k, n / value, cert, verified, params=dict(params))]
    if not applicable:
        for r in reps:
            r.status = "not-applicable"
            r.message = f"graph is not {k}-partially walk-regular"
    dt = (time.perf_counter() - t0) * 1000
    for r in reps:
        r.millis = dt
    return f, reps


def max_g_polynomial(spectrum: Spectrum, k: int, G: Graph | None = None) -> tuple[Polynomial | None, list[BoundReport]]:
    """Maximize ``g(theta_0)`` subject to ``sum m_i g(theta_i) = 0`` and ``g(theta_i) >= -1``."""
    t0 = time.perf_counter()
    kk = _check_k(spectrum, k)
    d = spectrum.d
    lb = np.full(d + 1, -1.0)
    lb[0] = -np.inf
    c = np.zeros(d + 1)
    c[0] = 1.0
    lp = LpModel(d + 1, c, maximize=True, lb=lb, names=[f"x{i}" for i in range(d + 1)])
    mult = spectrum.mult.astype(float)
    lp.add(mult / mult.max(), "==", 0.0, "trace")
    for i, row in enumerate(_degree_rows(spectrum, kk)):
        lp.add(row, "==", 0.0, f"deg{i}")
    sol = solve_lp(lp)
    if not sol.ok:
        raise SolverFailure(f"LLP: {sol.status}")
    x = sol.x
    g = _values_polynomial(spectrum, x, kk)
    n = spectrum.n
    g0 = float(x[0])
    gv = poly_eval(g.as_float(), spectrum.distinct)
    lam = float(gv[1:].min()) if d else -1.0
    recomputed = n / (1.0 - float(gv[0]) / lam) if lam < 0 else math.inf
    value = n / (1.0 + g0)
    verified = abs(recomputed - value) <= 1e-6 * max(1.0, value)
    params = {"g(theta_0)": g0, "values": x.tolist(), "recomputed": recomputed, "k_used": kk}
    cert = make_certificate(g, spectrum)
    reps = [BoundReport("llp", "alpha", k, value, cert, verified, params=dict(params)),
            BoundReport("llp-chi", "chi", k, 1.0 + g0, cert, verified, params=dict(params))]
    if G is not None and not is_k_partially_walk_regular(G, k):
        for r in reps:
            r.status = "not-applicable"
            r.message = f"graph is not {k}-partially walk-regular"
    dt = (time.perf_counter() - t0) * 1000
    for r in reps:
        r.millis = dt
    return g, reps


# --------------------------------------------------------------------------
# inertia MILPs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Basis:
    Q: np.ndarray  # Q[j, r] = P_r(theta_j)
    C: np.ndarray  # C[r, i] = coefficient of x^i in P_r

    def polynomial(self, a: np.ndarray) -> Polynomial:
        return Polynomial(tuple(a @ self.C))


def _basis(spectrum: Spectrum, k: int) -> _Basis:
    Q, C = orthonormal_basis(spectrum.distinct, k)
    return _Basis(Q, C)


def _inertia_milp(basis: _Basis, mult: np.ndarray, equalities: Sequence[np.ndarray],
                  inequalities: Sequence[np.ndarray], big_m: float | None,
                  point_rows: np.ndarray | None = None, binary_cost: np.ndarray | None = None) -> MilpModel:
    """``min cost.b`` s.t. ``b_j = 0 => p(theta_j) <= -eps`` plus linear rows on ``a``."""
    kp1 = basis.Q.shape[1]
    rows = basis.Q if point_rows is None else point_rows
    nb = rows.shape[0]
    nv = kp1 + nb
    cost = mult if binary_cost is None else binary_cost
    obj = np.concatenate([np.zeros(kp1), np.asarray(cost, dtype=float)])
    lb = np.concatenate([np.full(kp1, -np.inf), np.zeros(nb)])
    ub = np.concatenate([np.full(kp1, np.inf), np.ones(nb)])
    names = [f"a{r}" for r in range(kp1)] + [f"b{j}" for j in range(nb)]
    lp = LpModel(nv, obj, lb=lb, ub=ub, names=names)
    pad = np.zeros(nb)
    for i, row in enumerate(equalities):
        lp.add(np.concatenate([row, pad]), "==", 0.0, f"eq{i}")
    for i, row in enumerate(inequalities):
        lp.add(np.concatenate([row, pad]), ">=", 0.0, f"diag{i}")
    inds = []
    for j in range(nb):
        coeffs = np.zeros(nv)
        coeffs[:kp1] = rows[j]
        if big_m is None:
            inds.append(Indicator(kp1 + j, 0, Constraint(tuple(coeffs), "<=", -EPSILON, f"neg{j}")))
        else:
            coeffs[kp1 + j] = -big_m
            lp.add(coeffs, "<=", -EPSILON, f"bigm{j}")
    return MilpModel(lp, tuple(range(kp1, nv)), inds)


def _solve_with_big_m(build, big_m: float | None):
    """Solve, doubling ``big_m`` on infeasibility when the literal formulation is used."""
    if big_m is None:
        return solve_milp(build(None)), None
    M = big_m
    for _ in range(BIG_M_DOUBLINGS + 1):
        sol = solve_milp(build(M))
        if sol.status != INFEASIBLE:
            return sol, M
        M *= 2.0
    return sol, M


def _count_nonneg(p: Polynomial, spectrum: Spectrum, threshold, tol) -> tuple[int, int]:
    vals, mult = _full_values(p, spectrum)
    t = 0 if spectrum.exact is not None else tol
    ge = _count(vals, mult, lambda v: v >= threshold - t)
    le = _count(vals, mult, lambda v: v <= threshold + t)
    return ge, le


def milp_inertia_walk_regular(spectrum: Spectrum, k: int, G: Graph | None = None,
                              big_m: float | None = None, tol: float = COUNT_TOL) -> BoundReport:
    """Single MILP for k-partially walk-regular graphs (trace of ``p(A)`` is zero)."""
    t0 = time.perf_counter()
    if not _walk_regular_ok(G, spectrum, k):
        return not_applicable("milp-wr", "alpha", k, f"graph is not {k}-partially walk-regular")
    kk = _check_k(spectrum, k)
    basis = _basis(spectrum, kk)
    mult = spectrum.mult.astype(float)
    trace_row = mult @ basis.Q
    sol, M = _solve_with_big_m(lambda M: _inertia_milp(basis, mult, [trace_row], [], M), big_m)
    if not sol.ok:
        raise SolverFailure(f"walk-regular inertia MILP: {sol.status}")
    a = sol.x[: kk + 1]
    p = basis.polynomial(a)
    objective = float(sol.objective)
    # certificate: the walk-regular inertial count at the exact mean of p
    vals, m = _full_values(p, spectrum)
    if spectrum.exact is not None:
        thr = sum(v * mm for v, mm in zip(vals, m)) / spectrum.n
        t = 0
    else:
        thr = float(np.dot(vals, m)) / spectrum.n
        t = value_tol(vals, tol)
    ge = _count(vals, m, lambda v: v >= thr - t)
    le = _count(vals, m, lambda v: v <= thr + t)
    recomputed = float(min(ge, le))
    verified = recomputed <= objective + 1e-6
    cert = make_certificate(p, spectrum)
    rep = BoundReport("milp-wr", "alpha", k, recomputed if verified else objective, cert, verified,
                      params={"milp_objective": objective, "b": [int(round(v)) for v in sol.x[kk + 1:]],
                              "nodes": sol.node_count, "big_m": M, "epsilon": EPSILON,
                              "formulation": "indicator" if big_m is None else "big-m",
                              "count_ge": ge, "count_le": le})
    if not verified:
        rep.status = FAILED
        rep.message = "certificate does not reproduce the MILP objective"
    rep.millis = (time.perf_counter() - t0) * 1000
    return rep


@dataclass(frozen=True)
class _VertexTask:
    basis_Q: np.ndarray
    basis_C: np.ndarray
    mult: np.ndarray
    profile_rows: np.ndarray  # rows for every distinct walk profile
    target: int
    big_m: float | None


def _solve_vertex(task: _VertexTask):
    basis = _Basis(task.basis_Q, task.basis_C)
    eq = [task.profile_rows[task.target]]
    ineq = [r for i, r in enumerate(task.profile_rows) if i != task.target]
    sol, M = _solve_with_big_m(lambda M: _inertia_milp(basis, task.mult, eq, ineq, M), task.big_m)
    return sol.status, (float(sol.objective) if sol.ok else math.nan), \
        (sol.x[: basis.Q.shape[1]].copy() if sol.ok else None), sol.node_count, M


def _map(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as ex:
        return list(ex.map(fn, tasks))


def milp_inertia_per_vertex(G: Graph, k: int, spectrum: Spectrum | None = None, big_m: float | None = None,
                            jobs: int = 1, first_optimal: bool = False, tol: float = COUNT_TOL) -> BoundReport:
    """One MILP per vertex ``u`` (``p(A)_uu = 0``, other diagonals ``>= 0``); best over ``u``.

    Vertices sharing the same closed-walk profile ``((A^i)_uu)_{i<=k}`` pose
    identical problems, so one MILP is solved per distinct profile and the
    minimum is attributed to the smallest vertex carrying it.
    """
    t0 = time.perf_counter()
    spectrum = spectrum if spectrum is not None else eigenvalues_symmetric(G)
    kk = _check_k(spectrum, k)
    basis = _basis(spectrum, kk)
    walks = closed_walk_counts(G, kk)
    profiles: list[tuple[int, ...]] = []
    first_vertex: list[int] = []
    index: dict[tuple[int, ...], int] = {}
    for u in range(G.n):
        prof = tuple(int(walks[i][u]) for i in range(kk + 1))
        if prof not in index:
            index[prof] = len(profiles)
            profiles.append(prof)
            first_vertex.append(u)
    P = np.array(profiles, dtype=float)  # monomial diagonals
    rows = P @ basis.C.T  # diag of P_r(A) per profile
    rows = rows / np.abs(rows).max(axis=1, keepdims=True).clip(min=1e-300)
    mult = spectrum.mult.astype(float)
    M0 = None if big_m is None else big_m
    tasks = [_VertexTask(basis.Q, basis.C, mult, rows, i, M0) for i in range(len(profiles))]
    floor_value = float(mult.min())
    if first_optimal and jobs <= 1:
        results = []
        for t in tasks:
            results.append(_solve_vertex(t))
            if results[-1][0] == OPTIMAL and results[-1][1] <= floor_value + 1e-9:
                break
    else:
        results = _map(_solve_vertex, tasks, jobs)
    best = None
    for i, (status, obj, a, nodes, M) in enumerate(results):
        if status != OPTIMAL:
            raise SolverFailure(f"per-vertex inertia MILP (vertex {first_vertex[i]}): {status}")
        if best is None or obj < best[1] - 1e-9:
            best = (i, obj, a, nodes, M)
    i, objective, a, nodes, M = best
    p = Polynomial(tuple(a @ basis.C))
    # certificate: general inertial count with the exact diagonal of p(A)
    diag = poly_matrix_diagonal(G, p.exact())
    W = max(diag)
    w = min(diag)
    vals, m = _full_values(p, spectrum)
    t = value_tol([float(v) for v in vals], tol)
    if spectrum.exact is not None:
        t = 0
    ge = _count(vals, m, lambda v: v >= w - t)
    le = _count(vals, m, lambda v: v <= W + t)
    recomputed = float(min(ge, le))
    verified = recomputed <= objective + 1e-6
    rep = BoundReport("milp-vertex", "alpha", k, recomputed if verified else objective,
                      make_certificate(p, spectrum), verified,
                      params={"milp_objective": objective, "vertex": first_vertex[i],
                              "profiles": len(profiles), "W": float(W), "w": float(w),
                              "big_m": M, "epsilon": EPSILON, "nodes": nodes,
                              "formulation": "indicator" if big_m is None else "big-m",
                              "first_optimal": first_optimal})
    if not verified:
        rep.status = FAILED
        rep.message = "certificate does not reproduce the MILP objective"
    rep.millis = (time.perf_counter() - t0) * 1000
    return rep


# --------------------------------------------------------------------------
# second inertial MILP
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _SecondTask:
    Q: np.ndarray  # values of the basis at every eigenvalue (with repetition)
    groups: tuple[tuple[int, ...], ...]
    ell: int
    big_m: float | None


def _second_model(task: _SecondTask, M: float | None) -> MilpModel:
    Q = task.Q
    n, kp1 = Q.shape
    nv = kp1 + 2 * n
    b0, c0 = kp1, kp1 + n
    obj = np.zeros(nv)
    obj[b0:c0] = 1.0  # minimize 1^T b, i.e. maximize 1 + (n - 1^T b) / ell
    lb = np.concatenate([np.full(kp1, -np.inf), np.zeros(2 * n)])
    ub = np.concatenate([np.full(kp1, np.inf), np.ones(2 * n)])
    names = [f"a{r}" for r in range(kp1)] + [f"b{j}" for j in range(n)] + [f"c{j}" for j in range(n)]
    lp = LpModel(nv, obj, lb=lb, ub=ub, names=names)
    tr = np.zeros(nv)
    tr[:kp1] = Q.sum(axis=0)
    lp.add(tr / max(1.0, np.abs(tr).max()), "==", 0.0, "trace")
    cs = np.zeros(nv)
    cs[c0:] = 1.0
    lp.add(cs, "==", float(task.ell), "ell")
    # repeated eigenvalues carry identical values of p: order their indicators
    for grp in task.groups:
        for j, j2 in zip(grp[:-1], grp[1:]):
            for off in (b0, c0):
                row = np.zeros(nv)
                row[off + j] = 1.0
                row[off + j2] = -1.0
                lp.add(row, ">=", 0.0, f"sym{off + j}")
    inds = []
    for j in range(n):
        row_b = np.zeros(nv)
        row_b[:kp1] = Q[j]
        row_c = row_b.copy()
        if M is None:
            inds.append(Indicator(b0 + j, 0, Constraint(tuple(row_b), "<=", -EPSILON, f"neg{j}")))
            inds.append(Indicator(c0 + j, 0, Constraint(tuple(row_c), "<=", 0.0, f"nonpos{j}")))
        else:
            row_b[b0 + j] = -M
            row_c[c0 + j] = -M
            lp.add(row_b, "<=", -EPSILON, f"bigm_b{j}")
            lp.add(row_c, "<=", 0.0, f"bigm_c{j}")
    return MilpModel(lp, tuple(range(kp1, nv)), inds)


def _solve_second(task: _SecondTask):
    sol, M = _solve_with_big_m(lambda M: _second_model(task, M), task.big_m)
    kp1 = task.Q.shape[1]
    return sol.status, (float(sol.objective) if sol.ok else math.nan), \
        (sol.x[:kp1].copy() if sol.ok else None), sol.node_count


def milp_second_inertial(spectrum: Spectrum, k: int, G: Graph | None = None, big_m: float | None = None,
                         jobs: int = 1, max_n: int = 40) -> BoundReport:
    """Sweep ``ell = 1 .. n-1`` of the second inertial MILP; each optimum is repaired."""
    t0 = time.perf_counter()
    if not _walk_regular_ok(G, spectrum, k):
        return not_applicable("milp-second", "chi", k, f"graph is not {k}-partially walk-regular")
    n = spectrum.n
    if n > max_n:
        return not_applicable("milp-second", "chi", k, f"n = {n} exceeds the sweep cap {max_n}")
    kk = _check_k(spectrum, k)
    basis = _basis(spectrum, kk)
    Q = np.repeat(basis.Q, spectrum.mult, axis=0)
    groups, start = [], 0
    for m in spectrum.mult:
        groups.append(tuple(range(start, start + int(m))))
        start += int(m)
    tasks = [_SecondTask(Q, tuple(groups), ell, big_m) for ell in range(1, n)]
    results = _map(_solve_second, tasks, jobs)
    best = None
    sweep = []
    for task, (status, obj, a, nodes) in zip(tasks, results):
        if status == INFEASIBLE:
            sweep.append({"ell": task.ell, "status": status})
            continue
        if status != OPTIMAL:
            raise SolverFailure(f"second inertial MILP (ell={task.ell}): {status}")
        raw = 1.0 + (n - obj) / task.ell
        p = basis.polynomial(a)
        repaired, counts, pattern = repair_second_inertial(p, spectrum, kk)
        sweep.append({"ell": task.ell, "raw": raw, "repaired": repaired})
        if best is None or repaired > best[0] + 1e-12:
            best = (repaired, raw, p, task.ell, counts, pattern)
    if best is None:
        raise SolverFailure("second inertial MILP infeasible for every ell")
    repaired, raw, p, ell, counts, pattern = best
    cert = make_certificate(p, spectrum)
    rep = BoundReport("milp-second", "chi", k, repaired, cert, True,
                      params={"ell": ell, "raw_objective": raw, "repaired": abs(raw - repaired) > 1e-9,
                              "neg": counts[0], "zero": counts[1], "pos": counts[2], "sweep": sweep,
                              "formulation": "indicator" if big_m is None else "big-m"})
    rep.millis = (time.perf_counter() - t0) * 1000
    return rep
