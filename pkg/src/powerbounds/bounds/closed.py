"""Bounds that are evaluated directly from a spectrum and a fixed polynomial."""

from __future__ import annotations

import functools
import math
import time
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..graph import Graph, girth, harmonic_mean_sk, is_connected, is_k_partially_walk_regular
from ..spectral import (
    Polynomial,
    Spectrum,
    SpectrumError,
    eigenvalues_symmetric,
    functionals,
    poly_eval,
    predistance_polynomials,
    qk_from_girth,
    trace_over_n,
)
from .report import (
    COUNT_TOL,
    NOT_APPLICABLE,
    BoundError,
    BoundReport,
    make_certificate,
    not_applicable,
    value_tol,
)

X = Polynomial.x()


def _timed(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        dt = (time.perf_counter() - t0) * 1000.0
        reps = out if isinstance(out, (list, tuple)) else [out]
        for rep in reps:
            if isinstance(rep, BoundReport):
                rep.millis = dt
        return out
    return wrapper


def _full_values(p: Polynomial, spectrum: Spectrum) -> tuple[list, list[int]]:
    """``p`` at distinct eigenvalues (exact when possible) and their multiplicities."""
    if spectrum.exact is not None:
        vals = [poly_eval(p, t) for t in spectrum.exact]
    else:
        vals = [float(v) for v in poly_eval(p.as_float(), spectrum.distinct)]
    return vals, [int(m) for m in spectrum.mult]


def _count(vals, mult, pred) -> int:
    return sum(m for v, m in zip(vals, mult) if pred(v))


def _require_regular(G: Graph | None, spectrum: Spectrum, method: str) -> None:
    ok = G.is_regular() if G is not None else spectrum.is_regular()
    if not ok:
        raise BoundError(f"{method}: graph is not regular")


# --------------------------------------------------------------------------
# classic bounds
# --------------------------------------------------------------------------

@_timed
def bound_cvetkovic(spectrum: Spectrum, tol: float = COUNT_TOL) -> BoundReport:
    """Inertia bound: min of the nonnegative and nonpositive eigenvalue counts."""
    vals, mult = _full_values(X, spectrum)
    t = 0 if spectrum.exact is not None else tol
    nonneg = _count(vals, mult, lambda v: v >= -t)
    nonpos = _count(vals, mult, lambda v: v <= t)
    return BoundReport("cvetkovic", "alpha", 1, float(min(nonneg, nonpos)),
                       params={"nonnegative": nonneg, "nonpositive": nonpos})


@_timed
def bound_hoffman(spectrum: Spectrum, G: Graph | None = None) -> BoundReport:
    """Ratio bound ``n / (1 - lambda_1 / lambda_n)`` for regular graphs."""
    _require_regular(G, spectrum, "hoffman")
    lo = float(spectrum.distinct[-1])
    if lo >= 0:
        raise BoundError("hoffman: smallest eigenvalue must be negative")
    hi = float(spectrum.distinct[0])
    return BoundReport("hoffman", "alpha", 1, spectrum.n / (1.0 - hi / lo))


@_timed
def bound_elphick_wocjan_classic(spectrum: Spectrum, tol: float = COUNT_TOL) -> BoundReport:
    """``chi >= 1 + max(n+/n-, n-/n+)``."""
    vals, mult = _full_values(X, spectrum)
    t = 0 if spectrum.exact is not None else tol
    pos = _count(vals, mult, lambda v: v > t)
    neg = _count(vals, mult, lambda v: v < -t)
    zero = spectrum.n - pos - neg
    value = 1.0 if pos == 0 or neg == 0 else 1.0 + max(pos / neg, neg / pos)
    return BoundReport("elphick-wocjan", "chi", 1, value, params={"n+": pos, "n-": neg, "n0": zero})


@_timed
def chi_from_alpha(report: BoundReport, n: int) -> BoundReport:
    """``chi_k >= ceil(n / alpha_k-bound)`` from an integer alpha_k upper bound."""
    if report.kind != "alpha":
        raise BoundError("chi_from_alpha needs an alpha bound")
    a = report.int_value
    if a is None:
        return not_applicable(f"chi-from-{report.method}", "chi", report.k, "source bound unavailable")
    if a < 1:
        raise BoundError("alpha bound must be at least 1")
    out = BoundReport(f"chi-from-{report.method}", "chi", report.k, n / a,
                      certificate=report.certificate, verified=report.verified,
                      params={"alpha_bound": a, "n": n})
    return out


# --------------------------------------------------------------------------
# general polynomial family (inertial and ratio forms)
# --------------------------------------------------------------------------

def _inertial_counts(vals, mult, lo, hi, tol):
    ge = _count(vals, mult, lambda v: v >= lo - tol)
    le = _count(vals, mult, lambda v: v <= hi + tol)
    return ge, le


@_timed
def bound_inertial_general(G: Graph, p: Polynomial, k: int, spectrum: Spectrum | None = None,
                           tol: float = COUNT_TOL) -> BoundReport:
    """``alpha_k <= min(#{p(lambda_i) >= w(p)}, #{p(lambda_i) <= W(p)})``."""
    if p.degree > k:
        raise BoundError(f"inertial: deg p = {p.degree} exceeds k = {k}")
    spectrum = spectrum if spectrum is not None else eigenvalues_symmetric(G)
    f = functionals(G, p, spectrum)
    vals, mult = _full_values(p.as_float(), spectrum)
    t = value_tol(list(vals) + [f.W, f.w], tol)
    ge, le = _inertial_counts(vals, mult, f.w, f.W, t)
    cert = make_certificate(p, spectrum, t)
    return BoundReport("inertial", "alpha", k, float(min(ge, le)), cert, True,
                       params={"W": f.W, "w": f.w, "count_ge_w": ge, "count_le_W": le})


def ratio_general_value(spectrum: Spectrum, p: Polynomial, W: float) -> tuple[float, float]:
    vals = poly_eval(p.as_float(), spectrum.full)
    lam = float(np.min(vals[1:]))
    top = float(vals[0])
    if not top > lam + value_tol(vals):
        raise BoundError("ratio: p(lambda_1) must exceed lambda(p)")
    return spectrum.n * (W - lam) / (top - lam), lam


@_timed
def bound_ratio_general(G: Graph, p: Polynomial, k: int, spectrum: Spectrum | None = None) -> BoundReport:
    """``alpha_k <= n (W(p) - lambda(p)) / (p(lambda_1) - lambda(p))`` (regular G)."""
    if p.degree > k:
        raise BoundError(f"ratio: deg p = {p.degree} exceeds k = {k}")
    spectrum = spectrum if spectrum is not None else eigenvalues_symmetric(G)
    _require_regular(G, spectrum, "ratio")
    f = functionals(G, p, spectrum)
    value, lam = ratio_general_value(spectrum, p, f.W)
    cert = make_certificate(p, spectrum)
    return BoundReport("ratio", "alpha", k, value, cert, True, params={"W": f.W, "lambda": lam})


def _walk_regular_ok(G: Graph | None, spectrum: Spectrum, k: int) -> bool:
    if G is not None:
        return is_k_partially_walk_regular(G, k)
    return spectrum.walk_regular is not None and spectrum.walk_regular >= k


@_timed
def bounds_walk_regular(spectrum: Spectrum, p: Polynomial, k: int, G: Graph | None = None,
                        tol: float = COUNT_TOL) -> list[BoundReport]:
    """Inertial (threshold = mean of p over the spectrum), ratio and, for
    trace-zero ``p``, the Hoffman-like form ``n / (1 - p(lambda_1) / lambda(p))``."""
    if p.degree > k:
        raise BoundError(f"walk-regular: deg p = {p.degree} exceeds k = {k}")
    if not _walk_regular_ok(G, spectrum, k):
        reason = f"graph is not {k}-partially walk-regular"
        return [not_applicable(m, "alpha", k, reason) for m in ("wr-inertial", "wr-ratio", "wr-hoffman")]
    vals, mult = _full_values(p, spectrum)
    t_mean = trace_over_n(p, spectrum)
    exact = spectrum.exact is not None
    t = 0 if exact else value_tol(vals, tol)
    ge, le = _inertial_counts(vals, mult, t_mean, t_mean, t)
    cert = make_certificate(p, spectrum)
    out = [BoundReport("wr-inertial", "alpha", k, float(min(ge, le)), cert, True,
                       params={"threshold": float(t_mean), "count_ge": ge, "count_le": le})]
    fvals = [float(v) for v in vals]
    trace = float(t_mean) * spectrum.n
    top = fvals[0]
    rest = fvals[1:] if mult[0] == 1 else fvals
    lam = min(rest)
    if top > lam + value_tol(fvals):
        out.append(BoundReport("wr-ratio", "alpha", k, (trace - spectrum.n * lam) / (top - lam), cert, True,
                               params={"lambda": lam, "trace": trace}))
    else:
        out.append(not_applicable("wr-ratio", "alpha", k, "p(lambda_1) must exceed lambda(p)"))
    scale = max(1.0, max(abs(v) for v in fvals)) * spectrum.n
    if abs(trace) <= 1e-6 * scale and lam < 0:
        out.append(BoundReport("wr-hoffman", "alpha", k, spectrum.n / (1.0 - top / lam), cert, True,
                               params={"lambda": lam, "p(lambda_1)": top}))
    else:
        out.append(not_applicable("wr-hoffman", "alpha", k, "requires tr p(A) = 0 and lambda(p) < 0",
                                  trace=trace))
    return out


# --------------------------------------------------------------------------
# power-graph family (spectrum of G^k known through q'_k)
# --------------------------------------------------------------------------

def sum_polynomial(G: Graph, k: int, spectrum: Spectrum) -> tuple[Polynomial, str]:
    """``q_k`` from the girth recursion when ``k = floor((g-1)/2)``, else from predistance sums."""
    g = girth(G)
    if G.is_regular() and not math.isinf(g) and k <= (g - 1) // 2:
        return qk_from_girth(G.degree(0), g, k)[k], "girth"
    ps = predistance_polynomials(spectrum)
    if k > len(ps) - 1:
        raise BoundError(f"k = {k} exceeds the number of distinct eigenvalues minus one")
    q = Polynomial((0,))
    for pi in ps[: k + 1]:
        q = q + pi
    return q, "predistance"


@_timed
def bounds_corollary22(G: Graph, k: int, spectrum: Spectrum | None = None,
                       tol: float = COUNT_TOL) -> list[BoundReport]:
    """Inertia and ratio bounds applied to ``A(G^k) = q'_k(A)``.

    Emits, in order, the chi_k inertia form, the chi_k Hoffman form, the
    alpha_k inertia form and the alpha_k Hoffman form.  The Hoffman forms are
    the sound orientation ``alpha_k <= n / (1 - q'(l_1)/min q')`` and
    ``chi_k >= 1 - q'(l_1)/min q'``; the literal printed expression is kept
    as the ``printed_value`` parameter of the alpha report.
    """
    names = ("cor22-chi-inertia", "cor22-chi-ratio", "cor22-inertia", "cor22-ratio")
    kinds = ("chi", "chi", "alpha", "alpha")
    if not G.is_regular():
        return [not_applicable(m, c, k, "graph is not regular") for m, c in zip(names, kinds)]
    if not is_connected(G):
        return [not_applicable(m, c, k, "graph is disconnected") for m, c in zip(names, kinds)]
    spectrum = spectrum if spectrum is not None else eigenvalues_symmetric(G)
    try:
        q, source = sum_polynomial(G, k, spectrum)
    except (SpectrumError, BoundError) as exc:
        return [not_applicable(m, c, k, str(exc)) for m, c in zip(names, kinds)]
    H = harmonic_mean_sk(G, k)
    q0 = float(poly_eval(q.as_float(), spectrum.largest))
    params = {"q_source": source, "q_k(lambda_1)": q0, "H_k": H, "q_k": q.to_list()}
    if abs(q0 - H) > 1e-6 * max(1.0, H):
        return [not_applicable(m, c, k, "q_k(lambda_1) != H_k: A(G^k) is not a polynomial in A",
                               **params) for m, c in zip(names, kinds)]
    qp = q - 1
    vals = poly_eval(qp.as_float(), spectrum.full)
    t = value_tol(vals, tol)
    ge = int(np.sum(vals >= -t))
    le = int(np.sum(vals <= t))
    inertia = min(ge, le)
    top, low = float(vals[0]), float(vals.min())
    cert = make_certificate(qp, spectrum)
    n = spectrum.n
    out = [BoundReport(names[0], "chi", k, n / inertia, cert, True, params=dict(params))]
    if low < 0:
        ratio_alpha = n / (1.0 - top / low)
        ratio_chi = 1.0 - top / low
        printed = 1.0 - top / low
        out.append(BoundReport(names[1], "chi", k, ratio_chi, cert, True,
                               params=dict(params, printed_value=n / (1.0 - top / low))))
        out.append(BoundReport(names[2], "alpha", k, float(inertia), cert, True, params=dict(params)))
        out.append(BoundReport(names[3], "alpha", k, ratio_alpha, cert, True,
                               params=dict(params, printed_value=printed, min_q=low)))
    else:
        out.append(not_applicable(names[1], "chi", k, "min q'_k is not negative"))
        out.append(BoundReport(names[2], "alpha", k, float(inertia), cert, True, params=dict(params)))
        out.append(not_applicable(names[3], "alpha", k, "min q'_k is not negative"))
    return out


# --------------------------------------------------------------------------
# chi_k lower bounds
# --------------------------------------------------------------------------

@_timed
def bound_ratio_chi_k(G: Graph, p: Polynomial, k: int, spectrum: Spectrum | None = None) -> BoundReport:
    """``chi_k >= (p(lambda_1) - lambda(p)) / (W(p) - lambda(p))``; no regularity needed."""
    if p.degree > k:
        raise BoundError(f"ratio-chi: deg p = {p.degree} exceeds k = {k}")
    spectrum = spectrum if spectrum is not None else eigenvalues_symmetric(G)
    f = functionals(G, p, spectrum)
    vals = poly_eval(p.as_float(), spectrum.full)
    top = float(vals[0])
    if not top > f.Lam + value_tol(vals):
        raise BoundError("ratio-chi: p(lambda_1) must exceed p(lambda_i) for i >= 2")
    if not f.W > f.lam:
        raise BoundError("ratio-chi: W(p) must exceed lambda(p)")
    value = (top - f.lam) / (f.W - f.lam)
    return BoundReport("ratio-chi", "chi", k, value, make_certificate(p, spectrum), True,
                       params={"W": f.W, "lambda": f.lam, "Lambda": f.Lam})


@_timed
def bound_haemers_extended(spectrum: Spectrum, p: Polynomial, k: int, G: Graph | None = None,
                           tol: float = COUNT_TOL) -> BoundReport:
    """Least ``t >= 1`` with ``t >= 1 - Phi_{n-t+1} / Phi_2`` (Phi = sorted values of p)."""
    if not _walk_regular_ok(G, spectrum, k):
        return not_applicable("haemers", "chi", k, f"graph is not {k}-partially walk-regular")
    phi = np.sort(poly_eval(p.as_float(), spectrum.full))[::-1]
    t_val = value_tol(phi, tol)
    trace = float(phi.sum())
    if abs(trace) > 1e-6 * max(1.0, float(np.abs(phi).max())) * spectrum.n:
        return not_applicable("haemers", "chi", k, "requires tr p(A) = 0", trace=trace)
    n = spectrum.n
    if n < 2 or phi[1] <= t_val:
        return not_applicable("haemers", "chi", k, "requires Phi_2 > 0",
                              phi2=float(phi[1]) if n > 1 else None)
    for t in range(1, n + 1):
        if t >= 1.0 - phi[n - t] / phi[1] - 1e-9:
            return BoundReport("haemers", "chi", k, float(t), make_certificate(p, spectrum), True,
                               params={"phi2": float(phi[1]), "reading": "least fixpoint"})
    return BoundReport("haemers", "chi", k, float(n), params={"phi2": float(phi[1])})


# --------------------------------------------------------------------------
# second inertial bound: evaluation, repair, greedy quadratic
# --------------------------------------------------------------------------

def second_inertial_value(neg: int, pos: int) -> float:
    """``1 + max(neg/pos, pos/neg)``; 1 when either side is empty."""
    if neg == 0 or pos == 0:
        return 1.0
    return 1.0 + max(neg / pos, pos / neg)


def repair_tolerance(p: Polynomial, lam: float, k: int) -> float:
    return 1e-6 * p.norm() * max(1.0, abs(lam) ** k)


def repair_second_inertial(p: Polynomial, spectrum: Spectrum, k: int) -> tuple[float, tuple[int, int, int], tuple]:
    """Reclassify near-zero values of ``p`` as roots, then recount.

    Returns ``(bound, (neg, zero, pos), pattern)`` where the pattern lists the
    sign at each distinct eigenvalue.
    """
    pattern = []
    neg = zero = pos = 0
    pf = p.as_float()
    for lam, m in zip(spectrum.distinct, spectrum.mult):
        v = float(poly_eval(pf, float(lam)))
        if abs(v) <= repair_tolerance(p, float(lam), k):
            pattern.append("0")
            zero += int(m)
        elif v < 0:
            pattern.append("-")
            neg += int(m)
        else:
            pattern.append("+")
            pos += int(m)
    return second_inertial_value(neg, pos), (neg, zero, pos), tuple(pattern)


def _classify_quadratic(p: Polynomial, spectrum: Spectrum, tol: float) -> tuple[int, int, int]:
    vals, mult = _full_values(p, spectrum)
    t = 0 if spectrum.exact is not None else tol
    neg = _count(vals, mult, lambda v: v < -t)
    pos = _count(vals, mult, lambda v: v > t)
    return neg, spectrum.n - neg - pos, pos


@_timed
def greedy_quadratic_second_inertial(spectrum: Spectrum, degree: float | None = None,
                                     G: Graph | None = None, tol: float = 1e-8) -> BoundReport:
    """Best ``p_2 = x^2 + b x - d`` for the second inertial chi_2 bound.

    Candidates, in evaluation order: every eigenvalue as an exact root (its
    partner root fixed by ``x_1 x_2 = -d``); roots just outside/inside each
    eigenvalue; one root next to zero.  A later candidate replaces the
    current best only on strict improvement.
    """
    if G is not None and not G.is_regular():
        raise BoundError("greedy-quadratic: graph is not regular")
    if G is None and not spectrum.is_regular():
        raise BoundError("greedy-quadratic: spectrum is not that of a regular graph")
    exact = spectrum.exact is not None
    d = spectrum.exact[0] if exact else float(spectrum.distinct[0]) if degree is None else degree
    if degree is not None and exact:
        d = Fraction(degree)
    if d <= 0:
        return not_applicable("greedy-quadratic", "chi", 2, "edgeless graph")
    thetas = list(spectrum.exact) if exact else [float(t) for t in spectrum.distinct]
    gaps = [abs(a - b) for a, b in zip(thetas[:-1], thetas[1:])]
    eps = min(gaps + [1]) / 8 if gaps else Fraction(1, 8)
    eps = Fraction(eps).limit_denominator(10 ** 6) / 1000 if exact else float(eps) / 1000.0

    candidates: list[tuple[str, object]] = []
    for lam in thetas:  # descending
        if lam < 0:
            candidates.append(("root", lam))
        elif lam > 0:
            candidates.append(("root", -d / lam))
    for lam in thetas:
        if lam < 0:
            candidates += [("near", lam - eps), ("near", lam + eps)]
        elif lam > 0:
            candidates += [("near", -d / (lam + eps)), ("near", -d / (lam - eps))]
    candidates += [("zero", -eps), ("zero", -d / eps)]

    best = None
    for tag, x1 in candidates:
        if not x1 < 0:
            continue
        x2 = -d / x1
        p = Polynomial((-d, -(x1 + x2), 1))
        neg, zero, pos = _classify_quadratic(p, spectrum, tol * max(1.0, float(d)))
        for sign, q, (a, b) in ((1, p, (neg, pos)), (-1, -p, (pos, neg))):
            # a = #negative values of q, b = #positive values of q
            value = 1.0 + a / b if b > 0 else 1.0
            if best is None or value > best[0] + 1e-12:
                best = (value, q, (x1, x2), tag, sign, (neg, zero, pos))
    value, q, roots, tag, sign, counts = best
    cert = make_certificate(q, spectrum)
    r_lo, r_hi = sorted(float(r) for r in roots)
    n = spectrum.n
    return BoundReport("greedy-quadratic", "chi", 2, value, cert, True, params={
        "roots": [r_lo, r_hi], "candidate": tag, "sign": sign,
        "neg": counts[0], "zero": counts[1], "pos": counts[2],
        "alpha_companion": math.floor(n / value + 1e-9), "epsilon": float(eps)})
