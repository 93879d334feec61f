"""Adjacency spectra, polynomials in the adjacency matrix, and the
orthogonal-polynomial machinery the bounds are built from.

Polynomials are stored in the monomial basis with ascending coefficients.
Whenever coefficients and evaluation points are ``int``/``Fraction`` the
arithmetic stays exact; floats go through the same code paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .graph import Graph, closed_walk_counts

MAX_POLY_DEGREE = 32


class EigenvalueError(RuntimeError):
    """The symmetric eigensolver failed to converge."""


class SpectrumError(ValueError):
    """A spectral construction is undefined for the given input."""


# --------------------------------------------------------------------------
# Spectrum
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    """Distinct eigenvalues ``theta_0 > ... > theta_d`` with multiplicities.

    ``exact`` holds exact (integer or rational) eigenvalues for closed-form
    spectra.  ``walk_regular`` records a known order of partial
    walk-regularity (``math.inf`` for walk-regular families) when the
    spectrum was built without a graph.
    """

    distinct: np.ndarray
    mult: np.ndarray
    grouping_tol: float = 0.0
    exact: tuple | None = None
    walk_regular: float | None = None
    cluster_gap: float = math.inf
    cluster_spread: float = 0.0
    source: str = ""

    @property
    def n(self) -> int:
        return int(self.mult.sum())

    @property
    def d(self) -> int:
        return len(self.distinct) - 1

    @property
    def full(self) -> np.ndarray:
        """All eigenvalues with repetition, descending."""
        return np.repeat(self.distinct, self.mult)

    @property
    def full_exact(self) -> list | None:
        if self.exact is None:
            return None
        return [t for t, m in zip(self.exact, self.mult) for _ in range(int(m))]

    @property
    def largest(self) -> float:
        return float(self.distinct[0])

    def is_regular(self, tol: float = 1e-8) -> bool:
        """A graph is regular iff its largest eigenvalue equals its mean degree."""
        mean_degree = float(np.dot(self.mult, self.distinct ** 2)) / self.n
        return abs(self.largest - mean_degree) <= tol * max(1.0, self.largest)

    def to_json(self, include_full: bool = True) -> dict:
        out = {
            "distinct": [float(t) for t in self.distinct],
            "multiplicities": [int(m) for m in self.mult],
            "grouping_tol": self.grouping_tol,
            "min_cluster_gap": None if math.isinf(self.cluster_gap) else self.cluster_gap,
            "max_cluster_spread": self.cluster_spread,
        }
        if self.exact is not None:
            out["exact"] = [str(t) for t in self.exact]
        if include_full and self.n <= 5000:
            out["full"] = [float(x) for x in self.full]
        return out


def default_grouping_tol(largest: float) -> float:
    return 1e-7 * max(1.0, abs(largest))


def group_eigenvalues(values: Sequence[float], tol: float | None = None, **extra) -> Spectrum:
    """Single-linkage grouping of a real eigenvalue list into a :class:`Spectrum`."""
    vals = np.sort(np.asarray(values, dtype=float))[::-1]
    if vals.size == 0:
        raise SpectrumError("empty eigenvalue list")
    if tol is None:
        tol = default_grouping_tol(vals[0])
    clusters: list[list[float]] = [[vals[0]]]
    gaps = []
    for a, b in zip(vals[:-1], vals[1:]):
        if a - b > tol:
            gaps.append(a - b)
            clusters.append([b])
        else:
            clusters[-1].append(b)
    distinct = np.array([np.mean(c) for c in clusters])
    mult = np.array([len(c) for c in clusters], dtype=np.int64)
    spread = max(max(c) - min(c) for c in clusters)
    return Spectrum(distinct, mult, tol, cluster_gap=min(gaps, default=math.inf),
                    cluster_spread=float(spread), **extra)


def eigenvalues_symmetric(G: Graph, grouping_tol: float | None = None) -> Spectrum:
    """Adjacency spectrum of ``G`` (LAPACK ``syevd`` via numpy)."""
    A = G.adjacency_matrix(dtype=float)
    try:
        vals = np.linalg.eigvalsh(A)
    except np.linalg.LinAlgError as exc:
        raise EigenvalueError(f"eigensolver did not converge on {G.name or 'graph'}: {exc}") from exc
    return group_eigenvalues(vals, grouping_tol, source=G.name)


def spectrum_from_distinct(theta: Sequence, mult: Sequence[int], *, walk_regular=None,
                           source: str = "") -> Spectrum:
    """Build a spectrum from distinct values; exact inputs are kept exactly."""
    pairs = sorted(zip(theta, mult), key=lambda tm: tm[0], reverse=True)
    exact = None
    if all(isinstance(t, Rational) for t, _ in pairs):
        exact = tuple(Fraction(t) for t, _ in pairs)
    distinct = np.array([float(t) for t, _ in pairs])
    mult_arr = np.array([int(m) for _, m in pairs], dtype=np.int64)
    if (mult_arr <= 0).any():
        raise SpectrumError("multiplicities must be positive")
    if len(set(distinct.tolist())) != len(distinct):
        raise SpectrumError("distinct eigenvalues repeat")
    gap = float(np.min(-np.diff(distinct))) if len(distinct) > 1 else math.inf
    return Spectrum(distinct, mult_arr, 0.0, exact, walk_regular, gap, 0.0, source)


def closed_form_spectrum_odd_graph(ell: int) -> Spectrum:
    """Exact spectrum of the odd graph O_ell: eigenvalue ``(-1)^i (ell - i)`` with
    multiplicity ``C(2ell-1, i) - C(2ell-1, i-1)``, ``i = 0 .. ell-1``."""
    if ell < 2:
        raise SpectrumError("odd graphs need ell >= 2")
    theta = [(-1) ** i * (ell - i) for i in range(ell)]
    mult = [math.comb(2 * ell - 1, i) - (math.comb(2 * ell - 1, i - 1) if i else 0) for i in range(ell)]
    return spectrum_from_distinct(theta, mult, walk_regular=math.inf, source=f"O{ell}")


def odd_graph_alternating_order(ell: int) -> tuple[list[int], list[int]]:
    """``(theta_i, m_i)`` in the alternating order ``i = 0 .. ell-1`` (not sorted)."""
    theta = [(-1) ** i * (ell - i) for i in range(ell)]
    mult = [math.comb(2 * ell - 1, i) - (math.comb(2 * ell - 1, i - 1) if i else 0) for i in range(ell)]
    return theta, mult


# --------------------------------------------------------------------------
# Polynomials
# --------------------------------------------------------------------------

def _is_exact(x) -> bool:
    return isinstance(x, Rational)


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with ascending coefficients ``a_0 .. a_k``."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c if c else (0,))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots, lead=1) -> "Polynomial":
        p = cls((lead,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if any(c != 0 for c in self.coeffs) else -1

    def __call__(self, x):
        return poly_eval(self, x)

    def exact(self) -> "Polynomial":
        """Same polynomial with every coefficient converted exactly to ``Fraction``."""
        return Polynomial(tuple(Fraction(c) if not isinstance(c, Fraction) else c for c in self.coeffs))

    def as_float(self) -> "Polynomial":
        return Polynomial(tuple(float(c) for c in self.coeffs))

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(tuple(c * other for c in self.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Polynomial(tuple(a / c for a in self.coeffs))

    def norm(self) -> float:
        return math.sqrt(sum(float(c) ** 2 for c in self.coeffs))

    def to_list(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(f"{c}{'*' if mono else ''}{mono}")
        return "Polynomial(" + (" + ".join(terms) or "0") + ")"


def _as_poly(p) -> Polynomial:
    return p if isinstance(p, Polynomial) else Polynomial((p,))


def poly_eval(p: Polynomial, x):
    """Horner evaluation; exact when ``x`` is rational and ``p`` has rational coefficients.

    A rational ``x`` with float coefficients evaluates exactly after converting
    each float coefficient to its exact binary value.
    """
    coeffs = p.coeffs
    if _is_exact(x) and not all(_is_exact(c) for c in coeffs):
        coeffs = [Fraction(c) for c in coeffs]
    acc = coeffs[-1] * (x ** 0 if not _is_exact(x) else 1)
    if isinstance(x, np.ndarray):
        acc = np.full_like(x, coeffs[-1], dtype=float)
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def poly_matrix_diagonal(G: Graph, p: Polynomial, max_degree: int = MAX_POLY_DEGREE) -> np.ndarray:
    """Diagonal of ``p(A)``: ``sum_i a_i (A^i)_{uu}``.

    Walk counts are exact integers; with integer or rational coefficients the
    result is exact (object array), otherwise float.
    """
    if p.degree > max_degree:
        raise SpectrumError(f"polynomial degree {p.degree} exceeds cap {max_degree}")
    k = max(p.degree, 0)
    walks = closed_walk_counts(G, k)
    if all(_is_exact(c) for c in p.coeffs):
        out = [sum(c * walks[i][u] for i, c in enumerate(p.coeffs)) for u in range(G.n)]
        return np.array(out, dtype=object)
    W = np.array(walks[: len(p.coeffs)], dtype=float)
    return np.asarray(p.coeffs, dtype=float) @ W


@dataclass(frozen=True)
class SpectralFunctionals:
    """Max/min diagonal of ``p(A)`` and max/min of ``p`` over ``lambda_2 .. lambda_n``."""

    W: float
    w: float
    Lam: float
    lam: float


def functionals(G: Graph | None, p: Polynomial, spectrum: Spectrum,
                diagonal: Sequence | None = None) -> SpectralFunctionals:
    """``W(p), w(p), Lambda(p), lambda(p)`` for ``p`` on ``G``.

    Without ``G`` the spectrum must be known partially walk-regular of order
    at least ``deg p``, in which case the diagonal is ``tr p(A) / n``.
    """
    if spectrum.n < 2:
        raise SpectrumError("functionals need at least two eigenvalues")
    if diagonal is None:
        if G is not None:
            diagonal = poly_matrix_diagonal(G, p)
        else:
            if spectrum.walk_regular is None or spectrum.walk_regular < max(p.degree, 0):
                raise SpectrumError("diagonal of p(A) unknown without a graph or walk-regularity")
            diagonal = [trace_over_n(p, spectrum)]
    diag = [float(x) for x in diagonal]
    vals = poly_eval(p.as_float(), spectrum.full[1:])
    return SpectralFunctionals(max(diag), min(diag), float(np.max(vals)), float(np.min(vals)))


def trace_over_n(p: Polynomial, spectrum: Spectrum):
    """``(1/n) sum_i p(lambda_i)``, exact when the spectrum is exact."""
    if spectrum.exact is not None:
        total = sum(int(m) * poly_eval(p, t) for t, m in zip(spectrum.exact, spectrum.mult))
        return Fraction(total) / spectrum.n
    return float(np.dot(spectrum.mult, poly_eval(p.as_float(), spectrum.distinct))) / spectrum.n


# --------------------------------------------------------------------------
# Orthogonal polynomials on the spectrum
# --------------------------------------------------------------------------

def _stieltjes(points: np.ndarray, weights: np.ndarray, k: int):
    """Monic orthogonal polynomials for the discrete measure ``sum w_i delta(t_i)``.

    Returns values ``V[r, i] = pi_r(t_i)``, coefficient rows ``C[r]`` and
    squared norms.  Stops early when the measure has fewer than ``k+1`` points.
    """
    m = len(points)
    k = min(k, m - 1)
    V = np.zeros((k + 1, m))
    C = np.zeros((k + 1, k + 1))
    norms = np.zeros(k + 1)
    V[0] = 1.0
    C[0, 0] = 1.0
    norms[0] = weights.sum()
    for r in range(k):
        a = float(np.dot(weights, points * V[r] ** 2)) / norms[r]
        V[r + 1] = (points - a) * V[r]
        C[r + 1, 1:] = C[r, :-1]
        C[r + 1] -= a * C[r]
        if r > 0:
            b = norms[r] / norms[r - 1]
            V[r + 1] -= b * V[r - 1]
            C[r + 1] -= b * C[r - 1]
        norms[r + 1] = float(np.dot(weights, V[r + 1] ** 2))
        if norms[r + 1] <= 1e-300:
            raise SpectrumError("orthogonalization degenerated (measure exhausted)")
    return V, C, norms


def predistance_polynomials(spectrum: Spectrum) -> list[Polynomial]:
    """``p_0 .. p_d`` orthogonal for ``<f,g> = (1/n) sum m_i f(theta_i) g(theta_i)``,
    ``deg p_i = i``, normalized by ``||p_i||^2 = p_i(theta_0)``."""
    d = spectrum.d
    if d < 1:
        raise SpectrumError("predistance polynomials need at least two distinct eigenvalues")
    theta = spectrum.distinct
    w = spectrum.mult / spectrum.n
    V, C, norms = _stieltjes(theta, w, d)
    out = []
    for r in range(d + 1):
        at0 = V[r, 0]
        if abs(at0) <= 1e-12 * max(1.0, np.abs(V[r]).max()):
            raise SpectrumError(f"predistance polynomial p_{r} cannot be normalized (vanishes at theta_0)")
        c = at0 / norms[r]
        out.append(Polynomial(tuple(C[r, : r + 1] * c)))
    return out


def predistance_values(spectrum: Spectrum) -> np.ndarray:
    """``P[r, i] = p_r(theta_i)`` computed by the recurrence (no monomial round trip)."""
    theta = spectrum.distinct
    V, _, norms = _stieltjes(theta, spectrum.mult / spectrum.n, spectrum.d)
    return V * (V[:, :1] / norms[:, None])


def orthonormal_basis(theta: Sequence[float], k: int, weights: Sequence[float] | None = None):
    """Well-conditioned basis of polynomials of degree <= ``k`` on the points ``theta``.

    Returns ``(Q, C)`` with ``Q[j, r] = P_r(theta_j)`` orthonormal under
    ``weights`` (uniform by default) and ``C[r, i]`` the coefficient of
    ``x^i`` in ``P_r``.  Points are rescaled to ``[-1, 1]`` before the
    three-term recurrence, which keeps ``Q`` well conditioned for high ``k``.
    """
    t = np.asarray(theta, dtype=float)
    w = np.ones_like(t) if weights is None else np.asarray(weights, dtype=float)
    w = w / w.sum()
    s = max(1.0, float(np.abs(t).max()))
    V, Cs, norms = _stieltjes(t / s, w, k)
    scale = 1.0 / np.sqrt(norms)
    Q = (V * scale[:, None]).T
    powers = s ** -np.arange(Cs.shape[1], dtype=float)
    C = Cs * scale[:, None] * powers[None, :]
    return Q, C


def qk_from_girth(delta: int, g: float, k: int | None = None) -> list[Polynomial]:
    """Sum polynomials ``q_0 .. q_k`` of a ``delta``-regular graph of girth ``g``:
    ``q_0 = 1``, ``q_1 = 1 + x``, ``q_{i+1} = x q_i - (delta - 1) q_{i-1}``."""
    kmax = (g - 1) // 2 if not math.isinf(g) else None
    if k is None:
        if kmax is None:
            raise SpectrumError("k must be given for acyclic graphs")
        k = int(kmax)
    elif kmax is not None and k > kmax:
        raise SpectrumError(f"k={k} exceeds floor((g-1)/2)={int(kmax)}")
    qs = [Polynomial((1,)), Polynomial((1, 1))]
    x = Polynomial.x()
    while len(qs) <= k:
        qs.append(x * qs[-1] - (delta - 1) * qs[-2])
    return qs[: k + 1]


# --------------------------------------------------------------------------
# Divided differences and interpolation
# --------------------------------------------------------------------------

def divided_difference_form(theta: Sequence, m: int) -> list:
    """Coefficients ``c`` with ``sum_i c_i x_i = f[theta_0, ..., theta_m]`` for ``x_i = f(theta_i)``.

    ``c_j = 1 / prod_{i <= m, i != j} (theta_j - theta_i)`` for ``j <= m``, zero
    beyond.  Exact for rational ``theta``.
    """
    d = len(theta) - 1
    if not 1 <= m <= d:
        raise SpectrumError(f"divided difference order {m} outside 1..{d}")
    exact = all(_is_exact(t) for t in theta)
    th = [Fraction(t) for t in theta] if exact else [float(t) for t in theta]
    out = []
    for j in range(d + 1):
        if j > m:
            out.append(Fraction(0) if exact else 0.0)
            continue
        prod = Fraction(1) if exact else 1.0
        for i in range(m + 1):
            if i != j:
                diff = th[j] - th[i]
                if diff == 0:
                    raise SpectrumError("divided differences need distinct points")
                prod *= diff
        out.append(1 / prod)
    return out


def newton_coefficients(theta: Sequence, values: Sequence) -> list:
    """Top row of the divided-difference table: ``f[theta_0..theta_m]`` for every m."""
    table = list(values)
    out = [table[0]]
    n = len(theta)
    for level in range(1, n):
        table = [(table[i + 1] - table[i]) / (theta[i + level] - theta[i]) for i in range(n - level)]
        out.append(table[0])
    return out


def values_to_polynomial(theta: Sequence, values: Sequence, k: int, tol: float = 1e-8) -> Polynomial:
    """Degree-<=``k`` polynomial through ``(theta_i, values_i)``.

    Newton interpolation truncated at degree ``k``; raises when the truncated
    polynomial misses any prescribed value by more than ``tol`` relative to
    the largest value.
    """
    exact = all(_is_exact(t) for t in theta) and all(_is_exact(v) for v in values)
    th = [Fraction(t) for t in theta] if exact else [float(t) for t in theta]
    vals = [Fraction(v) for v in values] if exact else [float(v) for v in values]
    k = min(k, len(th) - 1)
    dd = newton_coefficients(th, vals)[: k + 1]
    p = Polynomial((dd[k],))
    for m in range(k - 1, -1, -1):
        p = p * Polynomial((-th[m], 1)) + dd[m]
    scale = max(1.0, max(abs(float(v)) for v in vals))
    err = max(abs(float(poly_eval(p, t) - v)) for t, v in zip(th, vals))
    if err > tol * scale:
        raise SpectrumError(f"values are not those of a degree-{k} polynomial (residual {err:.3g})")
    return p
