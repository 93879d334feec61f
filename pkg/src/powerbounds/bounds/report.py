"""Bound reports, certificates and the rounding/counting conventions they share."""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..spectral import Polynomial, Spectrum, poly_eval

COUNT_TOL = 1e-9
ROUND_TOL = 1e-9

OK = "ok"
NOT_APPLICABLE = "not-applicable"
FAILED = "failed"


class BoundError(ValueError):
    """A bound's precondition does not hold for the given input."""


def round_alpha(x: float) -> int:
    return int(math.floor(x + ROUND_TOL * max(1.0, abs(x))))


def round_chi(x: float) -> int:
    return int(math.ceil(x - ROUND_TOL * max(1.0, abs(x))))


@dataclass(frozen=True)
class Certificate:
    """Polynomial behind a bound plus its sign on each distinct eigenvalue."""

    polynomial: Polynomial
    sign_pattern: tuple[str, ...]
    tolerance: float
    eigenvalues: tuple[float, ...] = ()
    multiplicities: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "coeffs": self.polynomial.to_list(),
            "sign_pattern": "".join(self.sign_pattern),
            "tolerance": self.tolerance,
            "eigenvalues": list(self.eigenvalues),
            "multiplicities": list(self.multiplicities),
        }


@dataclass
class BoundReport:
    method: str
    kind: str  # "alpha" (upper bound on alpha_k) or "chi" (lower bound on chi_k)
    k: int
    raw_value: float = math.nan
    certificate: Certificate | None = None
    verified: bool = False
    status: str = OK
    params: dict = field(default_factory=dict)
    millis: float = 0.0
    message: str = ""

    @property
    def int_value(self) -> int | None:
        if self.status != OK or not math.isfinite(self.raw_value):
            return None
        return round_alpha(self.raw_value) if self.kind == "alpha" else round_chi(self.raw_value)

    @property
    def usable(self) -> bool:
        """Eligible for comparisons: computed, applicable and (if certified) verified."""
        return self.status == OK and (self.certificate is None or self.verified)

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "kind": self.kind,
            "k": self.k,
            "raw_value": _json_num(self.raw_value),
            "int_value": self.int_value,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "verified": self.verified,
            "status": self.status,
            "params": {key: _json_safe(v) for key, v in self.params.items()},
            "millis": round(self.millis, 3),
            "message": self.message,
        }


def _json_num(x):
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, (float, np.floating)):
        return None if not math.isfinite(x) else float(x)
    return x


def _json_safe(v):
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _json_safe(x) for k, x in v.items()}
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, Polynomial):
        return v.to_list()
    return _json_num(v)


def not_applicable(method: str, kind: str, k: int, reason: str, **params) -> BoundReport:
    return BoundReport(method, kind, k, status=NOT_APPLICABLE, message=reason, params=params)


@contextmanager
def timed(report_holder: list):
    """Fill ``millis`` of the report appended to ``report_holder`` inside the block."""
    t0 = time.perf_counter()
    yield
    dt = (time.perf_counter() - t0) * 1000.0
    for rep in report_holder:
        rep.millis = dt


# --------------------------------------------------------------------------
# counting helpers
# --------------------------------------------------------------------------

def value_tol(values: Sequence[float], tol: float = COUNT_TOL) -> float:
    scale = max((abs(float(v)) for v in values), default=1.0)
    return tol * max(1.0, scale)


def values_on_spectrum(p: Polynomial, spectrum: Spectrum, exact: bool = True) -> list:
    """``p`` at each distinct eigenvalue; exact fractions for closed-form spectra."""
    if exact and spectrum.exact is not None:
        return [poly_eval(p, t) for t in spectrum.exact]
    return [float(v) for v in poly_eval(p.as_float(), spectrum.distinct)]


def signs(values: Sequence, tol: float) -> tuple[str, ...]:
    out = []
    for v in values:
        if v > tol:
            out.append("+")
        elif v < -tol:
            out.append("-")
        else:
            out.append("0")
    return tuple(out)


def make_certificate(p: Polynomial, spectrum: Spectrum, tol: float | None = None, values=None) -> Certificate:
    if values is None:
        values = values_on_spectrum(p, spectrum)
    exact = spectrum.exact is not None and all(isinstance(v, Fraction) for v in values)
    if tol is None:
        tol = 0.0 if exact else value_tol(values)
    return Certificate(p, signs(values, tol), tol, tuple(float(t) for t in spectrum.distinct),
                       tuple(int(m) for m in spectrum.mult))
