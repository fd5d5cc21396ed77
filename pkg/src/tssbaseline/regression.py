"""Polynomial least squares against time with R^2, F-statistic and p-value.

The F distribution is evaluated through a continued-fraction regularized
incomplete beta function, so no special-function library is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .series import InputError, Series

MAX_DEGREE = 12
DEFAULT_DEGREE = 9

_BETACF_TOL = 1e-12
_BETACF_MAX_ITER = 500
_TINY = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for I_x(a, b), modified Lentz evaluation."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_TOL:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _check_dof(d1, d2):
    if int(d1) != d1 or int(d2) != d2 or d1 < 1 or d2 < 1:
        raise ValueError(f"degrees of freedom must be positive integers, got {d1}, {d2}")


def f_cdf(f: float, d1: int, d2: int) -> float:
    """P(F <= f) for F ~ F(d1, d2)."""
    _check_dof(d1, d2)
    if math.isnan(f) or f < 0:
        raise ValueError("f must be nonnegative")
    if f == 0:
        return 0.0
    if math.isinf(f):
        return 1.0
    x = d1 * f / (d1 * f + d2)
    return betainc(d1 / 2.0, d2 / 2.0, x)


def f_sf(f: float, d1: int, d2: int) -> float:
    """P(F > f), computed without cancellation for large ``f``."""
    _check_dof(d1, d2)
    if math.isnan(f) or f < 0:
        raise ValueError("f must be nonnegative")
    if f == 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    return betainc(d2 / 2.0, d1 / 2.0, d2 / (d1 * f + d2))


@dataclass(frozen=True)
class FitReport:
    degree: int
    coefficients: Tuple[float, ...]  # ascending powers of the normalized abscissa
    center: float
    half_width: float
    r_squared: float
    f_statistic: float  # math.inf for a perfect fit
    p_value: float
    n: int

    def normalize(self, x):
        return (np.asarray(x, dtype=float) - self.center) / self.half_width

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": list(self.coefficients),
            "center": self.center,
            "half_width": self.half_width,
            "r_squared": self.r_squared,
            "f_statistic": "inf" if math.isinf(self.f_statistic) else self.f_statistic,
            "p_value": self.p_value,
            "n": self.n,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FitReport":
        f = d["f_statistic"]
        return cls(
            degree=int(d["degree"]), coefficients=tuple(float(c) for c in d["coefficients"]),
            center=float(d["center"]), half_width=float(d["half_width"]),
            r_squared=float(d["r_squared"]), f_statistic=math.inf if f == "inf" else float(f),
            p_value=float(d["p_value"]), n=int(d["n"]),
        )


def polyfit(x: Sequence[float], y: Sequence[float], degree: int = DEFAULT_DEGREE) -> FitReport:
    """Least-squares polynomial of ``degree`` in x rescaled to [-1, 1].

    Solved by QR factorization of the Vandermonde matrix in the rescaled
    abscissa; normal equations are hopeless at degree 9.
    """
    if not 1 <= degree <= MAX_DEGREE:
        raise InputError(f"degree must be in 1..{MAX_DEGREE}, got {degree}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InputError("x and y must be equal-length 1-D sequences")
    n = x.size
    if n < degree + 2:
        raise InputError(f"need at least {degree + 2} points for degree {degree}, got {n}")
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        raise InputError("x values are all identical")
    center = (lo + hi) / 2
    half_width = (hi - lo) / 2
    u = (x - center) / half_width
    design = np.vander(u, degree + 1, increasing=True)
    q, r = np.linalg.qr(design)
    coef = np.linalg.solve(r, q.T @ y)

    fitted = design @ coef
    sst = float(np.sum((y - y.mean()) ** 2))
    if sst == 0:
        raise InputError("y is constant; R^2 is undefined")
    sse = float(np.sum((y - fitted) ** 2))
    ssr = max(sst - sse, 0.0)
    dof = n - degree - 1
    r2 = 1.0 - sse / sst
    if sse == 0:
        f_stat, p = math.inf, 0.0
    else:
        f_stat = (ssr / degree) / (sse / dof)
        p = f_sf(f_stat, degree, dof)
    return FitReport(degree, tuple(float(c) for c in coef), center, half_width,
                     r2, f_stat, p, n)


def evaluate(fit: FitReport, x):
    """Fitted polynomial at ``x`` (scalar or array) via Horner's scheme."""
    u = fit.normalize(x)
    acc = np.zeros_like(u)
    for c in reversed(fit.coefficients):
        acc = acc * u + c
    return float(acc) if acc.ndim == 0 else acc


def fit_series(series: Series, degree: int = DEFAULT_DEGREE) -> FitReport:
    """Fit a series against its own sample indices; gaps keep their true spacing."""
    return polyfit(series.index, series.values, degree)
