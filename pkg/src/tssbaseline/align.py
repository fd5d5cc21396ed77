"""Lag shifting, pairing and lag scanning between an indicator and a price series.

A lag ``k`` pairs the indicator at ``t`` with the price at ``t + k``; a positive
best lag means the indicator leads the market.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

from .baseline import evaluate_baseline, select_baseline
from .series import Direction, InputError, Series, direction_of, directions

__all__ = [
    "Direction", "LagPairing", "LagResult", "LagScanReport", "direction_of",
    "directions", "lag_shift", "pair_at_lag", "pearson_r", "scan_lags",
]

MIN_PAIRS = 3


@dataclass(frozen=True)
class LagPairing:
    lag: int
    pairs: Tuple[Tuple[float, float], ...]

    def __len__(self):
        return len(self.pairs)


class LagResult(NamedTuple):
    lag: int
    pearson_r: Optional[float]
    baseline_accuracy: Optional[float]
    n_pairs: int
    tss_b: Optional[float]


@dataclass(frozen=True)
class LagScanReport:
    per_lag: Tuple[LagResult, ...]
    best_lag: int

    def result(self, lag: int) -> LagResult:
        for r in self.per_lag:
            if r.lag == lag:
                return r
        raise KeyError(lag)

    def to_csv(self) -> str:
        def fmt(v):
            return "" if v is None else repr(v)
        lines = ["lag,pearson_r,baseline_accuracy,n_pairs"]
        lines += [f"{r.lag},{fmt(r.pearson_r)},{fmt(r.baseline_accuracy)},{r.n_pairs}" for r in self.per_lag]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "best_lag": self.best_lag,
            "per_lag": [r._asdict() for r in self.per_lag],
        }


def lag_shift(series: Series, k: int) -> Series:
    """Move the value at ``t`` to ``t - k``, dropping anything that leaves the original index range."""
    if not len(series):
        return series
    lo, hi = series.index[0], series.index[-1]
    return Series.from_pairs((t - k, v) for t, v in series if lo <= t - k <= hi)


def pair_at_lag(indicator: Series, price: Series, k: int) -> LagPairing:
    lookup = price.to_dict()
    pairs = tuple((v, lookup[t + k]) for t, v in indicator if t + k in lookup)
    return LagPairing(k, pairs)


def pearson_r(pairs) -> float:
    if isinstance(pairs, LagPairing):
        pairs = pairs.pairs
    n = len(pairs)
    if n < 2:
        raise InputError("correlation needs at least two pairs")
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    dx = [x - mx for x in xs]
    dy = [y - my for y in ys]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise InputError("correlation undefined for a constant series")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def scan_lags(indicator: Series, price: Series, k_min: int, k_max: int,
              tss_b: Optional[float] = None) -> LagScanReport:
    """Correlation and baseline accuracy at every lag in ``[k_min, k_max]``.

    With ``tss_b=None`` the baseline threshold is re-selected at each lag;
    otherwise the given threshold is used throughout. Lags with fewer than three
    pairs get ``None`` metrics. The best lag maximizes baseline accuracy, ties
    going to the smaller ``|k|`` and then the smaller ``k``.
    """
    if k_min > k_max:
        raise InputError(f"empty lag range {k_min}..{k_max}")
    results: List[LagResult] = []
    for k in range(k_min, k_max + 1):
        pairing = pair_at_lag(indicator, price, k)
        r = acc = b = None
        if len(pairing) >= MIN_PAIRS:
            try:
                r = pearson_r(pairing)
            except InputError:
                pass
            try:
                if tss_b is None:
                    b, report = select_baseline(indicator, price, k)
                else:
                    b, report = tss_b, evaluate_baseline(indicator, price, k, tss_b)
                acc = report.accuracy
            except InputError:
                b = None
        results.append(LagResult(k, r, acc, len(pairing), b))
    scored = [r for r in results if r.baseline_accuracy is not None]
    if not scored:
        raise InputError("no lag in range has an evaluable overlap")
    best = min(scored, key=lambda r: (-r.baseline_accuracy, abs(r.lag), r.lag))
    return LagScanReport(tuple(results), best.lag)
