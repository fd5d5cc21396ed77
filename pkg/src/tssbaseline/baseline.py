"""Constant-threshold direction predictor and its accuracy accounting.

The rule needs only the current sentiment value: above the threshold predicts
a rising market, anything else a falling one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import List, NamedTuple, Optional, Tuple

from .series import Direction, InputError, Series, direction_of, directions


class SampleOutcome(NamedTuple):
    t: int
    tss: float
    predicted: Direction
    actual: Direction
    correct: Optional[bool]  # None when the realized step is Flat


class Region(NamedTuple):
    start_t: int
    end_t: int
    capable: bool


@dataclass(frozen=True)
class RegionSegmentation:
    regions: Tuple[Region, ...]

    def to_csv(self) -> str:
        lines = ["start_t,end_t,capable"]
        lines += [f"{r.start_t},{r.end_t},{str(r.capable).lower()}" for r in self.regions]
        return "\n".join(lines) + "\n"


def _ratio(num: int, den: int) -> Optional[float]:
    return num / den if den else None


@dataclass(frozen=True)
class BaselineReport:
    tss_b: float
    lag: int
    per_sample: Tuple[SampleOutcome, ...]
    n_up: int
    n_down: int
    n_correct_up: int
    n_correct_down: int

    @property
    def n_evaluated(self) -> int:
        return self.n_up + self.n_down

    @property
    def n_correct(self) -> int:
        return self.n_correct_up + self.n_correct_down

    @property
    def accuracy(self) -> float:
        return self.n_correct / self.n_evaluated

    @property
    def error_rate(self) -> float:
        return 1.0 - self.accuracy

    @property
    def up_accuracy(self) -> Optional[float]:
        return _ratio(self.n_correct_up, self.n_up)

    @property
    def down_accuracy(self) -> Optional[float]:
        return _ratio(self.n_correct_down, self.n_down)

    def evaluated(self) -> List[SampleOutcome]:
        return [s for s in self.per_sample if s.correct is not None]

    def to_dict(self) -> dict:
        return {
            "tss_b": self.tss_b,
            "lag": self.lag,
            "accuracy": self.accuracy,
            "error_rate": self.error_rate,
            "up_accuracy": self.up_accuracy,
            "down_accuracy": self.down_accuracy,
            "n_evaluated": self.n_evaluated,
            "n_up": self.n_up,
            "n_down": self.n_down,
            "n_correct": self.n_correct,
        }

    def to_csv(self) -> str:
        lines = ["t,tss,predicted,actual,correct"]
        for s in self.per_sample:
            correct = "" if s.correct is None else str(s.correct).lower()
            lines.append(f"{s.t},{s.tss!r},{s.predicted},{s.actual},{correct}")
        return "\n".join(lines) + "\n"


def predict_direction(tss: float, tss_b: float) -> Direction:
    """Up iff ``tss > tss_b``; equality counts as Down."""
    return Direction.UP if tss > tss_b else Direction.DOWN


def _evaluable(tss: Series, price: Series, lag: int):
    """``(t, tss, actual_step)`` for samples whose lagged price step exists."""
    steps = directions(price).to_dict()
    return [(t, v, steps[t + lag]) for t, v in tss if t + lag in steps]


def evaluate_baseline(tss: Series, price: Series, lag: int, tss_b: float) -> BaselineReport:
    """Score the threshold rule against the price step ending at ``t + lag``.

    Flat steps are listed with ``correct=None`` and left out of every rate.
    """
    outcomes = []
    counts = {Direction.UP: [0, 0], Direction.DOWN: [0, 0]}
    for t, v, step in _evaluable(tss, price, lag):
        predicted = predict_direction(v, tss_b)
        actual = direction_of(step)
        correct = None
        if actual is not Direction.FLAT:
            correct = predicted is actual
            counts[actual][0] += 1
            counts[actual][1] += correct
        outcomes.append(SampleOutcome(t, v, predicted, actual, correct))
    if not counts[Direction.UP][0] + counts[Direction.DOWN][0]:
        raise InputError(f"no non-flat price step overlaps the sentiment series at lag {lag}")
    return BaselineReport(
        tss_b=float(tss_b), lag=lag, per_sample=tuple(outcomes),
        n_up=counts[Direction.UP][0], n_down=counts[Direction.DOWN][0],
        n_correct_up=counts[Direction.UP][1], n_correct_down=counts[Direction.DOWN][1],
    )


def _nudge(x: float) -> float:
    return 1e-9 * max(1.0, abs(x))


def candidate_thresholds(values) -> List[float]:
    """Midpoints between consecutive distinct values, plus both extremes nudged outward."""
    distinct = sorted(set(values))
    if not distinct:
        return []
    out = [distinct[0] - _nudge(distinct[0])]
    for a, b in zip(distinct, distinct[1:]):
        mid = a + (b - a) / 2
        out.append(mid if a <= mid < b else a)
    out.append(distinct[-1] + _nudge(distinct[-1]))
    return out


def select_baseline(tss: Series, price: Series, lag: int) -> Tuple[float, BaselineReport]:
    """Threshold with the highest accuracy at ``lag``; ties go to the smallest threshold."""
    rows = [(v, step) for _, v, step in _evaluable(tss, price, lag) if step != 0]
    if not rows:
        raise InputError(f"no non-flat price step overlaps the sentiment series at lag {lag}")
    rows.sort()
    candidates = candidate_thresholds(v for v, _ in rows)
    # Sweep upward: every sample starts predicted Up; passing a value flips its group to Down.
    correct = sum(1 for _, s in rows if s > 0)
    best_b, best_correct = candidates[0], correct
    groups = [(v, [s for _, s in grp]) for v, grp in groupby(rows, key=lambda r: r[0])]
    for b, (_, steps) in zip(candidates[1:], groups):
        correct += sum(1 if s < 0 else -1 for s in steps)
        if correct > best_correct:
            best_b, best_correct = b, correct
    report = evaluate_baseline(tss, price, lag, best_b)
    return best_b, report


def segment_regions(report: BaselineReport) -> RegionSegmentation:
    """Maximal runs of evaluated samples sharing the same correctness."""
    evaluated = report.evaluated()
    if not evaluated:
        raise InputError("report has no evaluated samples")
    regions = []
    for correct, run in groupby(evaluated, key=lambda s: s.correct):
        run = list(run)
        regions.append(Region(run[0].t, run[-1].t, bool(correct)))
    return RegionSegmentation(tuple(regions))
