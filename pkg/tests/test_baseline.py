from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tssbaseline.baseline import (
    candidate_thresholds, evaluate_baseline, predict_direction, segment_regions, select_baseline,
)
from tssbaseline.ingest import SyntheticConfig, generate_synthetic
from tssbaseline.lexicon import score_series
from tssbaseline.series import Direction, InputError, Series

from conftest import series


def test_predict_direction():
    assert predict_direction(0.20, 0.14453) is Direction.UP
    assert predict_direction(0.14453, 0.14453) is Direction.DOWN
    assert predict_direction(-0.1, 0.0) is Direction.DOWN


def test_evaluate_hand_fixture():
    tss = series([0.5, 0.1, 0.9, 0.2, 0.3])
    price = series([10.0, 11.0, 11.0, 12.0, 11.0, 10.0])
    # lag 1: t=0 -> step Up(11>10); t=1 -> Flat; t=2 -> Up; t=3 -> Down; t=4 -> Down
    report = evaluate_baseline(tss, price, 1, 0.25)
    assert [s.correct for s in report.per_sample] == [True, None, True, True, False]
    assert report.n_evaluated == 4
    assert report.accuracy == 0.75
    assert report.up_accuracy == 1.0
    assert report.down_accuracy == 0.5
    assert report.accuracy + report.error_rate == 1.0


def test_empty_evaluable_set():
    with pytest.raises(InputError):
        evaluate_baseline(series([0.1, 0.2]), series([5.0, 5.0, 5.0]), 0, 0.0)
    with pytest.raises(InputError):
        evaluate_baseline(series([0.1, 0.2]), series([5.0, 6.0], start=50), 0, 0.0)


def test_inverted_predictions_complement():
    rng = np.random.default_rng(4)
    tss = series(list(rng.normal(size=30)))
    price = series(list(np.cumsum(rng.choice([-1.0, 1.0], size=31))))
    a = evaluate_baseline(tss, price, 0, 0.1)
    # negating TSS and threshold flips every strict comparison, i.e. every prediction
    b = evaluate_baseline(Series(tss.index, [-v for v in tss.values]), price, 0, -0.1)
    assert a.n_correct + b.n_correct == a.n_evaluated


def test_select_hand_example():
    tss = Series((1, 2, 3, 4), (1.0, 2.0, 3.0, 4.0))
    price = series([10.0, 9.0, 8.0, 9.0, 10.0])  # steps ending at 1..4: Down, Down, Up, Up
    b, report = select_baseline(tss, price, 0)
    assert b == 2.5
    assert report.accuracy == 1.0


def test_select_all_up_returns_lowest_candidate():
    tss = series([0.3, 0.1, 0.2])
    price = series([1.0, 2.0, 3.0, 4.0])
    b, report = select_baseline(tss, price, 1)
    assert b == candidate_thresholds([0.3, 0.1, 0.2])[0]
    assert b < 0.1
    assert report.accuracy == 1.0


def test_candidates():
    assert candidate_thresholds([2.0, 1.0, 2.0, 4.0])[1:-1] == [1.5, 3.0]
    # adjacent floats: midpoint must still separate the two values
    a = 1.0
    b = np.nextafter(a, 2.0)
    cands = candidate_thresholds([a, b])
    assert a <= cands[1] < b


def brute_force_best(rows):
    """O(n^2): try every observed value and one value below all of them."""
    values = sorted({v for v, _ in rows})
    cands = [values[0] - 1.0] + values
    return max(sum((v > t) == (s > 0) for v, s in rows) for t in cands)


@given(st.lists(st.tuples(st.integers(-5, 5), st.sampled_from([-1.0, 0.0, 1.0])), min_size=2, max_size=40))
def test_select_matches_brute_force(data):
    tss = series([v / 4 for v, _ in data])
    level, prices = 0.0, [0.0]
    for _, s in data:
        level += s
        prices.append(level)
    price = series(prices)
    rows = [(v / 4, s) for v, s in data if s != 0]
    if not rows:
        with pytest.raises(InputError):
            select_baseline(tss, price, 1)
        return
    b, report = select_baseline(tss, price, 1)
    assert report.n_correct == brute_force_best(rows)
    # ties go to the smallest threshold: no lower candidate reaches the optimum
    for c in candidate_thresholds(v for v, _ in rows):
        if c < b:
            assert evaluate_baseline(tss, price, 1, c).n_correct < report.n_correct
    n_up = sum(1 for _, s in rows if s > 0)
    assert report.accuracy >= max(n_up, len(rows) - n_up) / len(rows)


def _increasing(x):
    return x ** 3 + 5 * x - 2  # exact on the small dyadic inputs below


@given(st.lists(st.integers(-40, 40), min_size=3, max_size=30), st.integers(-80, 80), st.integers(0, 2**32))
def test_monotone_transform_invariance(ints, b_int, seed):
    rng = np.random.default_rng(seed)
    values, b = [i / 4 for i in ints], b_int / 8
    tss = series(values)
    price = series(list(np.cumsum(rng.choice([-1.0, 0.0, 1.0], size=len(values) + 1))))
    try:
        base = evaluate_baseline(tss, price, 1, b)
    except InputError:
        return
    moved = evaluate_baseline(series([_increasing(v) for v in values]), price, 1, _increasing(b))
    assert [s.correct for s in moved.per_sample] == [s.correct for s in base.per_sample]


@given(st.lists(st.tuples(st.floats(-1, 1), st.sampled_from([-1.0, 0.0, 1.0])), min_size=1, max_size=50),
       st.floats(-1, 1))
def test_report_identities(data, b):
    prices = list(np.concatenate([[0.0], np.cumsum([s for _, s in data])]))
    tss, price = series([v for v, _ in data]), series(prices)
    try:
        r = evaluate_baseline(tss, price, 1, b)
    except InputError:
        return
    assert r.accuracy + r.error_rate == 1.0
    assert r.accuracy == float(Fraction(r.n_correct, r.n_evaluated))
    assert abs(r.accuracy * r.n_evaluated - r.n_correct) < 1e-9
    # decomposition, exactly in rational arithmetic over the stored counts
    up = Fraction(r.n_correct_up, r.n_up) if r.n_up else Fraction(0)
    down = Fraction(r.n_correct_down, r.n_down) if r.n_down else Fraction(0)
    assert (up * r.n_up + down * r.n_down) / r.n_evaluated == Fraction(r.n_correct, r.n_evaluated)
    regions = segment_regions(r)
    assert sum(1 for s in r.evaluated() if s.correct) == sum(
        sum(1 for s in r.evaluated() if reg.start_t <= s.t <= reg.end_t) for reg in regions.regions if reg.capable)


class TestSegmentRegions:
    def make(self, pattern):
        # build a report whose evaluated correctness follows the pattern, with tss_b = 0
        tss, steps = [], []
        for ok in pattern:
            tss.append(1.0)
            steps.append(1.0 if ok else -1.0)
        price = series(list(np.concatenate([[0.0], np.cumsum(steps)])))
        return evaluate_baseline(series(tss), price, 1, 0.0)

    def test_all_correct(self):
        regions = segment_regions(self.make([True] * 4)).regions
        assert len(regions) == 1 and regions[0].capable

    def test_ttfft(self):
        regions = segment_regions(self.make([True, True, False, False, True])).regions
        assert [(r.start_t, r.end_t, r.capable) for r in regions] == [(0, 1, True), (2, 3, False), (4, 4, True)]

    @given(st.lists(st.booleans(), min_size=1, max_size=40))
    def test_partition_alternates(self, pattern):
        report = self.make(pattern)
        regions = segment_regions(report).regions
        evaluated = report.evaluated()
        sizes = [sum(1 for s in evaluated if r.start_t <= s.t <= r.end_t) for r in regions]
        assert sum(sizes) == report.n_evaluated
        assert all(a.capable != b.capable for a, b in zip(regions, regions[1:]))
        capable = sum(n for n, r in zip(sizes, regions) if r.capable)
        assert Fraction(capable, report.n_evaluated) == Fraction(report.n_correct, report.n_evaluated)

    def test_csv(self):
        text = segment_regions(self.make([True, False])).to_csv()
        assert text == "start_t,end_t,capable\n0,0,true\n1,1,false\n"


def test_synthetic_true_lag_perfect(lexicon):
    cfg = SyntheticConfig(n_samples=80, tweets_per_sample=300, planted_lag=6, seed=11)
    batches, price = generate_synthetic(cfg, lexicon)
    tss = score_series(batches, lexicon)
    b, report = select_baseline(tss, price, 6)
    assert report.accuracy == 1.0
    median = float(np.median(tss.values))
    assert evaluate_baseline(tss, price, 6, median).accuracy == 1.0
