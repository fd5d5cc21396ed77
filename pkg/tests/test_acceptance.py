"""Acceptance criteria, one test each; every test reports a PASS/FAIL line."""

import json
import math
import time
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from tssbaseline import align, ingest
from tssbaseline.baseline import evaluate_baseline, select_baseline
from tssbaseline.cefd import fund_discount, weighted_cefd
from tssbaseline.classifiers import (
    Dataset, build_dataset, confusion, decision_margin, fit_lda, fit_logistic, fit_qda, predict,
)
from tssbaseline.cli import main, series_csv
from tssbaseline.ingest import FundRecord, SyntheticConfig, generate_synthetic
from tssbaseline.lexicon import default_lexicon, score_series
from tssbaseline.regression import f_cdf, polyfit
from tssbaseline.series import Direction, Series

from oracles import f_cdf_quadrature
from test_cli import HAND_TSS, HAND_TWEETS

LEX = default_lexicon()


def cli(*argv):
    return main([str(a) for a in argv])


def outputs(d: Path):
    return {str(p.relative_to(d)): p.read_bytes() for p in sorted(d.rglob("*")) if p.is_file()}


# 1 -------------------------------------------------------------------------

def brute_cefd(records):
    num = Fraction(0)
    den = Fraction(0)
    for r in records:
        d = (Fraction(r.net_value) - Fraction(r.traded_value)) / Fraction(r.net_value) * 100
        num += d * Fraction(r.volume)
        den += Fraction(r.volume)
    return num / den


def test_cefd_oracle(criterion):
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst, invariants = 0.0, True
    for _ in range(1000):
        k = int(rng.integers(1, 12))
        nav = rng.uniform(1, 200, k)
        traded = nav * rng.uniform(0.7, 1.3, k)
        vol = rng.uniform(0, 1e5, k)
        vol[rng.random(k) < 0.2] = 0.0
        vol[0] = max(vol[0], 1.0)
        records = [FundRecord(0, f"f{i}", float(nav[i]), float(traded[i]), float(vol[i])) for i in range(k)]
        snap = weighted_cefd(records)
        exact = float(brute_cefd(records))
        worst = max(worst, abs(snap.cefd - exact))
        live = [fund_discount(r.net_value, r.traded_value) for r in records if r.volume > 0]
        scale = float(rng.uniform(1e-3, 1e3))
        scaled = weighted_cefd([replace(r, volume=r.volume * scale) for r in records])
        invariants &= min(live) <= snap.cefd <= max(live)
        invariants &= abs(scaled.cefd - snap.cefd) <= 1e-12 * max(1.0, abs(snap.cefd))
        invariants &= snap.cefp == -snap.cefd
    elapsed = time.perf_counter() - start
    criterion(1, "CEFD matches exact oracle on 1000 fixtures; convexity and volume scaling hold; < 1 s",
              worst <= 1e-12 and invariants and elapsed < 1.0,
              f"max error {worst:.2e}, {elapsed:.2f} s")


# 2 -------------------------------------------------------------------------

def test_planted_lag(criterion, tmp_path):
    start = time.perf_counter()
    assert cli("synth", "--out-dir", tmp_path, "--seed", 0, "--n-samples", 101,
               "--tweets-per-sample", 5000, "--planted-lag", 15, "--noise-sigma", 0) == 0
    assert cli("score", "--tweets", tmp_path / "tweets.csv", "--out-dir", tmp_path) == 0
    assert cli("analyze", "--tss", tmp_path / "tss.csv", "--prices", tmp_path / "prices.csv",
               "--out-dir", tmp_path) == 0
    best = json.loads((tmp_path / "lag_scan.json").read_text())["best_lag"]
    accuracy = json.loads((tmp_path / "baseline.json").read_text())["accuracy"]

    # the price step has magnitude 1, so sigma 0.25 is a quarter of the signal amplitude
    hits = 0
    for seed in range(1, 21):
        batches, price = generate_synthetic(SyntheticConfig(seed=seed, noise_sigma=0.25), LEX)
        scan = align.scan_lags(score_series(batches, LEX), price, -30, 30)
        hits += scan.best_lag in (14, 15, 16)
    elapsed = time.perf_counter() - start
    criterion(2, "planted lag 15 recovered (noise-free accuracy >= 0.95; >= 18/20 noisy seeds); < 30 s",
              best == 15 and accuracy >= 0.95 and hits >= 18 and elapsed < 30.0,
              f"best_lag {best}, accuracy {accuracy}, noisy hits {hits}/20, {elapsed:.1f} s")


# 3 -------------------------------------------------------------------------

def test_scoring(criterion, tmp_path):
    (tmp_path / "tweets.csv").write_text(HAND_TWEETS, encoding="utf-8")
    assert cli("score", "--tweets", tmp_path / "tweets.csv", "--out-dir", tmp_path) == 0
    exact = (tmp_path / "tss.csv").read_text() == HAND_TSS

    batches, _ = generate_synthetic(SyntheticConfig(seed=5), LEX)
    start = time.perf_counter()
    tss = score_series(batches, LEX)
    elapsed = time.perf_counter() - start
    criterion(3, "hand-scored fixture bit-exact; 101 x 5000 tweets scored in < 5 s",
              exact and len(tss) == 101 and elapsed < 5.0, f"{elapsed:.2f} s")


# 4 -------------------------------------------------------------------------

def test_regression(criterion):
    rng = np.random.default_rng(11)
    x = np.arange(101, dtype=float)
    u = (x - 50.0) / 50.0
    y = np.polynomial.polynomial.polyval(u, rng.normal(size=10))
    r2 = polyfit(x, y, 9).r_squared

    worst_quad = max(abs(f_cdf(f, d1, d2) - f_cdf_quadrature(f, d1, d2))
                     for d1 in (1, 2, 5, 9) for d2 in (5, 10, 50, 91) for f in (0.1, 1, 2.5, 10))
    worst_recip = max(abs(f_cdf(f, d1, d2) - (1 - f_cdf(1 / f, d2, d1)))
                      for d1 in (1, 2, 5, 9) for d2 in (5, 10, 50, 91) for f in (0.1, 1, 2.5, 10))
    criterion(4, "degree-9 R^2 >= 1 - 1e-9; f_cdf vs quadrature <= 1e-8; reciprocal identity <= 1e-10",
              r2 >= 1 - 1e-9 and worst_quad <= 1e-8 and worst_recip <= 1e-10,
              f"1 - R^2 = {1 - r2:.1e}, quadrature {worst_quad:.1e}, reciprocal {worst_recip:.1e}")


# 5 -------------------------------------------------------------------------

def exhaustive_threshold(tss, steps):
    """Best correct count over every observed value and one point below them all."""
    rows = [(v, s) for v, s in zip(tss, steps) if s != 0]
    cands = [min(v for v, _ in rows) - 1.0] + [v for v, _ in rows]
    return max(sum((v > b) == (s > 0) for v, s in rows) for b in cands)


def test_baseline_optimality(criterion):
    rng = np.random.default_rng(5)
    ok = True
    for _ in range(100):
        values = np.round(rng.normal(0.15, 0.1, 50), 3)  # rounding forces some ties
        steps = rng.choice([-1.0, 0.0, 1.0], 50, p=[0.45, 0.1, 0.45])
        price = Series(tuple(range(51)), tuple(np.r_[0.0, np.cumsum(steps)]))
        tss = Series(tuple(range(50)), tuple(values))
        b, report = select_baseline(tss, price, 1)
        ok &= report.n_correct == exhaustive_threshold(values, steps)
        ok &= evaluate_baseline(tss, price, 1, b).n_correct == report.n_correct
        ok &= report.accuracy + report.error_rate == 1.0
        ok &= report.n_correct == report.n_correct_up + report.n_correct_down
        ok &= report.n_evaluated == report.n_up + report.n_down == int(np.count_nonzero(steps))
        ok &= (Fraction(report.n_correct_up) + Fraction(report.n_correct_down)
               == Fraction(report.n_up) * Fraction(report.n_correct_up, report.n_up or 1)
               + Fraction(report.n_down) * Fraction(report.n_correct_down, report.n_down or 1))
    criterion(5, "select_baseline equals exhaustive oracle on 100 instances; identities exact", ok)


# 6 -------------------------------------------------------------------------

def gaussians(rng, n, d=1):
    y = rng.random(n) < 0.5
    x = rng.normal(size=(n, d)) + np.where(y, -1.0, 1.0)[:, None]
    return Dataset(x, tuple(Direction.UP if v else Direction.DOWN for v in y))


def test_classifier_quality(criterion):
    bayes = 0.5 * (1 + math.erf(1 / math.sqrt(2)))
    acc = {"logistic": [], "lda": [], "qda": []}
    for seed in range(20):
        rng = np.random.default_rng(seed)
        train, test = gaussians(rng, 400), gaussians(rng, 20000)
        for key, fit in (("logistic", fit_logistic), ("lda", fit_lda), ("qda", fit_qda)):
            acc[key].append(confusion(predict(fit(train), test.features), test.labels).overall_accuracy)
    means = {k: float(np.mean(v)) for k, v in acc.items()}
    quality = all(abs(m - bayes) <= 0.02 for m in means.values())

    rng = np.random.default_rng(99)
    data = gaussians(rng, 400, d=2)
    A = np.array([[2.0, 0.5], [-0.3, 1.5]])
    shift = np.array([4.0, -7.0])
    probe = rng.normal(size=(5000, 2)) * 2
    m1 = decision_margin(fit_lda(data), probe)
    m2 = decision_margin(fit_lda(Dataset(data.features @ A.T + shift, data.labels)), probe @ A.T + shift)
    clear = np.abs(m1) > 1e-6
    invariant = np.array_equal((m1 > 0)[clear], (m2 > 0)[clear])

    up = rng.normal(size=(60, 2)) @ np.array([[1.0, 0.4], [0.0, 0.7]])
    down = 2 * up.mean(axis=0) - up + np.array([1.0, 0.5])  # point reflection keeps the scatter
    eq = Dataset(np.vstack([up, down]), (Direction.UP,) * 60 + (Direction.DOWN,) * 60)
    same = predict(fit_qda(eq), probe) == predict(fit_lda(eq), probe)

    detail = ", ".join(f"{k} {m:.4f}" for k, m in means.items()) + f" vs Bayes {bayes:.4f}"
    criterion(6, "classifiers within 0.02 of the Bayes rate; LDA affine invariant; QDA = LDA on equal covariance",
              quality and invariant and same, detail)


# 7 -------------------------------------------------------------------------

def test_asymmetry(criterion):
    rng = np.random.default_rng(3)
    n = 2000
    up = rng.random(n) < 0.9
    x = rng.normal(size=n) + np.where(up, 0.1, -0.1)  # weak feature
    price = Series(tuple(range(n + 1)), tuple(np.r_[0.0, np.cumsum(np.where(up, 1.0, -1.0))]))
    tss = Series(tuple(range(n)), tuple(x))
    data = build_dataset(tss, price, 1)
    train, test = data.split(0.5)
    reports = {key: confusion(predict(fit(train), test.features), test.labels)
               for key, fit in (("logistic", fit_logistic), ("lda", fit_lda), ("qda", fit_qda))}
    ok = all(r.up_accuracy > 0.9 and r.down_accuracy < 0.3 for r in reports.values())
    detail = ", ".join(f"{k} up {r.up_accuracy:.3f} down {r.down_accuracy:.3f}" for k, r in reports.items())
    criterion(7, "90% Up fixture: up_accuracy > 0.9 and down_accuracy < 0.3", ok, detail)


# 8 -------------------------------------------------------------------------

def test_determinism(criterion, tmp_path):
    def every_command(root: Path):
        steps = [
            ("synth", "--out-dir", root / "synth", "--seed", 4, "--n-samples", 50,
             "--tweets-per-sample", 300, "--planted-lag", 5, "--noise-sigma", 0.2),
            ("score", "--tweets", root / "synth" / "tweets.csv", "--out-dir", root / "score"),
            ("analyze", "--tss", root / "score" / "tss.csv", "--prices", root / "synth" / "prices.csv",
             "--out-dir", root / "analyze", "--lag-min", -10, "--lag-max", 10, "--split", 0.6),
            ("classify", "--tss", root / "score" / "tss.csv", "--prices", root / "synth" / "prices.csv",
             "--out-dir", root / "classify", "--lag-min", -10, "--lag-max", 10, "--window", 2),
            ("cefd", "--funds", root / "funds.csv", "--prices", root / "synth" / "prices.csv",
             "--out-dir", root / "cefd", "--lag-min", -10, "--lag-max", 10),
            ("pipeline", "--tweets", root / "synth" / "tweets.csv", "--prices", root / "synth" / "prices.csv",
             "--out-dir", root / "pipeline", "--lag-min", -10, "--lag-max", 10),
        ]
        rng = np.random.default_rng(8)
        records = [FundRecord(t, f"f{k}", 100.0, float(100 - rng.uniform(-5, 10)), float(rng.uniform(1, 50)))
                   for t in range(50) for k in range(3)]
        root.mkdir()
        (root / "funds.csv").write_text(ingest.funds_csv(records), encoding="utf-8")
        codes = [cli(*step) for step in steps]
        return codes, {name: outputs(root / name) for name, *_ in steps}

    codes_a, a = every_command(tmp_path / "a")
    codes_b, b = every_command(tmp_path / "b")
    ok = codes_a == codes_b == [0] * 6 and a == b and all(a.values())
    criterion(8, "every subcommand reruns to byte-identical outputs", ok,
              f"{sum(len(v) for v in a.values())} files compared")
