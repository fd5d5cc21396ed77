"""Plant a 15-sample lead in synthetic tweets and find it again.

Generates a full-scale corpus (101 two-hour samples, 5000 tweets each) whose
sentiment leads the price by 15 samples, scores it with the shipped lexicon,
scans lags -30..30 and reports the constant-baseline rule at the best lag.

    python3 demos/lag_analysis.py [noise_sigma]
"""

import sys

from tssbaseline import align, baseline, ingest, lexicon, regression

noise = float(sys.argv[1]) if len(sys.argv) > 1 else 0.0
lex = lexicon.default_lexicon()
batches, price = ingest.generate_synthetic(ingest.SyntheticConfig(noise_sigma=noise), lex)
tss = lexicon.score_series(batches, lex)
print(f"{len(batches)} samples x {len(batches[0].texts)} tweets, TSS range "
      f"{min(tss.values):.4f}..{max(tss.values):.4f}")

scan = align.scan_lags(tss, price, -30, 30)
print("\nlag  pearson_r  baseline_acc")
for r in scan.per_lag:
    if r.lag % 5 == 0 or r.lag == scan.best_lag:
        pr = "   -  " if r.pearson_r is None else f"{r.pearson_r:+.3f}"
        print(f"{r.lag:+4d}  {pr:>9}  {r.baseline_accuracy:.3f}")
print(f"\nbest lag: {scan.best_lag} (planted: 15)")

b, report = baseline.select_baseline(tss, price, scan.best_lag)
print(f"TSS_b = {b:.5f}: accuracy {report.accuracy:.3f}, "
      f"Up {report.up_accuracy:.3f}, Down {report.down_accuracy:.3f}")
regions = baseline.segment_regions(report).regions
print(f"{len(regions)} capable/incapable regions")

fit = regression.fit_series(tss, 9)
print(f"degree-9 fit of TSS against time: R^2 {fit.r_squared:.3f}, F {fit.f_statistic:.2f}, p {fit.p_value:.2e}")
