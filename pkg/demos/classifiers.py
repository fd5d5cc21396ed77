"""Compare logistic regression, LDA and QDA on planted-lag sentiment.

Trains on the first 70% of samples (chronologically) and reports confusion
matrices on the rest, then shows the Up/Down asymmetry that appears when
nearly all steps go one way.
"""

import numpy as np

from tssbaseline import classifiers as clf
from tssbaseline import ingest, lexicon
from tssbaseline.series import Series

lex = lexicon.default_lexicon()
batches, price = ingest.generate_synthetic(
    ingest.SyntheticConfig(n_samples=200, tweets_per_sample=500, planted_lag=8, noise_sigma=0.3, seed=2), lex)
tss = lexicon.score_series(batches, lex)
data = clf.build_dataset(tss, price, lag=8, window=2)
train, test = data.split(0.7)
print(f"{len(train)} training rows, {len(test)} test rows, features: TSS[t], TSS[t-1]")

for name, fit in (("logistic", clf.fit_logistic), ("LDA", clf.fit_lda), ("QDA", clf.fit_qda)):
    report = clf.confusion(clf.predict(fit(train), test.features), test.labels)
    print(f"{name:8s} accuracy {report.overall_accuracy:.3f}  counts [actual][pred] {report.counts}")

# A market that rises 90% of the time and a nearly useless feature: the
# classifiers learn the prior, so Up is almost always right and Down almost never.
rng = np.random.default_rng(0)
up = rng.random(1000) < 0.9
weak = Series(tuple(range(1000)), tuple(rng.normal(size=1000) + np.where(up, 0.1, -0.1)))
steps = np.r_[0.0, np.cumsum(np.where(up, 1.0, -1.0))]
skewed = clf.build_dataset(weak, Series(tuple(range(1001)), tuple(steps)), lag=1)
report = clf.confusion(clf.predict(clf.fit_lda(skewed), skewed.features), skewed.labels)
print(f"\nimbalanced: Up accuracy {report.up_accuracy:.3f}, Down accuracy {report.down_accuracy:.3f}")
