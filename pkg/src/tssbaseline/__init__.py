"""Twitter sentiment score (TSS) analysis for stock-direction prediction.

Lexicon scoring of tweet batches, closed-end fund discounts, lag analysis
against a price series, polynomial regression diagnostics, a constant-threshold
direction predictor, and logistic/LDA/QDA classifiers.
"""

from .align import LagPairing, LagScanReport, lag_shift, pair_at_lag, pearson_r, scan_lags
from .baseline import (
    BaselineReport, RegionSegmentation, evaluate_baseline, predict_direction,
    segment_regions, select_baseline,
)
from .cefd import CefdSnapshot, cefp_series, fund_discount, weighted_cefd
from .classifiers import (
    ConfusionReport, Dataset, GaussianClassModel, LogisticModel, build_dataset,
    confusion, fit_lda, fit_logistic, fit_qda, predict,
)
from .corpus import FrequencyTable, top_k, word_frequencies
from .ingest import (
    FundRecord, SampleGrid, SyntheticConfig, Tweet, TweetBatch, generate_synthetic,
    read_funds, read_prices, read_tweets,
)
from .lexicon import (
    Lexicon, default_lexicon, default_stopwords, load_lexicon, sample_tss,
    score_series, score_tweet, tokenize,
)
from .regression import FitReport, evaluate, f_cdf, polyfit
from .series import Direction, InputError, Series, directions

__version__ = "0.1.0"
