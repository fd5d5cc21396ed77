"""Logistic regression (IRLS), LDA and QDA for Up/Down direction labels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .series import Direction, InputError, Series, direction_of, directions

LABELS = (Direction.UP, Direction.DOWN)


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray
    labels: Tuple[Direction, ...]
    sample_index: Tuple[int, ...] = ()

    def __post_init__(self):
        x = np.asarray(self.features, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", tuple(self.labels))
        if x.shape[0] != len(self.labels):
            raise InputError("features and labels differ in length")
        if not np.all(np.isfinite(x)):
            raise InputError("features contain non-finite values")
        if any(lab not in LABELS for lab in self.labels):
            raise InputError("labels must be Up or Down")

    @property
    def y(self) -> np.ndarray:
        """1 for Up, 0 for Down."""
        return np.array([lab is Direction.UP for lab in self.labels], dtype=float)

    def __len__(self):
        return len(self.labels)

    def split(self, fraction: float) -> Tuple["Dataset", "Dataset"]:
        """Chronological split: the first ``fraction`` of rows train, the rest test."""
        cut = int(round(fraction * len(self)))
        idx = self.sample_index or tuple(range(len(self)))
        return (Dataset(self.features[:cut], self.labels[:cut], idx[:cut]),
                Dataset(self.features[cut:], self.labels[cut:], idx[cut:]))


def build_dataset(tss: Series, price: Series, lag: int, window: int = 1) -> Dataset:
    """Rows ``[tss[t], tss[t-1], ...]`` labelled by the price step ending at ``t + lag``.

    ``window`` sets how many consecutive sentiment values form the feature
    vector; rows with any missing value or a Flat step are dropped.
    """
    if window < 1:
        raise InputError("window must be at least 1")
    steps = directions(price).to_dict()
    values = tss.to_dict()
    rows, labels, index = [], [], []
    for t in tss.index:
        step = steps.get(t + lag)
        if step is None or step == 0:
            continue
        feats = [values.get(t - j) for j in range(window)]
        if any(f is None for f in feats):
            continue
        rows.append(feats)
        labels.append(direction_of(step))
        index.append(t)
    if not rows:
        raise InputError(f"no evaluable samples at lag {lag}")
    if len(set(labels)) < 2:
        raise InputError(f"only {labels[0]} steps at lag {lag}; need both classes")
    return Dataset(np.array(rows), tuple(labels), tuple(index))


def _check_two_classes(data: Dataset):
    y = data.y
    if y.min() == y.max():
        raise InputError("both Up and Down labels are required")


@dataclass(frozen=True)
class LogisticModel:
    weights: np.ndarray  # intercept first
    converged: bool
    iterations: int
    log_likelihood: Tuple[float, ...] = field(default=(), repr=False)

    @property
    def n_features(self) -> int:
        return self.weights.size - 1

    def to_dict(self) -> dict:
        return {"kind": "logistic", "weights": self.weights.tolist(),
                "converged": self.converged, "iterations": self.iterations}


def _log_sigmoid(z):
    return -np.logaddexp(0.0, -z)


def _penalized_loglik(w, X, y, ridge):
    z = X @ w
    return float(np.sum(y * _log_sigmoid(z) + (1 - y) * _log_sigmoid(-z)) - 0.5 * ridge * w @ w)


def fit_logistic(data: Dataset, max_iter: int = 100, tol: float = 1e-8, ridge: float = 1e-6) -> LogisticModel:
    """Ridge-penalized logistic regression by iteratively reweighted least squares.

    Each Newton step is halved until the penalized log-likelihood does not
    decrease, so the recorded likelihood trace is monotone.
    """
    X = np.hstack([np.ones((len(data), 1)), data.features])
    y = data.y
    w = np.zeros(X.shape[1])
    ll = _penalized_loglik(w, X, y, ridge)
    trace = [ll]
    penalty = ridge * np.eye(X.shape[1])
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        p = 1.0 / (1.0 + np.exp(-(X @ w)))
        s = p * (1 - p)
        hess = X.T @ (X * s[:, None]) + penalty
        grad = X.T @ (y - p) - ridge * w
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            raise InputError("reweighted least-squares system is singular") from None
        scale = 1.0
        while True:
            candidate = w + scale * step
            cand_ll = _penalized_loglik(candidate, X, y, ridge)
            if cand_ll >= ll or scale < 1e-10:
                break
            scale /= 2
        if cand_ll < ll:
            converged = True
            break
        change = float(np.max(np.abs(candidate - w)))
        w, ll = candidate, cand_ll
        trace.append(ll)
        if change < tol:
            converged = True
            break
    if not np.all(np.isfinite(w)):
        raise InputError("logistic weights diverged")
    return LogisticModel(w, converged, it, tuple(trace))


@dataclass(frozen=True)
class GaussianClassModel:
    """Gaussian class-conditional model; index 0 is Up, index 1 is Down."""

    kind: str
    priors: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    inverses: np.ndarray = field(repr=False)
    log_dets: np.ndarray = field(repr=False)

    @property
    def n_features(self) -> int:
        return self.means.shape[1]

    def log_posteriors(self, features) -> np.ndarray:
        """Unnormalized log-posteriors, shape ``(n, 2)``."""
        x = np.asarray(features, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        out = np.empty((x.shape[0], 2))
        for c in range(2):
            diff = x - self.means[c]
            maha = np.einsum("ij,jk,ik->i", diff, self.inverses[c], diff)
            out[:, c] = math.log(self.priors[c]) - 0.5 * self.log_dets[c] - 0.5 * maha
        return out

    def to_dict(self) -> dict:
        return {"kind": self.kind, "classes": [str(c) for c in LABELS],
                "priors": self.priors.tolist(), "means": self.means.tolist(),
                "covariances": self.covariances.tolist()}


def _gaussian(kind: str, covs: np.ndarray, priors, means) -> GaussianClassModel:
    inverses = np.empty_like(covs)
    log_dets = np.empty(2)
    for c in range(2):
        sign, logdet = np.linalg.slogdet(covs[c])
        if sign <= 0:
            raise InputError("covariance is not positive definite even after regularization")
        inverses[c] = np.linalg.inv(covs[c])
        log_dets[c] = logdet
    return GaussianClassModel(kind, np.asarray(priors), np.asarray(means), covs, inverses, log_dets)


def _class_split(data: Dataset):
    _check_two_classes(data)
    y = data.y
    groups = [data.features[y == 1], data.features[y == 0]]
    priors = np.array([len(g) for g in groups], dtype=float) / len(data)
    means = np.array([g.mean(axis=0) for g in groups])
    return groups, priors, means


def fit_lda(data: Dataset, ridge: float = 1e-9) -> GaussianClassModel:
    groups, priors, means = _class_split(data)
    d = data.features.shape[1]
    if len(data) < d + 2:
        raise InputError(f"LDA needs at least {d + 2} samples")
    scatter = sum((g - m).T @ (g - m) for g, m in zip(groups, means))
    pooled = scatter / (len(data) - 2) + ridge * np.eye(d)
    return _gaussian("LDA", np.array([pooled, pooled]), priors, means)


def fit_qda(data: Dataset, ridge: float = 1e-9) -> GaussianClassModel:
    groups, priors, means = _class_split(data)
    d = data.features.shape[1]
    if min(len(g) for g in groups) < d + 1:
        raise InputError(f"QDA needs at least {d + 1} samples per class")
    covs = np.array([(g - m).T @ (g - m) / (len(g) - 1) + ridge * np.eye(d)
                     for g, m in zip(groups, means)])
    return _gaussian("QDA", covs, priors, means)


Model = Union[LogisticModel, GaussianClassModel]


def decision_margin(model: Model, features) -> np.ndarray:
    """Positive favours Up. For logistic models this is the linear predictor."""
    x = np.asarray(features, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[1] != model.n_features:
        raise InputError(f"model expects {model.n_features} features, got {x.shape[1]}")
    if isinstance(model, LogisticModel):
        return model.weights[0] + x @ model.weights[1:]
    lp = model.log_posteriors(x)
    return lp[:, 0] - lp[:, 1]


def predict(model: Model, features) -> List[Direction]:
    """Up iff the margin is strictly positive (posterior exactly 0.5 gives Down)."""
    return [Direction.UP if m > 0 else Direction.DOWN for m in decision_margin(model, features)]


@dataclass(frozen=True)
class ConfusionReport:
    """Counts indexed ``[actual][predicted]`` with Up first."""

    counts: Tuple[Tuple[int, int], Tuple[int, int]]

    @property
    def total(self) -> int:
        return sum(map(sum, self.counts))

    @property
    def n_up(self) -> int:
        return sum(self.counts[0])

    @property
    def n_down(self) -> int:
        return sum(self.counts[1])

    @property
    def overall_accuracy(self) -> float:
        return (self.counts[0][0] + self.counts[1][1]) / self.total

    @property
    def up_accuracy(self) -> Optional[float]:
        return self.counts[0][0] / self.n_up if self.n_up else None

    @property
    def down_accuracy(self) -> Optional[float]:
        return self.counts[1][1] / self.n_down if self.n_down else None

    def to_dict(self) -> dict:
        return {
            "labels": [str(c) for c in LABELS],
            "counts": [list(r) for r in self.counts],
            "overall_accuracy": self.overall_accuracy,
            "up_accuracy": self.up_accuracy,
            "down_accuracy": self.down_accuracy,
            "n": self.total,
        }


def confusion(predicted: Sequence[Direction], actual: Sequence[Direction]) -> ConfusionReport:
    if len(predicted) != len(actual):
        raise InputError("predicted and actual differ in length")
    if not actual:
        raise InputError("cannot score an empty prediction set")
    pos = {Direction.UP: 0, Direction.DOWN: 1}
    counts = [[0, 0], [0, 0]]
    for p, a in zip(predicted, actual):
        counts[pos[a]][pos[p]] += 1
    return ConfusionReport((tuple(counts[0]), tuple(counts[1])))
