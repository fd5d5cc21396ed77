"""Lexicon-based tweet scoring.

Each tweet scores +1 per positive token and -1 per negative token; the
sentiment score of a time sample is the mean over all its tweets, including
tweets that carry no sentiment words at all.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Sequence

from .series import InputError, Series

_STRIP = re.compile(r"http\S*|@\w+")
_TOKEN = re.compile(r"[^\W_]+")
# For pure-ASCII text [^\W_] is exactly [A-Za-z0-9]; translate+split is much faster.
_ASCII_SEPARATORS = str.maketrans({
    c: " " for c in map(chr, range(128)) if not c.isalnum()
})


@dataclass(frozen=True)
class Lexicon:
    positive: FrozenSet[str]
    negative: FrozenSet[str]
    weights: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "positive", frozenset(self.positive))
        object.__setattr__(self, "negative", frozenset(self.negative))
        for word in self.positive | self.negative:
            if word != word.lower() or not word or any(c.isspace() for c in word):
                raise InputError(f"lexicon entry {word!r} must be lowercase without whitespace")
        overlap = self.positive & self.negative
        if overlap:
            raise InputError(f"tokens in both polarities: {sorted(overlap)}")
        weights = dict.fromkeys(self.positive, 1)
        weights.update(dict.fromkeys(self.negative, -1))
        object.__setattr__(self, "weights", weights)

    def swapped(self) -> "Lexicon":
        return Lexicon(self.negative, self.positive)


def read_wordlist(path) -> List[str]:
    """Tokens from a one-per-line file; ``#`` lines and blank lines are skipped."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        raise InputError(f"wordlist not found: {path}") from None
    words = []
    for lineno, line in enumerate(lines, start=1):
        token = line.strip()
        if not token or token.startswith("#"):
            continue
        if any(c.isspace() for c in token):
            raise InputError(f"{path}:{lineno}: token contains whitespace: {token!r}")
        words.append(token.lower())
    return words


def load_lexicon(positive_path, negative_path) -> Lexicon:
    return Lexicon(frozenset(read_wordlist(positive_path)), frozenset(read_wordlist(negative_path)))


def _data_path(name: str) -> Path:
    return Path(str(resources.files("tssbaseline") / "data" / name))


def default_lexicon() -> Lexicon:
    """The small finance-flavoured lexicon shipped with the package."""
    return load_lexicon(_data_path("positive.txt"), _data_path("negative.txt"))


def default_stopwords() -> FrozenSet[str]:
    return frozenset(read_wordlist(_data_path("stopwords.txt")))


def tokenize(text: str) -> List[str]:
    """Lowercase, drop URLs and @-mentions, split on anything non-alphanumeric.

    >>> tokenize("Buy! #FTSE up http://t.co/x @bob")
    ['buy', 'ftse', 'up']
    """
    text = _STRIP.sub(" ", text.lower())
    if text.isascii():
        return text.translate(_ASCII_SEPARATORS).split()
    return _TOKEN.findall(text)


def score_tweet(tokens: Iterable[str], lexicon: Lexicon) -> int:
    weights = lexicon.weights
    return sum(weights.get(tok, 0) for tok in tokens)


def sample_tss(texts: Sequence[str], lexicon: Lexicon) -> Optional[float]:
    """Mean tweet score of one batch, or ``None`` for an empty batch."""
    if not texts:
        return None
    # No pattern matches across a newline, so tokenizing the joined batch equals
    # tokenizing each tweet; the integer total is order-independent.
    counts = Counter(tokenize("\n".join(texts)))
    weights = lexicon.weights
    total = sum(w * counts[tok] for tok, w in weights.items() if tok in counts)
    return total / len(texts)


def score_series(batches, lexicon: Lexicon) -> Series:
    """One TSS value per non-empty batch; empty batches become gaps."""
    pairs = []
    for batch in batches:
        tss = sample_tss(batch.texts, lexicon)
        if tss is not None:
            pairs.append((batch.sample_index, tss))
    return Series.from_pairs(pairs)
