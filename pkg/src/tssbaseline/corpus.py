"""Word-frequency tables over tweet batches (the numbers behind a word cloud)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import AbstractSet, Iterable, NamedTuple, Optional, Tuple

from .lexicon import default_stopwords, tokenize


class FrequencyEntry(NamedTuple):
    token: str
    total_count: int
    sample_presence: int


@dataclass(frozen=True)
class FrequencyTable:
    entries: Tuple[FrequencyEntry, ...] = ()

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def to_csv(self) -> str:
        lines = ["token,total_count,sample_presence"]
        lines += [f"{e.token},{e.total_count},{e.sample_presence}" for e in self.entries]
        return "\n".join(lines) + "\n"


def word_frequencies(batches: Iterable, stopwords: Optional[AbstractSet[str]] = None) -> FrequencyTable:
    """Occurrence counts and per-batch presence of every non-stopword token.

    Sorted by total count descending, ties broken alphabetically.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    totals: Counter = Counter()
    presence: Counter = Counter()
    for batch in batches:
        counts = Counter(tokenize("\n".join(batch.texts)))
        for tok in stopwords:
            counts.pop(tok, None)
        totals.update(counts)
        presence.update(counts.keys())
    entries = sorted(
        (FrequencyEntry(tok, n, presence[tok]) for tok, n in totals.items()),
        key=lambda e: (-e.total_count, e.token),
    )
    return FrequencyTable(tuple(entries))


def top_k(table: FrequencyTable, k: int) -> FrequencyTable:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return FrequencyTable(table.entries[:k])
