"""CSV ingestion for tweets, prices and fund records, and a seeded synthetic generator."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .lexicon import Lexicon
from .series import InputError, Series

MAX_TWEET_BYTES = 4096

TWEETS_HEADER = ["sample_ts", "text"]
PRICES_HEADER = ["sample_ts", "close"]
FUNDS_HEADER = ["sample_ts", "fund_id", "net_value", "traded_value", "volume"]


@dataclass(frozen=True)
class SampleGrid:
    """Maps trading-slot indices to UTC timestamps.

    Slot 0 starts at ``start``; each trading day holds ``slots_per_day`` slots of
    ``slot_hours`` hours beginning at the same time of day as ``start``.
    """

    start: datetime = datetime(2017, 6, 14, 8, tzinfo=timezone.utc)
    slot_hours: int = 2
    slots_per_day: int = 5
    skip_weekends: bool = True

    def __post_init__(self):
        start = self.start
        if start.tzinfo is None:
            start = start.replace(tzinfo=timezone.utc)
        object.__setattr__(self, "start", start.astimezone(timezone.utc))
        if self.slot_hours <= 0 or self.slots_per_day <= 0:
            raise InputError("slot_hours and slots_per_day must be positive")
        if self.slot_hours * self.slots_per_day > 24:
            raise InputError("slots of one day overflow 24 hours")
        if self.skip_weekends and self.start.weekday() >= 5:
            raise InputError("grid start falls on a weekend")

    def _is_trading_day(self, day) -> bool:
        return not (self.skip_weekends and day.weekday() >= 5)

    def _day_offset(self, day) -> int:
        """Number of trading days from the start day to ``day`` (may be negative)."""
        start_day = self.start.date()
        if not self.skip_weekends:
            return (day - start_day).days
        sign = 1 if day >= start_day else -1
        lo, hi = sorted((start_day, day))
        full_weeks, rem = divmod((hi - lo).days, 7)
        count = full_weeks * 5
        d = lo
        for _ in range(rem):
            if d.weekday() < 5:
                count += 1
            d += timedelta(days=1)
        return sign * count

    def timestamp(self, sample_index: int) -> datetime:
        if sample_index < 0:
            raise InputError(f"negative sample_index {sample_index}")
        day_number, slot = divmod(sample_index, self.slots_per_day)
        day = self.start.date()
        while day_number > 0 or not self._is_trading_day(day):
            if self._is_trading_day(day):
                day_number -= 1
            day += timedelta(days=1)
        base = datetime.combine(day, self.start.timetz())
        return base + timedelta(hours=slot * self.slot_hours)

    def index_of(self, ts: datetime) -> int:
        """Slot holding ``ts``; timestamps between slot starts floor to the earlier slot."""
        if ts.tzinfo is None:
            ts = ts.replace(tzinfo=timezone.utc)
        ts = ts.astimezone(timezone.utc)
        if ts < self.start:
            raise InputError(f"timestamp {ts.isoformat()} precedes the sample grid")
        day = ts.date()
        if not self._is_trading_day(day):
            raise InputError(f"timestamp {ts.isoformat()} falls on a weekend")
        day_open = datetime.combine(day, self.start.timetz())
        offset = ts - day_open
        slot = math.floor(offset / timedelta(hours=self.slot_hours)) if offset >= timedelta(0) else -1
        if not 0 <= slot < self.slots_per_day:
            raise InputError(f"timestamp {ts.isoformat()} is outside the trading slots")
        return self._day_offset(day) * self.slots_per_day + slot


def parse_timestamp(text: str) -> datetime:
    text = text.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class Tweet:
    sample_index: int
    text: str

    def __post_init__(self):
        if self.sample_index < 0:
            raise InputError("sample_index must be nonnegative")
        if len(self.text.encode("utf-8")) > MAX_TWEET_BYTES:
            raise InputError(f"tweet longer than {MAX_TWEET_BYTES} bytes")
        if "\x00" in self.text:
            raise InputError("tweet contains a NUL character")


@dataclass(frozen=True)
class TweetBatch:
    sample_index: int
    texts: Tuple[str, ...] = ()

    def __len__(self):
        return len(self.texts)


@dataclass(frozen=True)
class FundRecord:
    sample_index: int
    fund_id: str
    net_value: float
    traded_value: float
    volume: float

    def __post_init__(self):
        if not self.net_value > 0:
            raise InputError(f"fund {self.fund_id}: net_value must be positive")
        if not self.volume >= 0:
            raise InputError(f"fund {self.fund_id}: volume must be nonnegative")


def _rows(path, header: Sequence[str]):
    """Yield ``(line_number, row)`` for each data row after checking the header."""
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            first = next(reader, None)
            if first is None:
                return
            if [h.strip() for h in first] != list(header):
                raise InputError(f"{path}:1: expected header {','.join(header)}")
            for row in reader:
                if not row:
                    continue
                if len(row) != len(header):
                    raise InputError(f"{path}:{reader.line_num}: expected {len(header)} fields, got {len(row)}")
                yield reader.line_num, row
        except csv.Error as exc:
            raise InputError(f"{path}:{reader.line_num}: {exc}") from None


def _number(path, lineno: int, name: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise InputError(f"{path}:{lineno}: {name} is not numeric: {text!r}") from None
    if not math.isfinite(value):
        raise InputError(f"{path}:{lineno}: {name} is not finite: {text!r}")
    return value


def _slot(path, lineno: int, grid: SampleGrid, text: str) -> int:
    try:
        ts = parse_timestamp(text)
    except ValueError:
        raise InputError(f"{path}:{lineno}: bad timestamp {text!r}") from None
    try:
        return grid.index_of(ts)
    except InputError as exc:
        raise InputError(f"{path}:{lineno}: {exc}") from None


def read_tweets(path, grid: SampleGrid = SampleGrid()) -> List[TweetBatch]:
    """Group tweets by slot. Every slot from 0 to the last one seen gets a batch."""
    groups: Dict[int, List[str]] = {}
    for lineno, (ts, text) in _rows(path, TWEETS_HEADER):
        idx = _slot(path, lineno, grid, ts)
        try:
            Tweet(idx, text)
        except InputError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
        groups.setdefault(idx, []).append(text)
    if not groups:
        return []
    return [TweetBatch(i, tuple(groups.get(i, ()))) for i in range(max(groups) + 1)]


def read_prices(path, grid: SampleGrid = SampleGrid()) -> Series:
    seen: Dict[int, float] = {}
    for lineno, (ts, close) in _rows(path, PRICES_HEADER):
        idx = _slot(path, lineno, grid, ts)
        if idx in seen:
            raise InputError(f"{path}:{lineno}: duplicate sample_index {idx}")
        seen[idx] = _number(path, lineno, "close", close)
    return Series.from_mapping(seen)


def read_funds(path, grid: SampleGrid = SampleGrid()) -> List[FundRecord]:
    records = []
    seen = set()
    for lineno, (ts, fund_id, nav, traded, volume) in _rows(path, FUNDS_HEADER):
        idx = _slot(path, lineno, grid, ts)
        key = (idx, fund_id)
        if key in seen:
            raise InputError(f"{path}:{lineno}: duplicate fund {fund_id!r} at sample_index {idx}")
        seen.add(key)
        try:
            records.append(FundRecord(
                idx, fund_id,
                _number(path, lineno, "net_value", nav),
                _number(path, lineno, "traded_value", traded),
                _number(path, lineno, "volume", volume),
            ))
        except InputError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
    records.sort(key=lambda r: r.sample_index)
    return records


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    # The minimal dialect leaves a bare carriage return unquoted, which a reader then drops.
    quoted = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_ALL)
    writer.writerow(header)
    for row in rows:
        (quoted if any("\r" in field for field in row) else writer).writerow(row)
    return buf.getvalue()


def tweets_csv(batches: Sequence[TweetBatch], grid: SampleGrid = SampleGrid()) -> str:
    rows = []
    for b in batches:
        if b.texts:
            ts = format_timestamp(grid.timestamp(b.sample_index))
            rows.extend((ts, text) for text in b.texts)
    return _csv_text(TWEETS_HEADER, rows)


def prices_csv(series: Series, grid: SampleGrid = SampleGrid()) -> str:
    return _csv_text(PRICES_HEADER, (
        (format_timestamp(grid.timestamp(t)), repr(v)) for t, v in series
    ))


def funds_csv(records: Sequence[FundRecord], grid: SampleGrid = SampleGrid()) -> str:
    return _csv_text(FUNDS_HEADER, (
        (format_timestamp(grid.timestamp(r.sample_index)), r.fund_id,
         repr(r.net_value), repr(r.traded_value), repr(r.volume))
        for r in records
    ))


@dataclass(frozen=True)
class SyntheticConfig:
    """Planted-lag dataset parameters.

    ``noise_sigma`` is in units of the per-step price move, which is exactly 1
    before noise is added.
    """

    n_samples: int = 101
    tweets_per_sample: int = 5000
    planted_lag: int = 15
    noise_sigma: float = 0.0
    seed: int = 0
    tss_level: float = 0.15
    tss_spread: float = 0.1
    base_price: float = 7400.0

    def __post_init__(self):
        if self.n_samples <= abs(self.planted_lag) + 2:
            raise InputError("n_samples must exceed |planted_lag| + 2")
        if self.tweets_per_sample < 1:
            raise InputError("tweets_per_sample must be positive")
        if not self.noise_sigma >= 0:
            raise InputError("noise_sigma must be nonnegative")


_FILLER = (
    "ftse", "market", "stocks", "shares", "london", "index", "today", "trading",
    "investors", "pound", "sterling", "brexit", "bank", "oil", "price", "week",
    "news", "traders", "fund", "economy", "trump", "election", "uk", "earnings",
    "morning", "afternoon", "session", "chart", "watch", "update",
)
_DECOR = ("", "", "", " http://t.co/{}", " @{}", " #{}")
_POOL_SIZE = 256
_MAX_TWEET_SCORE = 3


def _text_pool(rng: np.random.Generator, lexicon: Lexicon, score: int, fillers) -> List[str]:
    pos = sorted(lexicon.positive)
    neg = sorted(lexicon.negative)
    pool = []
    for _ in range(_POOL_SIZE):
        n_pairs = int(rng.integers(0, 2))
        words = [pos[int(rng.integers(len(pos)))] for _ in range(max(score, 0) + n_pairs)]
        words += [neg[int(rng.integers(len(neg)))] for _ in range(max(-score, 0) + n_pairs)]
        words += [fillers[int(rng.integers(len(fillers)))] for _ in range(int(rng.integers(3, 9)))]
        order = rng.permutation(len(words))
        text = " ".join(words[i] for i in order)
        decor = _DECOR[int(rng.integers(len(_DECOR)))]
        if decor:
            text += decor.format(fillers[int(rng.integers(len(fillers)))])
        pool.append(text)
    return pool


def _tweet_scores(rng: np.random.Generator, n: int, total: int) -> np.ndarray:
    """``n`` integer scores in [-3, 3] summing to ``total``."""
    scores = rng.choice(np.array([-1, 0, 1]), size=n, p=[0.2, 0.55, 0.25])
    diff = total - int(scores.sum())
    while diff:
        step = 1 if diff > 0 else -1
        movable = np.flatnonzero(scores * step < _MAX_TWEET_SCORE)
        pick = rng.choice(movable, size=min(abs(diff), movable.size), replace=False)
        scores[pick] += step
        diff -= step * pick.size
    return scores


def generate_synthetic(cfg: SyntheticConfig, lexicon: Lexicon) -> Tuple[List[TweetBatch], Series]:
    """Tweets and prices whose step directions follow the lagged sentiment signal.

    A latent AR(1) signal is drawn, rounded to multiples of 1/tweets_per_sample,
    and tweet texts are composed so each batch's TSS equals it exactly. The price
    step ending at ``t`` is the sign of ``signal[t - planted_lag] - median``.
    Uses numpy's PCG64 generator seeded with ``cfg.seed``.
    """
    if not lexicon.positive or not lexicon.negative:
        raise InputError("lexicon needs both positive and negative words")
    rng = np.random.default_rng(cfg.seed)
    n, lag, per = cfg.n_samples, cfg.planted_lag, cfg.tweets_per_sample

    # Signal covers sample indices -|lag| .. n-1+|lag| so every price step has a driver.
    pad = abs(lag)
    raw = np.empty(n + 2 * pad)
    raw[0] = rng.standard_normal()
    innov = rng.standard_normal(raw.size - 1) * math.sqrt(1 - 0.5 ** 2)
    for i in range(1, raw.size):
        raw[i] = 0.5 * raw[i - 1] + innov[i - 1]
    totals = np.rint((cfg.tss_level + cfg.tss_spread * raw) * per).astype(np.int64)
    totals = np.clip(totals, -per, per)
    signal = totals / per
    visible = signal[pad:pad + n]
    median = float(np.median(visible))

    steps = np.sign(signal[pad - lag:pad - lag + n] - median)
    steps[0] = 0.0
    noise = rng.standard_normal(n) * cfg.noise_sigma if cfg.noise_sigma > 0 else np.zeros(n)
    prices = cfg.base_price + np.cumsum(steps) + noise

    fillers = [w for w in _FILLER if w not in lexicon.weights]
    pools = {s: _text_pool(rng, lexicon, s, fillers) for s in range(-_MAX_TWEET_SCORE, _MAX_TWEET_SCORE + 1)}
    batches = []
    for t in range(n):
        scores = _tweet_scores(rng, per, int(totals[pad + t]))
        picks = rng.integers(_POOL_SIZE, size=per)
        texts = tuple(pools[int(s)][int(k)] for s, k in zip(scores, picks))
        batches.append(TweetBatch(t, texts))
    price = Series(tuple(range(n)), tuple(float(p) for p in prices))
    return batches, price
