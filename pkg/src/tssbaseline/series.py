"""Indexed time series on the shared sample grid, plus per-step direction labels."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Tuple


class InputError(ValueError):
    """Bad user input: malformed files, violated preconditions, empty overlaps."""


class Direction(enum.Enum):
    UP = "Up"
    DOWN = "Down"
    FLAT = "Flat"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Series:
    """Ordered ``(sample_index, value)`` pairs.

    Missing samples are simply absent from ``index``; nothing is interpolated.
    Used for TSS, CEFP and price series alike.
    """

    index: Tuple[int, ...] = ()
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(int(i) for i in self.index))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.index) != len(self.values):
            raise InputError("index and values differ in length")
        for a, b in zip(self.index, self.index[1:]):
            if b <= a:
                raise InputError(f"sample_index not strictly increasing at {b}")
        for i, v in zip(self.index, self.values):
            if not math.isfinite(v):
                raise InputError(f"non-finite value at sample_index {i}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, float]]) -> "Series":
        pairs = list(pairs)
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float]) -> "Series":
        return cls.from_pairs(sorted(mapping.items()))

    def __len__(self) -> int:
        return len(self.index)

    def __iter__(self) -> Iterator[Tuple[int, float]]:
        return iter(zip(self.index, self.values))

    @cached_property
    def _lookup(self) -> dict:
        return dict(zip(self.index, self.values))

    def to_dict(self) -> dict:
        return dict(self._lookup)

    def get(self, t: int) -> Optional[float]:
        return self._lookup.get(t)

    def between(self, lo: Optional[int] = None, hi: Optional[int] = None) -> "Series":
        """Samples with ``lo <= t <= hi`` (either bound may be omitted)."""
        return Series.from_pairs(
            (t, v) for t, v in self
            if (lo is None or t >= lo) and (hi is None or t <= hi)
        )


def directions(price: Series) -> Series:
    """Per-step direction of a price series.

    The entry at ``t`` describes the step from ``t - 1`` to ``t`` and exists only
    when both samples are present. Values are +1 (Up), -1 (Down) or 0 (Flat);
    see :func:`direction_of` to map them back to :class:`Direction`.
    """
    if len(price) < 2:
        raise InputError("direction needs at least two price samples")
    out = []
    for (t0, p0), (t1, p1) in zip(price, list(price)[1:]):
        if t1 == t0 + 1:
            out.append((t1, float((p1 > p0) - (p1 < p0))))
    return Series.from_pairs(out)


def direction_of(step: float) -> Direction:
    if step > 0:
        return Direction.UP
    if step < 0:
        return Direction.DOWN
    return Direction.FLAT
