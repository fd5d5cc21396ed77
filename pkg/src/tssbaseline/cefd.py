"""Closed-end fund discount (CEFD) and premium (CEFP), volume-weighted across funds."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, List, Sequence

from .series import InputError, Series


@dataclass(frozen=True)
class CefdSnapshot:
    sample_index: int
    cefd: float  # percent
    cefp: float  # percent, always -cefd
    n_funds: int


def fund_discount(net_value: float, traded_value: float) -> float:
    """Discount in percent; negative means the fund trades at a premium."""
    if not net_value > 0:
        raise InputError(f"net_value must be positive, got {net_value}")
    return (net_value - traded_value) / net_value * 100.0


def weighted_cefd(records: Sequence) -> CefdSnapshot:
    """Volume-weighted mean discount of one sample's funds.

    Zero-volume funds carry no weight but still count towards ``n_funds``.
    """
    if not records:
        raise InputError("no fund records for this sample")
    indices = {r.sample_index for r in records}
    if len(indices) != 1:
        raise InputError(f"records span several samples: {sorted(indices)}")
    total_volume = sum(r.volume for r in records)
    if not total_volume > 0:
        raise InputError(f"zero total volume at sample_index {records[0].sample_index}")
    discounts = [fund_discount(r.net_value, r.traded_value) for r in records]
    value = sum(d * r.volume for d, r in zip(discounts, records)) / total_volume
    # A convex combination cannot leave the range of its inputs; clamp away rounding.
    weighted = [d for d, r in zip(discounts, records) if r.volume > 0]
    value = min(max(value, min(weighted)), max(weighted))
    return CefdSnapshot(records[0].sample_index, value, -value, len(records))


def cefd_snapshots(records: Iterable) -> List[CefdSnapshot]:
    ordered = sorted(records, key=lambda r: r.sample_index)
    out = []
    for idx, group in groupby(ordered, key=lambda r: r.sample_index):
        try:
            out.append(weighted_cefd(list(group)))
        except InputError as exc:
            raise InputError(f"sample_index {idx}: {exc}") from None
    return out


def cefp_series(records: Iterable) -> Series:
    """CEFP per sample, shaped like a sentiment series for the lag machinery."""
    return Series.from_pairs((s.sample_index, s.cefp) for s in cefd_snapshots(records))


def snapshots_csv(snapshots: Sequence[CefdSnapshot]) -> str:
    lines = ["sample_index,cefd,cefp,n_funds"]
    lines += [f"{s.sample_index},{s.cefd!r},{s.cefp!r},{s.n_funds}" for s in snapshots]
    return "\n".join(lines) + "\n"
