"""Minimal SVG line and bar charts.

Each polyline is drawn in data coordinates inside a ``<g>`` whose transform
maps data to pixels, so the ``points`` attribute is exactly the plotted data.
"""

from __future__ import annotations

from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple
from xml.sax.saxutils import escape, quoteattr

WIDTH, HEIGHT = 800, 400
MARGIN = 50
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


class Line(NamedTuple):
    label: str
    xs: Sequence[float]
    ys: Sequence[float]
    dashed: bool = False
    axis: Optional[str] = None  # lines naming the same axis share a vertical scale


def _span(values: Iterable[float]) -> Tuple[float, float]:
    values = list(values)
    lo, hi = min(values), max(values)
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    return lo, hi


def _transform(xlo, xhi, ylo, yhi) -> str:
    sx = (WIDTH - 2 * MARGIN) / (xhi - xlo)
    sy = -(HEIGHT - 2 * MARGIN) / (yhi - ylo)
    tx = MARGIN - sx * xlo
    ty = HEIGHT - MARGIN - sy * ylo
    return f"matrix({sx!r} 0 0 {sy!r} {tx!r} {ty!r})"


def _points(xs, ys) -> str:
    return " ".join(f"{float(x)!r},{float(y)!r}" for x, y in zip(xs, ys))


def line_chart(lines: Sequence[Line], title: str = "", *,
               hline: Optional[Tuple[str, float]] = None,
               bands: Sequence[Tuple[float, float, bool]] = ()) -> str:
    """Render lines over a common x range.

    Each line gets its own vertical scale unless several share an ``axis`` name;
    that is how sentiment and index levels are overlaid. ``hline`` is drawn on the
    first line's scale; ``bands`` shade x intervals (capable=True in blue).
    """
    drawn = [ln for ln in lines if len(ln.xs)]
    xlo, xhi = _span(x for ln in drawn for x in ln.xs) if drawn else (0.0, 1.0)
    spans = {}
    for ln in drawn:
        if ln.axis is not None:
            spans.setdefault(ln.axis, []).extend(ln.ys)
    spans = {k: _span(v) for k, v in spans.items()}
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    band_tf = _transform(xlo, xhi, 0.0, 1.0)
    if bands:
        out.append(f'<g class="bands" transform="{band_tf}">')
        for start, end, capable in bands:
            colour = "#cfe8ff" if capable else "#fff4c2"
            out.append(f'<rect x="{start - 0.5!r}" y="0" width="{end - start + 1.0!r}" height="1" '
                       f'fill="{colour}" data-capable="{str(capable).lower()}"/>')
        out.append("</g>")
    first_scale = None
    for i, ln in enumerate(drawn):
        ylo, yhi = spans[ln.axis] if ln.axis is not None else _span(ln.ys)
        if first_scale is None:
            first_scale = (ylo, yhi)
        colour = PALETTE[i % len(PALETTE)]
        dash = ' stroke-dasharray="6 3"' if ln.dashed else ""
        out.append(f'<g transform="{_transform(xlo, xhi, ylo, yhi)}">')
        out.append(f'<polyline data-label={quoteattr(ln.label)} fill="none" stroke="{colour}" '
                   f'stroke-width="1.5" vector-effect="non-scaling-stroke"{dash} '
                   f'points="{_points(ln.xs, ln.ys)}"/>')
        out.append("</g>")
        out.append(f'<text x="{MARGIN + 10 + 160 * i}" y="{MARGIN - 15}" fill="{colour}" '
                   f'font-size="12">{escape(ln.label)}</text>')
    if hline is not None and first_scale is not None:
        label, value = hline
        out.append(f'<g transform="{_transform(xlo, xhi, *first_scale)}">')
        out.append(f'<polyline data-label={quoteattr(label)} fill="none" stroke="black" '
                   f'stroke-width="1" vector-effect="non-scaling-stroke" stroke-dasharray="2 2" '
                   f'points="{_points([xlo, xhi], [value, value])}"/>')
        out.append("</g>")
    out.append(f'<text x="{WIDTH // 2}" y="{HEIGHT - 10}" text-anchor="middle" font-size="12">sample index</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def bar_chart(labels: Sequence[str], values: Sequence[float], title: str = "") -> str:
    """Horizontal bars, one per label, longest first as given."""
    n = max(len(labels), 1)
    row = (HEIGHT - 2 * MARGIN) / n
    top = max(values) if values else 1.0
    scale = (WIDTH - 3 * MARGIN) / (top or 1.0)
    out: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    for i, (label, value) in enumerate(zip(labels, values)):
        y = MARGIN + i * row
        out.append(f'<rect data-label={quoteattr(label)} data-value="{value!r}" x="{2 * MARGIN}" '
                   f'y="{y:.2f}" width="{value * scale:.2f}" height="{row * 0.8:.2f}" fill="{PALETTE[0]}"/>')
        out.append(f'<text x="{2 * MARGIN - 5}" y="{y + row * 0.6:.2f}" text-anchor="end" '
                   f'font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
