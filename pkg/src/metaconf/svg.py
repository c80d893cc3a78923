"""Bare-bones SVG line plots (polylines, optional log axes)."""

from __future__ import annotations

import math
from typing import Sequence

WIDTH, HEIGHT, PAD = 640, 420, 56
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, log: bool) -> list:
    if log:
        return [10.0 ** k for k in range(math.ceil(lo - 1e-9), math.floor(hi + 1e-9) + 1)]
    step = 10 ** math.floor(math.log10((hi - lo) or 1.0))
    if (hi - lo) / step < 4:
        step /= 2
    k0 = math.ceil(lo / step)
    return [k * step for k in range(k0, int(math.floor(hi / step)) + 1)]


def line_plot(series: Sequence[tuple], title: str = "", xlabel: str = "", ylabel: str = "",
              logx: bool = False, logy: bool = False) -> str:
    """``series`` is a list of ``(label, xs, ys)``; non-finite or non-positive (on log axes) points are dropped."""
    def tx(v):
        return math.log10(v) if logx else v

    def ty(v):
        return math.log10(v) if logy else v

    clean = []
    for label, xs, ys in series:
        pts = [(tx(x), ty(y)) for x, y in zip(xs, ys)
               if math.isfinite(x) and math.isfinite(y) and (not logx or x > 0) and (not logy or y > 0)]
        clean.append((label, pts))
    allx = [p[0] for _, pts in clean for p in pts] or [0.0, 1.0]
    ally = [p[1] for _, pts in clean for p in pts] or [0.0, 1.0]
    x0, x1 = min(allx), max(allx)
    y0, y1 = min(ally), max(ally)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def sx(v):
        return PAD + (v - x0) / (x1 - x0) * (WIDTH - 2 * PAD)

    def sy(v):
        return HEIGHT - PAD - (v - y0) / (y1 - y0) * (HEIGHT - 2 * PAD)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<rect x="{PAD}" y="{PAD}" width="{WIDTH - 2 * PAD}" height="{HEIGHT - 2 * PAD}" '
           'fill="none" stroke="black"/>']
    for v in _ticks(x0, x1, logx):
        px = sx(math.log10(v) if logx else v)
        out.append(f'<line x1="{_fmt(px)}" y1="{HEIGHT - PAD}" x2="{_fmt(px)}" y2="{HEIGHT - PAD + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(px)}" y="{HEIGHT - PAD + 18}" text-anchor="middle">{v:g}</text>')
    for v in _ticks(y0, y1, logy):
        py = sy(math.log10(v) if logy else v)
        out.append(f'<line x1="{PAD - 5}" y1="{_fmt(py)}" x2="{PAD}" y2="{_fmt(py)}" stroke="black"/>')
        out.append(f'<text x="{PAD - 8}" y="{_fmt(py + 4)}" text-anchor="end">{v:g}</text>')
    for k, (label, pts) in enumerate(clean):
        color = COLORS[k % len(COLORS)]
        if pts:
            path = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in pts)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
        ly = PAD + 16 + 16 * k
        out.append(f'<text x="{WIDTH - PAD - 8}" y="{ly}" text-anchor="end" fill="{color}">{label}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{PAD - 20}" text-anchor="middle" font-size="14">{title}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="16" y="{HEIGHT / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {HEIGHT / 2})">{ylabel}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
