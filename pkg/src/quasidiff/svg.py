"""Bare-bones SVG line plots: axes, tick labels, one polyline per series."""

from __future__ import annotations

from pathlib import Path

import numpy as np

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    return np.linspace(lo, hi, n)


def line_plot(path, series, title="", xlabel="", ylabel="", width=640, height=420):
    """series: list of (label, x, y).  Writes a deterministic SVG document."""
    margin_l, margin_r, margin_t, margin_b = 70, 20, 30, 50
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if y1 == y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    if x1 == x0:
        x1 = x0 + 1.0
    pw, ph = width - margin_l - margin_r, height - margin_t - margin_b

    def px(x):
        return margin_l + (x - x0) / (x1 - x0) * pw

    def py(y):
        return margin_t + (y1 - y) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="14">{title}</text>',
           f'<line x1="{margin_l}" y1="{margin_t + ph}" x2="{margin_l + pw}" y2="{margin_t + ph}" stroke="black"/>',
           f'<line x1="{margin_l}" y1="{margin_t}" x2="{margin_l}" y2="{margin_t + ph}" stroke="black"/>']
    for xt in _ticks(x0, x1):
        out.append(f'<text x="{px(xt):.1f}" y="{margin_t + ph + 16}" text-anchor="middle" '
                   f'font-size="10">{xt:.3g}</text>')
    for yt in _ticks(y0, y1):
        out.append(f'<text x="{margin_l - 6}" y="{py(yt) + 3:.1f}" text-anchor="end" '
                   f'font-size="10">{yt:.3g}</text>')
    if y0 < 0 < y1:
        out.append(f'<line x1="{margin_l}" y1="{py(0):.2f}" x2="{margin_l + pw}" y2="{py(0):.2f}" '
                   f'stroke="#999" stroke-dasharray="4 3"/>')
    out.append(f'<text x="{margin_l + pw / 2:.1f}" y="{height - 10}" text-anchor="middle" '
               f'font-size="12">{xlabel}</text>')
    out.append(f'<text x="14" y="{margin_t + ph / 2:.1f}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 14 {margin_t + ph / 2:.1f})">{ylabel}</text>')
    for i, (label, x, y) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(np.asarray(x, float), np.asarray(y, float)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>')
        out.append(f'<text x="{margin_l + pw - 4}" y="{margin_t + 14 + 14 * i}" text-anchor="end" '
                   f'font-size="11" fill="{color}">{label}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
