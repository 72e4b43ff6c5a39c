"""Tiny deterministic SVG emitters for line plots and bar charts."""

from __future__ import annotations

from html import escape

import numpy as np

W, H = 480, 320
PAD_L, PAD_R, PAD_T, PAD_B = 56, 16, 28, 40
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _frame(title, xlabel, ylabel, x0, x1, y0, y1, xticks=True):
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2}" y="18" text-anchor="middle" font-family="sans-serif" font-size="13">{escape(title)}</text>',
        f'<line x1="{PAD_L}" y1="{H - PAD_B}" x2="{W - PAD_R}" y2="{H - PAD_B}" stroke="black"/>',
        f'<line x1="{PAD_L}" y1="{PAD_T}" x2="{PAD_L}" y2="{H - PAD_B}" stroke="black"/>',
        f'<text x="{W / 2}" y="{H - 8}" text-anchor="middle" font-family="sans-serif" font-size="11">{escape(xlabel)}</text>',
        f'<text x="14" y="{H / 2}" text-anchor="middle" font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 14 {H / 2})">{escape(ylabel)}</text>',
    ]
    for v, anchor in ((x0, "start"), (x1, "end")) if xticks else ():
        x = PAD_L if anchor == "start" else W - PAD_R
        parts.append(f'<text x="{x}" y="{H - PAD_B + 14}" text-anchor="{anchor}" font-family="sans-serif" font-size="10">{v:.3g}</text>')
    for v, y in ((y0, H - PAD_B), (y1, PAD_T)):
        parts.append(f'<text x="{PAD_L - 4}" y="{y + 3}" text-anchor="end" font-family="sans-serif" font-size="10">{v:.3g}</text>')
    return parts


def _scale(v, lo, hi, a, b):
    span = hi - lo if hi > lo else 1.0
    return a + (v - lo) / span * (b - a)


def line_plot(series: dict, title="", xlabel="", ylabel="") -> str:
    """``series`` maps a label to ``(x, y)`` arrays; NaN points are dropped."""
    xs = np.concatenate([np.asarray(x, float) for x, _ in series.values()])
    ys = np.concatenate([np.asarray(y, float) for _, y in series.values()])
    ys = ys[np.isfinite(ys)]
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = (float(ys.min()), float(ys.max())) if ys.size else (0.0, 1.0)
    parts = _frame(title, xlabel, ylabel, x0, x1, y0, y1)
    for i, (name, (x, y)) in enumerate(series.items()):
        x, y = np.asarray(x, float), np.asarray(y, float)
        ok = np.isfinite(y)
        pts = " ".join(
            f"{_fmt(_scale(a, x0, x1, PAD_L, W - PAD_R))},{_fmt(_scale(b, y0, y1, H - PAD_B, PAD_T))}"
            for a, b in zip(x[ok], y[ok])
        )
        color = PALETTE[i % len(PALETTE)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        parts.append(f'<text x="{W - PAD_R - 4}" y="{PAD_T + 14 * (i + 1)}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11" fill="{color}">{escape(name)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def bar_chart(groups: dict, categories, title="", ylabel="") -> str:
    """Grouped bars: ``groups`` maps a series label to one value per category."""
    cats = list(categories)
    vals = np.array([list(v) for v in groups.values()], dtype=float)
    y1 = max(float(np.nanmax(vals)), 1e-12)
    parts = _frame(title, "", ylabel, 0, len(cats), 0.0, y1, xticks=False)
    slot = (W - PAD_L - PAD_R) / len(cats)
    bw = slot * 0.8 / len(groups)
    for gi, (name, row) in enumerate(groups.items()):
        color = PALETTE[gi % len(PALETTE)]
        for ci, v in enumerate(row):
            h = _scale(v, 0.0, y1, 0, H - PAD_T - PAD_B)
            x = PAD_L + ci * slot + slot * 0.1 + gi * bw
            parts.append(f'<rect x="{_fmt(x)}" y="{_fmt(H - PAD_B - h)}" width="{_fmt(bw)}" height="{_fmt(h)}" fill="{color}"/>')
        parts.append(f'<text x="{W - PAD_R - 4}" y="{PAD_T + 14 * (gi + 1)}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11" fill="{color}">{escape(name)}</text>')
    for ci, c in enumerate(cats):
        parts.append(f'<text x="{_fmt(PAD_L + (ci + 0.5) * slot)}" y="{H - PAD_B + 14}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="10">{escape(str(c))}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
