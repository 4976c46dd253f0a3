"""Hand-written SVG plots of work loops in the x-F plane.

Output is byte-deterministic: fixed canvas, fixed palette, fixed number
formatting.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .loops import WorkLoop

WIDTH, HEIGHT = 800, 600
LEFT, RIGHT, TOP, BOTTOM = 80, 190, 40, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22")


def _n(v: float) -> str:
    out = f"{v:.2f}"
    return "0.00" if out == "-0.00" else out


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    out = []
    v = first
    while v <= hi + 1e-12 * span:
        out.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return out


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(loops: Sequence[WorkLoop], overlays: Sequence = (), path=None,
               loop_labels: Sequence[str] | None = None,
               overlay_labels: Sequence[str] | None = None,
               title: str = "", n_overlay: int = 201) -> str:
    """Draw loops as closed outlines and each overlay profile as the curve -Fs(x).

    Returns the SVG text and writes it to ``path`` when given.
    """
    if not loops:
        raise ValueError("need at least one loop")
    loop_labels = list(loop_labels or [f"loop {i + 1}" for i in range(len(loops))])
    overlay_labels = list(overlay_labels or [f"-Fs {i + 1}" for i in range(len(overlays))])

    x_lo = min(float(l.x_grid[0]) for l in loops)
    x_hi = max(float(l.x_grid[-1]) for l in loops)
    curves = []
    for l in loops:
        xs = np.concatenate([l.x_grid, l.x_grid[::-1]])
        ys = np.concatenate([l.upper, l.lower[::-1]])
        curves.append((xs, ys))
    ov_curves = []
    for prof in overlays:
        xs = np.linspace(x_lo, x_hi, n_overlay)
        ov_curves.append((xs, -np.asarray(prof(xs), dtype=float)))

    all_y = np.concatenate([c[1] for c in curves + ov_curves])
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if y_hi - y_lo <= 0:
        pad = max(abs(y_hi), 1.0)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    if x_hi - x_lo <= 0:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    dx, dy = 0.05 * (x_hi - x_lo), 0.05 * (y_hi - y_lo)
    x_lo, x_hi, y_lo, y_hi = x_lo - dx, x_hi + dx, y_lo - dy, y_hi + dy

    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(x):
        return LEFT + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return TOP + (y_hi - y) / (y_hi - y_lo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{LEFT + pw / 2:.2f}" y="{TOP - 14}" font-size="16" '
                   f'text-anchor="middle">{_escape(title)}</text>')
    for t in _ticks(x_lo, x_hi):
        X = px(t)
        out.append(f'<line x1="{_n(X)}" y1="{TOP + ph}" x2="{_n(X)}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_n(X)}" y="{TOP + ph + 20}" font-size="12" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y_lo, y_hi):
        Y = py(t)
        out.append(f'<line x1="{LEFT - 5}" y1="{_n(Y)}" x2="{LEFT}" y2="{_n(Y)}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{_n(Y + 4)}" font-size="12" text-anchor="end">{t:.4g}</text>')
    if y_lo < 0 < y_hi:
        out.append(f'<line x1="{LEFT}" y1="{_n(py(0))}" x2="{LEFT + pw}" y2="{_n(py(0))}" '
                   'stroke="#999999" stroke-dasharray="4,3"/>')
    if x_lo < 0 < x_hi:
        out.append(f'<line x1="{_n(px(0))}" y1="{TOP}" x2="{_n(px(0))}" y2="{TOP + ph}" '
                   'stroke="#999999" stroke-dasharray="4,3"/>')
    out.append(f'<text x="{LEFT + pw / 2:.2f}" y="{HEIGHT - 15}" font-size="14" text-anchor="middle">x</text>')
    out.append(f'<text x="20" y="{TOP + ph / 2:.2f}" font-size="14" text-anchor="middle" '
               f'transform="rotate(-90 20 {TOP + ph / 2:.2f})">load</text>')

    legend = []
    for i, (xs, ys) in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_n(px(a))},{_n(py(b))}" for a, b in zip(xs, ys))
        out.append(f'<polygon points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        legend.append((color, "solid", loop_labels[i]))
    for j, (xs, ys) in enumerate(ov_curves):
        color = PALETTE[(len(curves) + j) % len(PALETTE)]
        pts = " ".join(f"{_n(px(a))},{_n(py(b))}" for a, b in zip(xs, ys))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5" '
                   'stroke-dasharray="6,3"/>')
        legend.append((color, "dash", overlay_labels[j]))

    lx = WIDTH - RIGHT + 15
    for k, (color, style, label) in enumerate(legend):
        y = TOP + 10 + 20 * k
        dash = ' stroke-dasharray="6,3"' if style == "dash" else ""
        out.append(f'<line x1="{lx}" y1="{y}" x2="{lx + 25}" y2="{y}" stroke="{color}" stroke-width="2"{dash}/>')
        out.append(f'<text x="{lx + 32}" y="{y + 4}" font-size="12">{_escape(label)}</text>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
