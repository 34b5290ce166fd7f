"""Minimal deterministic SVG output: semi-log convergence curves and the
solution profile with node-value dots.

Hand-rolled on purpose: the only rendering needs are error-vs-degree
curves on a log axis and a piecewise solution plot, and byte-identical
output for identical inputs is a hard requirement that plotting libraries
do not promise.
"""

from __future__ import annotations

import math

WIDTH = 640
HEIGHT = 440
MARGIN_L = 70
MARGIN_R = 20
MARGIN_T = 40
MARGIN_B = 50

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def _fmt(v: float) -> str:
    return f"{v:.3f}"


class _Canvas:
    def __init__(self, title: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH // 2}" y="22" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>',
        ]

    def line(self, x1, y1, x2, y2, color="#000000", width=1.0):
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )

    def polyline(self, pts, color):
        joined = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        self.parts.append(
            f'<polyline points="{joined}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )

    def circle(self, x, y, r, color):
        self.parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{color}"/>')

    def text(self, x, y, s, size=12, anchor="middle", color="#000000"):
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" text-anchor="{anchor}" '
            f'font-family="sans-serif" font-size="{size}" fill="{color}">{s}</text>'
        )

    def render(self) -> str:
        return "\n".join(self.parts) + "\n</svg>\n"


class _Axes:
    """Maps data coordinates to pixel coordinates inside the plot frame."""

    def __init__(self, xmin, xmax, ymin, ymax):
        if xmax <= xmin:
            xmax = xmin + 1.0
        if ymax <= ymin:
            ymax = ymin + 1.0
        self.xmin, self.xmax, self.ymin, self.ymax = xmin, xmax, ymin, ymax

    def px(self, x):
        frac = (x - self.xmin) / (self.xmax - self.xmin)
        return MARGIN_L + frac * (WIDTH - MARGIN_L - MARGIN_R)

    def py(self, y):
        frac = (y - self.ymin) / (self.ymax - self.ymin)
        return HEIGHT - MARGIN_B - frac * (HEIGHT - MARGIN_T - MARGIN_B)


def _frame(canvas: _Canvas, ax: _Axes, xlabel: str, ylabel: str, xticks, yticks, ylog: bool):
    x0, x1 = MARGIN_L, WIDTH - MARGIN_R
    y0, y1 = MARGIN_T, HEIGHT - MARGIN_B
    canvas.line(x0, y1, x1, y1)
    canvas.line(x0, y0, x0, y1)
    for xt in xticks:
        px = ax.px(xt)
        canvas.line(px, y1, px, y1 + 5)
        canvas.text(px, y1 + 18, f"{xt:g}", size=11)
    for yt in yticks:
        py = ax.py(yt)
        canvas.line(x0 - 5, py, x0, py)
        label = f"1e{yt:g}" if ylog else f"{yt:g}"
        canvas.text(x0 - 8, py + 4, label, size=11, anchor="end")
    canvas.text((x0 + x1) / 2, HEIGHT - 12, xlabel, size=12)
    canvas.text(16, (y0 + y1) / 2, ylabel, size=12, anchor="middle")


def semilog_plot(curves, title: str, xlabel: str, ylabel: str) -> str:
    """curves: list of (label, xs, ys) with ys > 0 plotted on a log10 axis."""
    canvas = _Canvas(title)
    all_x = [x for _, xs, _ in curves for x in xs]
    all_logy = [math.log10(y) for _, _, ys in curves for y in ys if y > 0]
    if not all_x or not all_logy:
        return canvas.render()
    ax = _Axes(min(all_x), max(all_x), math.floor(min(all_logy)), math.ceil(max(all_logy)))
    xticks = sorted(set(int(x) for x in all_x))
    yticks = list(range(int(ax.ymin), int(ax.ymax) + 1))
    _frame(canvas, ax, xlabel, ylabel, xticks, yticks, ylog=True)
    for i, (label, xs, ys) in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        pts = [(ax.px(x), ax.py(math.log10(y))) for x, y in zip(xs, ys) if y > 0]
        canvas.polyline(pts, color)
        for x, y in pts:
            canvas.circle(x, y, 2.5, color)
        canvas.text(WIDTH - MARGIN_R - 8, MARGIN_T + 16 + 16 * i, label, size=11,
                    anchor="end", color=color)
    return canvas.render()


def solution_plot(segments, nodes, title: str) -> str:
    """segments: list of (xs, ys) per element; nodes: (x, value) dots."""
    canvas = _Canvas(title)
    all_x = [x for xs, _ in segments for x in xs] + [x for x, _ in nodes]
    all_y = [y for _, ys in segments for y in ys] + [y for _, y in nodes]
    if not all_x:
        return canvas.render()
    pad = 0.05 * (max(all_y) - min(all_y) or 1.0)
    ax = _Axes(min(all_x), max(all_x), min(all_y) - pad, max(all_y) + pad)
    xticks = [round(min(all_x) + i * (max(all_x) - min(all_x)) / 5, 2) for i in range(6)]
    yspan = ax.ymax - ax.ymin
    yticks = [round(ax.ymin + i * yspan / 5, 3) for i in range(6)]
    _frame(canvas, ax, "x", "u", xticks, yticks, ylog=False)
    for xs, ys in segments:
        canvas.polyline([(ax.px(x), ax.py(y)) for x, y in zip(xs, ys)], PALETTE[0])
    for x, y in nodes:
        canvas.circle(ax.px(x), ax.py(y), 3.0, PALETTE[1])
    return canvas.render()
