"""Minimal deterministic SVG line plots (polylines, axes, legend).

The CSV is the artifact of record; these plots exist for quick visual
inspection only, so everything is plain polylines with fixed formatting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Series:
    x: np.ndarray
    y: np.ndarray
    color: str = "#d62728"
    dash: str = ""
    label: str = ""


@dataclass
class Panel:
    series: list[Series] = field(default_factory=list)
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _panel_svg(panel: Panel, x0: float, y0: float, w: float, h: float,
               legend: bool) -> list[str]:
    pad_l, pad_r, pad_t, pad_b = 58.0, 12.0, 22.0, 40.0
    pw, ph = w - pad_l - pad_r, h - pad_t - pad_b
    xs = np.concatenate([s.x for s in panel.series]) if panel.series else \
        np.array([0.0, 1.0])
    ys = np.concatenate([s.y for s in panel.series]) if panel.series else \
        np.array([0.0, 1.0])
    finite = np.isfinite(xs) & ~np.isnan(xs)
    x_lo, x_hi = float(np.min(xs[finite])), float(np.max(xs[finite]))
    finite_y = np.isfinite(ys)
    y_lo, y_hi = float(np.min(ys[finite_y])), float(np.max(ys[finite_y]))
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    y_pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    def px(x):
        return x0 + pad_l + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return y0 + pad_t + (y_hi - y) / (y_hi - y_lo) * ph

    out = []
    out.append(f'<rect x="{_fmt(x0 + pad_l)}" y="{_fmt(y0 + pad_t)}" '
               f'width="{_fmt(pw)}" height="{_fmt(ph)}" fill="none" '
               f'stroke="#333" stroke-width="1"/>')
    for tx in _ticks(x_lo, x_hi):
        out.append(f'<line x1="{_fmt(px(tx))}" y1="{_fmt(y0 + pad_t + ph)}" '
                   f'x2="{_fmt(px(tx))}" y2="{_fmt(y0 + pad_t + ph + 4)}" '
                   f'stroke="#333"/>')
        out.append(f'<text x="{_fmt(px(tx))}" y="{_fmt(y0 + pad_t + ph + 16)}" '
                   f'font-size="10" text-anchor="middle">{_fmt(tx)}</text>')
    for ty in _ticks(y_lo, y_hi):
        out.append(f'<line x1="{_fmt(x0 + pad_l - 4)}" y1="{_fmt(py(ty))}" '
                   f'x2="{_fmt(x0 + pad_l)}" y2="{_fmt(py(ty))}" '
                   f'stroke="#333"/>')
        out.append(f'<text x="{_fmt(x0 + pad_l - 6)}" y="{_fmt(py(ty) + 3)}" '
                   f'font-size="10" text-anchor="end">{_fmt(ty)}</text>')
    for s in panel.series:
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}"
                       for a, b in zip(s.x, s.y) if np.isfinite(b))
        dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
        out.append(f'<polyline points="{pts}" fill="none" '
                   f'stroke="{s.color}" stroke-width="1"{dash}/>')
    if panel.title:
        out.append(f'<text x="{_fmt(x0 + pad_l + pw / 2)}" '
                   f'y="{_fmt(y0 + 14)}" font-size="12" '
                   f'text-anchor="middle">{panel.title}</text>')
    if panel.xlabel:
        out.append(f'<text x="{_fmt(x0 + pad_l + pw / 2)}" '
                   f'y="{_fmt(y0 + pad_t + ph + 32)}" font-size="11" '
                   f'text-anchor="middle">{panel.xlabel}</text>')
    if panel.ylabel:
        out.append(f'<text x="{_fmt(x0 + 14)}" '
                   f'y="{_fmt(y0 + pad_t + ph / 2)}" font-size="11" '
                   f'text-anchor="middle" transform="rotate(-90 '
                   f'{_fmt(x0 + 14)} {_fmt(y0 + pad_t + ph / 2)})">'
                   f'{panel.ylabel}</text>')
    if legend:
        ly = y0 + pad_t + 8
        seen = []
        for s in panel.series:
            if not s.label or s.label in seen:
                continue
            seen.append(s.label)
            lx = x0 + pad_l + 10
            dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
            out.append(f'<line x1="{_fmt(lx)}" y1="{_fmt(ly)}" '
                       f'x2="{_fmt(lx + 22)}" y2="{_fmt(ly)}" '
                       f'stroke="{s.color}" stroke-width="2"{dash}/>')
            out.append(f'<text x="{_fmt(lx + 27)}" y="{_fmt(ly + 3.5)}" '
                       f'font-size="10">{s.label}</text>')
            ly += 14
    return out


def render(panels: list[Panel], path: str, panel_size=(460, 330),
           columns: int = 2):
    """Write a grid of panels to an SVG file."""
    n = len(panels)
    cols = min(columns, n)
    rows = (n + cols - 1) // cols
    w, h = panel_size
    width, height = cols * w, rows * h
    body = [f'<svg xmlns="http://www.w3.org/2000/svg" '
            f'width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">',
            f'<rect width="{width}" height="{height}" fill="white"/>']
    for i, panel in enumerate(panels):
        r, c = divmod(i, cols)
        body.extend(_panel_svg(panel, c * w, r * h, w, h, legend=True))
    body.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(body) + "\n")
