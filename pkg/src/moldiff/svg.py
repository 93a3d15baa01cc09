"""Minimal static SVG line and scatter plots."""

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=80, right=20, top=40, bottom=60)
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]


@dataclass
class Series:
    x: list
    y: list
    label: str = ""
    style: str = "line"  # "line" or "points"
    color: str | None = None
    dashed: bool = False


def _ticks(lo, hi, log):
    if log:
        return [10.0**e for e in range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1)
                if lo <= 10.0**e <= hi]
    span = hi - lo
    step = 10 ** math.floor(math.log10(span / 5)) if span > 0 else 1.0
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= 6:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    return [first + i * step for i in range(int((hi - first) / step + 1e-9) + 1)]


def plot(series, path, title="", xlabel="", ylabel="", logx=False, logy=False):
    """Write the series to ``path`` as a standalone SVG document."""
    pts = [
        (x, y)
        for s in series
        for x, y in zip(s.x, s.y)
        if math.isfinite(x) and math.isfinite(y) and (x > 0 or not logx) and (y > 0 or not logy)
    ]
    if not pts:
        pts = [(1.0, 1.0)]
    xs, ys = zip(*pts)
    fx = math.log10 if logx else float
    fy = math.log10 if logy else float
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if not logy:
        y_lo = min(y_lo, 0.0)
    if x_hi == x_lo:
        x_hi = x_lo * 1.1 + 1e-300 if logx else x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo * 1.1 + 1e-300 if logy else y_lo + 1.0

    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(x):
        return MARGIN["left"] + pw * (fx(x) - fx(x_lo)) / (fx(x_hi) - fx(x_lo))

    def py(y):
        return MARGIN["top"] + ph * (1 - (fy(y) - fy(y_lo)) / (fy(y_hi) - fy(y_lo)))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi, logx):
        out.append(f'<line x1="{px(t):.2f}" y1="{MARGIN["top"] + ph}" x2="{px(t):.2f}" '
                   f'y2="{MARGIN["top"] + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px(t):.2f}" y="{MARGIN["top"] + ph + 18}" '
                   f'text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y_lo, y_hi, logy):
        out.append(f'<line x1="{MARGIN["left"] - 5}" y1="{py(t):.2f}" x2="{MARGIN["left"]}" '
                   f'y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{MARGIN["left"] - 8}" y="{py(t) + 4:.2f}" '
                   f'text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    out.append(f'<text x="{MARGIN["left"] + pw / 2}" y="{HEIGHT - 15}" '
               f'text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{MARGIN["top"] + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 18 {MARGIN["top"] + ph / 2})">{escape(ylabel)}</text>')

    for i, s in enumerate(series):
        color = s.color or COLORS[i % len(COLORS)]
        coords = [
            (px(x), py(y))
            for x, y in zip(s.x, s.y)
            if math.isfinite(x) and math.isfinite(y) and (x > 0 or not logx) and (y > 0 or not logy)
        ]
        if s.style == "points":
            for cx, cy in coords:
                out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="{color}"/>')
        elif coords:
            dash = ' stroke-dasharray="6 4"' if s.dashed else ""
            poly = " ".join(f"{cx:.2f},{cy:.2f}" for cx, cy in coords)
            out.append(f'<polyline points="{poly}" fill="none" stroke="{color}" '
                       f'stroke-width="1.5"{dash}/>')
        if s.label:
            ly = MARGIN["top"] + 16 + 16 * i
            lx = MARGIN["left"] + pw - 150
            out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
            out.append(f'<text x="{lx + 26}" y="{ly}">{escape(s.label)}</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def svg_path_for(csv_path, default="plot.svg"):
    if csv_path in (None, "-"):
        return default
    base = csv_path[:-4] if csv_path.endswith(".csv") else csv_path
    return base + ".svg"
