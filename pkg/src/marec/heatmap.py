"""SVG heatmap of grid-experiment MSEs over the (psi1, psi2) plane."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .montecarlo import GridResult

METRICS = ("durbin", "restricted", "ratio")
NEUTRAL = "#ffffff"

# sequential ramp (dark blue -> yellow), interpolated linearly in RGB
_SEQ = [(0x30, 0x12, 0x3b), (0x28, 0x7d, 0x8e), (0x5e, 0xc9, 0x62), (0xfd, 0xe7, 0x25)]
_NEG = (0x21, 0x66, 0xac)  # ratio < 1: restricted better
_POS = (0xb2, 0x18, 0x2b)  # ratio > 1: durbin better

SIZE = 560
MARGIN = 60
PLOT = SIZE - 2 * MARGIN


def _hex(rgb) -> str:
    return "#%02x%02x%02x" % tuple(int(round(c)) for c in rgb)


def _lerp(a, b, t):
    return tuple(x + (y - x) * t for x, y in zip(a, b))


def sequential_color(t: float) -> str:
    t = min(max(t, 0.0), 1.0) * (len(_SEQ) - 1)
    i = min(int(t), len(_SEQ) - 2)
    return _hex(_lerp(_SEQ[i], _SEQ[i + 1], t - i))


def diverging_color(ratio: float, span: float) -> str:
    """White at ratio 1, saturating at ratio = 2**(+-span)."""
    if ratio == 1.0:
        return NEUTRAL
    x = math.log2(ratio) / span if span > 0 else 0.0
    x = min(max(x, -1.0), 1.0)
    return _hex(_lerp((255, 255, 255), _POS if x > 0 else _NEG, abs(x)))


def metric_values(result: GridResult, metric: str) -> dict:
    """(row, col) -> value for records where the metric is defined."""
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}")
    out = {}
    for rec in result.records:
        d = rec.stats["durbin"].mse
        r = rec.stats["restricted"].mse
        if metric == "durbin":
            v = d
        elif metric == "restricted":
            v = r
        else:
            v = None if d is None or r is None or d <= 0 else r / d
        if v is not None:
            out[(rec.row, rec.col)] = (rec.psi1, rec.psi2, v)
    return out


def render_svg(result: GridResult, metric: str) -> str:
    spec = result.spec
    (x0, x1), (y0, y1) = spec.psi1_range, spec.psi2_range
    n = spec.points_per_axis
    dx = (x1 - x0) / (n - 1) if x1 > x0 else 1.0
    dy = (y1 - y0) / (n - 1) if y1 > y0 else 1.0
    # plotted extent covers half a cell beyond the outer grid points
    lo_x, hi_x = x0 - dx / 2, x1 + dx / 2
    lo_y, hi_y = y0 - dy / 2, y1 + dy / 2

    def px(x):
        return MARGIN + (x - lo_x) / (hi_x - lo_x) * PLOT

    def py(y):
        return MARGIN + (hi_y - y) / (hi_y - lo_y) * PLOT

    values = metric_values(result, metric)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>',
        f"<title>{escape(metric)} MSE</title>",
    ]

    if values:
        vals = [v for _, _, v in values.values()]
        if metric == "ratio":
            span = max(abs(math.log2(v)) for v in vals if v > 0) if any(v > 0 for v in vals) else 0.0
            color = lambda v: diverging_color(v, span) if v > 0 else _hex(_NEG)  # noqa: E731
        else:
            logs = [math.log10(v) for v in vals if v > 0]
            lo, hi = (min(logs), max(logs)) if logs else (0.0, 0.0)
            color = lambda v: sequential_color(  # noqa: E731
                0.0 if v <= 0 or hi == lo else (math.log10(v) - lo) / (hi - lo)
            )
        w = PLOT * dx / (hi_x - lo_x)
        h = PLOT * dy / (hi_y - lo_y)
        for (row, col), (p1, p2, v) in sorted(values.items()):
            parts.append(
                f'<rect class="cell" data-row="{row}" data-col="{col}" data-value="{v!r}" '
                f'x="{px(p1) - w / 2:.3f}" y="{py(p2) - h / 2:.3f}" width="{w:.3f}" '
                f'height="{h:.3f}" fill="{color(v)}"/>'
            )

    # frame and ticks
    parts.append(
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{PLOT}" height="{PLOT}" fill="none" stroke="#000"/>'
    )
    for i in range(5):
        tx = x0 + (x1 - x0) * i / 4
        ty = y0 + (y1 - y0) * i / 4
        parts.append(f'<text x="{px(tx):.1f}" y="{SIZE - MARGIN + 18}" font-size="11" '
                     f'text-anchor="middle">{tx:.2f}</text>')
        parts.append(f'<text x="{MARGIN - 6}" y="{py(ty) + 4:.1f}" font-size="11" '
                     f'text-anchor="end">{ty:.2f}</text>')
    parts.append(f'<text x="{SIZE / 2}" y="{SIZE - 15}" font-size="13" text-anchor="middle">psi1</text>')
    parts.append(f'<text x="15" y="{SIZE / 2}" font-size="13" text-anchor="middle" '
                 f'transform="rotate(-90 15 {SIZE / 2})">psi2</text>')

    # invertibility triangle, clipped to the plot frame
    tri = " ".join(f"{px(a):.3f},{py(b):.3f}" for a, b in ((-2, 1), (2, 1), (0, -1)))
    parts.append(
        f'<clipPath id="frame"><rect x="{MARGIN}" y="{MARGIN}" width="{PLOT}" height="{PLOT}"/></clipPath>'
    )
    parts.append(
        f'<polygon class="triangle" points="{tri}" fill="none" stroke="#000" '
        f'stroke-width="1.5" clip-path="url(#frame)"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
