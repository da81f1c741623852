"""Direct SVG rendering of report plots (no plotting dependency).

Two figures: a per-series scatter of modeled vs observed values with the
identity line and the fitted projection line, and the critical-curve
nomogram with the dataset's scores overlaid.  Coordinates are emitted with
fixed precision so output bytes are reproducible.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH = 640
HEIGHT = 480
MARGIN = 60

_POINT_COLOR = "#1f6fb2"
_JOINT_COLOR = "#c23b22"
_CURVE_COLORS = {
    0.01: "#7b3294",
    0.05: "#c2a5cf",
    0.10: "#878787",
    0.25: "#a6dba0",
    0.50: "#008837",
}


def _num(x: float) -> str:
    return f"{x:.2f}"


class _Frame:
    """Maps data coordinates into the plot rectangle (y axis flipped)."""

    def __init__(self, x_range, y_range):
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range

    def x(self, v: float) -> float:
        return MARGIN + (v - self.x0) / (self.x1 - self.x0) * (WIDTH - 2 * MARGIN)

    def y(self, v: float) -> float:
        return HEIGHT - MARGIN - (v - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2 * MARGIN)


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{escape(title)}</text>',
    ]


def _frame_box() -> str:
    return (f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
            f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="black"/>')


def _line(x1, y1, x2, y2, color="black", width=1.0, dash=None) -> str:
    d = f' stroke-dasharray="{dash}"' if dash else ""
    return (f'<line x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" '
            f'y2="{_num(y2)}" stroke="{color}" stroke-width="{width}"{d}/>')


def _circle(x, y, r, color) -> str:
    return (f'<circle cx="{_num(x)}" cy="{_num(y)}" r="{r}" fill="{color}" '
            f'fill-opacity="0.8"/>')


def _text(x, y, s, size=11, anchor="middle", color="black") -> str:
    return (f'<text x="{_num(x)}" y="{_num(y)}" text-anchor="{anchor}" '
            f'font-family="sans-serif" font-size="{size}" '
            f'fill="{color}">{escape(s)}</text>')


def _path(points, color, width=1.5, dash=None) -> str:
    steps = " ".join(f"{'M' if k == 0 else 'L'} {_num(x)} {_num(y)}"
                     for k, (x, y) in enumerate(points))
    d = f' stroke-dasharray="{dash}"' if dash else ""
    return f'<path d="{steps}" fill="none" stroke="{color}" stroke-width="{width}"{d}/>'


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if mag * mult >= raw:
            step = mag * mult
            break
    first = math.ceil(lo / step) * step
    out = []
    v = first
    while v <= hi + step * 1e-9:
        out.append(round(v, 10))
        v += step
    return out


def scatter_svg(series_entry: dict) -> str:
    """Modeled vs observed scatter with identity and projection lines."""
    pts = series_entry["points"]
    y_obs, y_mod, y_p = pts["y_obs"], pts["y_mod"], pts["y_p"]
    lo = min(min(y_obs), min(y_mod), min(y_p))
    hi = max(max(y_obs), max(y_mod), max(y_p))
    pad = (hi - lo) * 0.08 or 1.0
    frame = _Frame((lo - pad, hi + pad), (lo - pad, hi + pad))

    out = _header(f"{series_entry['name']}: modeled vs observed "
                  f"(C = {series_entry['c']:.6g})")
    out.append(_frame_box())
    for v in _ticks(lo - pad, hi + pad):
        out.append(_line(frame.x(v), HEIGHT - MARGIN, frame.x(v),
                         HEIGHT - MARGIN + 5))
        out.append(_text(frame.x(v), HEIGHT - MARGIN + 18, f"{v:g}"))
        out.append(_line(MARGIN - 5, frame.y(v), MARGIN, frame.y(v)))
        out.append(_text(MARGIN - 8, frame.y(v) + 4, f"{v:g}", anchor="end"))

    a, b = lo - pad, hi + pad
    out.append(_line(frame.x(a), frame.y(a), frame.x(b), frame.y(b),
                     color="#444444", dash="5,4"))
    slope = series_entry["slope"]
    intercept = series_entry["intercept"]
    out.append(_line(frame.x(a), frame.y(intercept + slope * a),
                     frame.x(b), frame.y(intercept + slope * b),
                     color=_JOINT_COLOR, width=1.5))
    for xo, ym in zip(y_obs, y_mod):
        out.append(_circle(frame.x(xo), frame.y(ym), 3.5, _POINT_COLOR))

    out.append(_text(WIDTH // 2, HEIGHT - 14, "observed", size=13))
    out.append(f'<text x="16" y="{HEIGHT // 2}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13" '
               f'transform="rotate(-90 16 {HEIGHT // 2})">modeled</text>')
    out.append(_text(WIDTH - MARGIN - 4, MARGIN + 16,
                     "dashed: identity, solid: projection", size=10,
                     anchor="end", color="#555555"))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def nomogram_svg(report: dict) -> str:
    """Critical-curve isopleths vs M*effN with the dataset's scores overlaid.

    Component scores plot at their own sample size (M = 1, effN = N_i);
    the joint score plots at the dataset's M * effN.
    """
    from .critical import TABULATED_ALPHAS, critical_c

    points = [(float(s["n"]), float(s["c"]), s["name"])
              for s in report["series"]]
    joint = (float(report["m_effn"]), float(report["joint_c"]))

    x_hi = max(1000.0, 2.0 * joint[0], *(2.0 * p[0] for p in points))
    lx0, lx1 = math.log10(2.0), math.log10(x_hi)
    y_lo = min(-0.2, min(p[1] for p in points) - 0.1, joint[1] - 0.1)
    frame = _Frame((lx0, lx1), (y_lo, 1.0))

    out = _header("critical C vs M*effN "
                  f"(joint C = {report['joint_c']:.6g})")
    out.append(_frame_box())

    tick_sizes = [2, 5, 10, 20, 50, 100, 200, 500, 1000]
    for size in tick_sizes:
        if size > x_hi:
            break
        lx = frame.x(math.log10(size))
        out.append(_line(lx, HEIGHT - MARGIN, lx, HEIGHT - MARGIN + 5))
        out.append(_text(lx, HEIGHT - MARGIN + 18, str(size)))
    for v in _ticks(y_lo, 1.0, 6):
        out.append(_line(MARGIN - 5, frame.y(v), MARGIN, frame.y(v)))
        out.append(_text(MARGIN - 8, frame.y(v) + 4, f"{v:g}", anchor="end"))

    out.append(_line(frame.x(lx0), frame.y(0.0), frame.x(lx1), frame.y(0.0),
                     color="#bbbbbb", dash="2,3"))

    steps = 160
    for alpha in TABULATED_ALPHAS:
        curve = []
        for k in range(steps + 1):
            lx = lx0 + (lx1 - lx0) * k / steps
            curve.append((frame.x(lx),
                          frame.y(critical_c(alpha, 1.0, 10.0 ** lx))))
        color = _CURVE_COLORS[alpha]
        out.append(_path(curve, color))
        out.append(_text(frame.x(lx1) - 4, curve[-1][1] - 4,
                         f"alpha={alpha:g}", size=10, anchor="end",
                         color=color))

    for size, c, name in points:
        out.append(_circle(frame.x(math.log10(size)), frame.y(c), 4,
                           _POINT_COLOR))
        out.append(_text(frame.x(math.log10(size)), frame.y(c) - 8, name,
                         size=10, color=_POINT_COLOR))
    out.append(_circle(frame.x(math.log10(joint[0])), frame.y(joint[1]), 5,
                       _JOINT_COLOR))
    out.append(_text(frame.x(math.log10(joint[0])), frame.y(joint[1]) - 9,
                     "joint", size=10, color=_JOINT_COLOR))

    out.append(_text(WIDTH // 2, HEIGHT - 14, "M * effN (log scale)", size=13))
    out.append(f'<text x="16" y="{HEIGHT // 2}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13" '
               f'transform="rotate(-90 16 {HEIGHT // 2})">C</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
