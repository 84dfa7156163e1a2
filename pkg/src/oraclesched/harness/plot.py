"""Dependency-free SVG line charts of aggregate queue-length curves."""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

from .csvio import read_aggregate

WIDTH, HEIGHT = 720, 440
MARGIN = dict(left=70, right=150, top=30, bottom=50)
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"]


def _label(path) -> str:
    stem = Path(path).stem
    return stem[: -len("_aggregate")] if stem.endswith("_aggregate") else stem


def _ticks(lo, hi, count=5):
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def _fmt(v) -> str:
    return f"{v:.4g}"


def render_plot(inputs, out_path, labels=None, title="mean queue length") -> None:
    """Mean queue length against tick, one series per aggregate CSV.

    A translucent band shows mean +- sd; with zero spread it collapses onto
    the line.  Legend entries follow the order of ``inputs``.
    """
    inputs = list(inputs)
    labels = list(labels) if labels else [_label(p) for p in inputs]
    if len(labels) != len(inputs):
        raise ValueError("need one label per input")
    series = [read_aggregate(p) for p in inputs]

    xs = [t for s in series for t in s.tick]
    ys = [m + d for s in series for m, d in zip(s.mean, s.sd)]
    ys += [m - d for s in series for m, d in zip(s.mean, s.sd)]
    x_lo, x_hi = (min(xs), max(xs)) if xs else (0, 1)
    y_lo, y_hi = (min(0.0, min(ys)), max(ys)) if ys else (0.0, 1.0)
    if x_hi == x_lo:
        x_hi = x_lo + 1
    if y_hi == y_lo:
        y_hi = y_lo + 1

    left, top = MARGIN["left"], MARGIN["top"]
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(x):
        return left + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return top + ph - (y - y_lo) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{left + pw / 2:.1f}" y="18" text-anchor="middle">{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for v in _ticks(x_lo, x_hi):
        out.append(f'<text x="{px(v):.1f}" y="{top + ph + 18}" text-anchor="middle">{_fmt(v)}</text>')
    for v in _ticks(y_lo, y_hi):
        out.append(f'<text x="{left - 6}" y="{py(v) + 4:.1f}" text-anchor="end">{_fmt(v)}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">tick</text>')

    for k, (s, name) in enumerate(zip(series, labels)):
        color = COLORS[k % len(COLORS)]
        if s.tick:
            upper = [f"{px(t):.2f},{py(m + d):.2f}" for t, m, d in zip(s.tick, s.mean, s.sd)]
            lower = [f"{px(t):.2f},{py(m - d):.2f}" for t, m, d in zip(s.tick, s.mean, s.sd)]
            out.append(
                f'<polygon class="band" points="{" ".join(upper + lower[::-1])}" '
                f'fill="{color}" fill-opacity="0.2" stroke="none"/>'
            )
            line = [f"{px(t):.2f},{py(m):.2f}" for t, m in zip(s.tick, s.mean)]
            out.append(
                f'<polyline class="series" points="{" ".join(line)}" fill="none" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
        ly = top + 14 + 18 * k
        lx = left + pw + 12
        out.append(
            f'<g class="legend"><line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
            f'<text x="{lx + 26}" y="{ly + 4}">{escape(name)}</text></g>'
        )
    out.append("</svg>")
    Path(out_path).write_text("\n".join(out) + "\n", encoding="utf-8")
