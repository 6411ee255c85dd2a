"""Minimal SVG rendering of signals and peak markers.

No plotting library is needed; marker positions are emitted as ``data-*``
attributes so tests can compare them structurally.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT, MARGIN = 1200, 320, 40
COLORS = {"P": "#1f77b4", "Q": "#2ca02c", "R": "#d62728", "S": "#9467bd", "T": "#ff7f0e"}


def _scale(x):
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    lo, hi = (float(np.min(x)), float(np.max(x))) if n else (0.0, 1.0)
    span = hi - lo or 1.0
    sx = (WIDTH - 2 * MARGIN) / max(n - 1, 1)
    sy = (HEIGHT - 2 * MARGIN) / span
    return (lambda i: MARGIN + i * sx), (lambda v: HEIGHT - MARGIN - (v - lo) * sy)


def render_svg(signal, peaks=None, title=None, threshold=None) -> str:
    """SVG polyline of ``signal`` with optional labelled peak markers and a threshold line."""
    x = signal.samples
    fx, fy = _scale(x)
    points = " ".join(f"{fx(i):.2f},{fy(v):.2f}" for i, v in enumerate(x))
    title = title or signal.label or "signal"
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{MARGIN}" y="{MARGIN - 14}" font-family="sans-serif" font-size="14">{escape(title)}</text>',
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - 10}" font-family="sans-serif" font-size="11" '
        f'text-anchor="end">{len(x) / signal.sample_rate_hz:.3f} s @ {signal.sample_rate_hz:g} Hz</text>',
        f'<polyline class="trace" fill="none" stroke="black" stroke-width="0.8" points="{points}"/>',
    ]
    if threshold is not None:
        y = fy(threshold)
        parts.append(
            f'<line class="threshold" x1="{MARGIN}" y1="{y:.2f}" x2="{WIDTH - MARGIN}" y2="{y:.2f}" '
            f'stroke="#888" stroke-dasharray="4 3" data-value="{threshold:.6f}"/>'
        )
    if peaks is not None:
        for p in peaks.peaks:
            cx, cy = fx(p.index), fy(x[p.index])
            color = COLORS.get(p.label, "black")
            parts.append(
                f'<circle class="peak" cx="{cx:.2f}" cy="{cy:.2f}" r="3" fill="{color}" '
                f'data-label="{p.label}" data-index="{p.index}"/>'
            )
            parts.append(
                f'<text x="{cx:.2f}" y="{cy - 6:.2f}" font-family="sans-serif" font-size="10" '
                f'text-anchor="middle" fill="{color}">{p.label}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def markers_from_svg(text) -> list[tuple[str, int]]:
    """Extract ``(label, index)`` pairs from an SVG produced by :func:`render_svg`."""
    import xml.etree.ElementTree as ET

    root = ET.fromstring(text)
    ns = "{http://www.w3.org/2000/svg}"
    return [
        (el.get("data-label"), int(el.get("data-index")))
        for el in root.iter(f"{ns}circle")
        if el.get("class") == "peak"
    ]
