"""
Self-contained SVG heatmap of a sensitivity grid.

Prior sd runs along x, prior mean (as a ratio) along y with the largest mean
at the top. Cells are coloured on a log10 BF scale by a fixed 256-step
diverging ramp: red for evidence for the null, white at BF = 1, blue for the
alternative. The ramp spans [clip_floor, 1/clip_floor]; anything outside is
drawn with the end colour. Absent cells are grey. Output is plain text with
fixed-precision coordinates, so identical grids give identical bytes.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from trialbf.sensitivity import SensitivityGrid, grid_clip

# anchor colours of the ramp at log10 BF = lo, 0, hi
_ANCHORS = ((178, 24, 43), (247, 247, 247), (33, 102, 172))
ABSENT_FILL = "#bdbdbd"

WIDTH, HEIGHT = 640, 480
_LEFT, _TOP, _PLOT_W, _PLOT_H = 80, 40, 440, 360
_CELL_OVERLAP = 0.5


def _ramp() -> list[str]:
    colours = []
    for k in range(256):
        u = k / 255 * 2
        a, b = (_ANCHORS[0], _ANCHORS[1]) if u <= 1 else (_ANCHORS[1], _ANCHORS[2])
        f = u if u <= 1 else u - 1
        rgb = [round(a[c] + (b[c] - a[c]) * f) for c in range(3)]
        colours.append("#%02x%02x%02x" % tuple(rgb))
    return colours


PALETTE = _ramp()


def colour_index(bf: float, clip_floor: float) -> int:
    lo = math.log10(clip_floor)
    hi = -lo if lo < 0 else lo + 4.0
    l = min(max(math.log10(bf), lo), hi)
    return int(round((l - lo) / (hi - lo) * 255))


def _n(x: float) -> str:
    return f"{x:.3f}"


def render_svg(grid: SensitivityGrid, design_effect: float | None = None, scale_name: str = "ratio") -> str:
    spec = grid.spec
    clipped = grid_clip(grid)
    n_tau, n_mu = len(grid.tau_axis), len(grid.mu_axis)
    cw, ch = _PLOT_W / n_tau, _PLOT_H / n_mu
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        '<g id="cells" shape-rendering="crispEdges">',
    ]
    # cells overlap their right/lower neighbour by half a pixel (never past the
    # plot border) so edge snapping cannot leave hairline gaps between them
    for i in range(n_tau):
        x = _LEFT + i * cw
        w = cw + (_CELL_OVERLAP if i < n_tau - 1 else 0.0)
        for j in range(n_mu):
            y = _TOP + (n_mu - 1 - j) * ch
            h = ch + (_CELL_OVERLAP if j > 0 else 0.0)
            v = clipped[i, j]
            fill = ABSENT_FILL if np.isnan(v) else PALETTE[colour_index(float(v), spec.clip_floor)]
            out.append(
                f'<rect x="{_n(x)}" y="{_n(y)}" width="{_n(w)}" height="{_n(h)}" fill="{fill}"/>'
            )
    out.append("</g>")

    # axes and ticks
    bottom = _TOP + _PLOT_H
    out.append(
        f'<rect x="{_LEFT}" y="{_TOP}" width="{_PLOT_W}" height="{_PLOT_H}" fill="none" stroke="#000000"/>'
    )
    for k in range(5):
        f = k / 4
        tau = spec.tau_min + f * (spec.tau_max - spec.tau_min)
        x = _LEFT + (f * (n_tau - 1) + 0.5) * cw
        out.append(f'<line x1="{_n(x)}" y1="{bottom}" x2="{_n(x)}" y2="{bottom + 5}" stroke="#000000"/>')
        out.append(f'<text x="{_n(x)}" y="{bottom + 18}" text-anchor="middle">{tau:.3g}</text>')
        mu = spec.mu_min + f * (spec.mu_max - spec.mu_min)
        y = _TOP + ((1 - f) * (n_mu - 1) + 0.5) * ch
        out.append(f'<line x1="{_LEFT - 5}" y1="{_n(y)}" x2="{_LEFT}" y2="{_n(y)}" stroke="#000000"/>')
        out.append(f'<text x="{_LEFT - 8}" y="{_n(y + 4)}" text-anchor="end">{math.exp(mu):.3g}</text>')
    out.append(
        f'<text x="{_LEFT + _PLOT_W / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle">'
        "prior sd of log effect</text>"
    )
    out.append(
        f'<text x="20" y="{_TOP + _PLOT_H / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {_TOP + _PLOT_H / 2:.1f})">prior mean ({escape(scale_name)})</text>'
    )

    if design_effect is not None:
        mu_d = math.log(design_effect)
        if spec.mu_min <= mu_d <= spec.mu_max:
            f = (mu_d - spec.mu_min) / (spec.mu_max - spec.mu_min)
            y = _TOP + ((1 - f) * (n_mu - 1) + 0.5) * ch
            out.append(
                f'<line id="design-effect" x1="{_LEFT}" y1="{_n(y)}" x2="{_LEFT + _PLOT_W}" y2="{_n(y)}" '
                'stroke="#000000" stroke-width="1.5" stroke-dasharray="2,3"/>'
            )

    m = grid.max_cell
    i = int(np.searchsorted(grid.tau_axis, m.tau))
    j = int(np.searchsorted(grid.mu_axis, m.mu))
    cx, cy = _LEFT + (i + 0.5) * cw, _TOP + (n_mu - 1 - j + 0.5) * ch
    out.append(f'<circle cx="{_n(cx)}" cy="{_n(cy)}" r="3" fill="none" stroke="#000000"/>')
    out.append(
        f'<text id="max-annotation" x="{_LEFT}" y="{_TOP - 12}">max BF10 = {m.bf:.4g} '
        f'at {escape(scale_name)} {math.exp(m.mu):.3g}, sd {m.tau:.3g} '
        f'(supremum {grid.effect.max_bf:.4g})</text>'
    )

    # colour bar
    bx, bw = _LEFT + _PLOT_W + 30, 14
    lo = math.log10(spec.clip_floor)
    hi = -lo if lo < 0 else lo + 4.0
    step = _PLOT_H / 256
    out.append('<g id="colourbar" shape-rendering="crispEdges">')
    for k, colour in enumerate(PALETTE):
        y = _TOP + _PLOT_H - (k + 1) * step
        out.append(f'<rect x="{bx}" y="{_n(y)}" width="{bw}" height="{_n(step)}" fill="{colour}"/>')
    out.append("</g>")
    for l in np.linspace(lo, hi, 5):
        y = _TOP + _PLOT_H - (l - lo) / (hi - lo) * _PLOT_H
        mark = "\u2264" if l == lo else "\u2265" if l == hi else ""
        label = mark + f"{10 ** l:.3g}"
        out.append(f'<text x="{bx + bw + 4}" y="{_n(y + 4)}">{label}</text>')
    out.append(f'<text x="{bx}" y="{_TOP - 12}">BF10</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
