"""Static SVG rendering of one or two curves and an optional correspondence overlay."""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from .curve import SbvCurve

WIDTH = 600
HEIGHT = 600
_STYLES = (
    'stroke="#1f4e79" stroke-width="2" fill="none"',
    'stroke="#b03a2e" stroke-width="2" fill="none" stroke-dasharray="6,4"',
)
_JUMP = 'stroke="{color}" stroke-width="1.5" fill="none" stroke-dasharray="2,3"'
_CHORD = 'stroke="#999999" stroke-width="0.75" fill="none"'


def _num(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def pieces(c: SbvCurve, xy: np.ndarray) -> Tuple[List[np.ndarray], List[Tuple[np.ndarray, np.ndarray]]]:
    """Continuous runs of plotted points and the jump segments between them."""
    runs, jumps = [], []
    cur = [xy[0][0]]
    for k in range(1, c.n_nodes):
        cur.append(xy[0][k])
        if c.jump_mask[k]:
            runs.append(np.array(cur))
            jumps.append((xy[0][k], xy[1][k]))
            cur = [xy[1][k]]
    runs.append(np.array(cur))
    return runs, jumps


def _project(c: SbvCurve, profile: bool) -> Tuple[np.ndarray, np.ndarray]:
    if profile:
        left = np.column_stack([c.t, c.left[:, 0]])
        right = np.column_stack([c.t, c.right[:, 0]])
    else:
        left, right = c.left[:, :2], c.right[:, :2]
    return left, right


def render(
    curves: Sequence[SbvCurve],
    chords: Optional[Sequence[Tuple[Sequence[float], Sequence[float]]]] = None,
    profile: bool = False,
) -> str:
    """SVG document text.  The viewBox covers the data bounds plus a 5% margin; y points up."""
    if profile:
        if any(c.dimension != 1 for c in curves):
            raise ValueError("profile plots need 1-d curves")
    elif any(c.dimension < 2 for c in curves):
        raise ValueError("plotting needs dimension >= 2; use the profile view for 1-d curves")
    projected = [_project(c, profile) for c in curves]
    chord_pts = []
    for p, q in chords or ():
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        chord_pts.append((p[:2], q[:2]))
    allpts = np.vstack([np.vstack(pr) for pr in projected] + [np.vstack(cp) for cp in chord_pts])
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    # flat data still gets a visible extent on the short axis
    span = np.maximum(hi - lo, max(0.1 * float(np.max(hi - lo)), 1e-9))
    lo = 0.5 * (lo + hi) - 0.55 * span
    span = 1.1 * span
    # y is flipped so the drawing has the usual orientation
    vb = f"{_num(lo[0])} {_num(-(lo[1] + span[1]))} {_num(span[0])} {_num(span[1])}"

    def pts(a: np.ndarray) -> str:
        return " ".join(f"{_num(x)},{_num(-y)}" for x, y in a)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="{vb}" preserveAspectRatio="xMidYMid meet">',
    ]
    for idx, (c, xy) in enumerate(zip(curves, projected)):
        runs, jumps = pieces(c, xy)
        style = _STYLES[min(idx, 1)]
        color = "#1f4e79" if idx == 0 else "#b03a2e"
        out.append(f'<g id="curve{idx + 1}">')
        for run in runs:
            out.append(f'<polyline class="piece" points="{pts(run)}" {style} vector-effect="non-scaling-stroke"/>')
        for a, b in jumps:
            out.append(
                f'<line class="jump" x1="{_num(a[0])}" y1="{_num(-a[1])}" x2="{_num(b[0])}" y2="{_num(-b[1])}" '
                f'{_JUMP.format(color=color)} vector-effect="non-scaling-stroke"/>'
            )
        out.append("</g>")
    if chord_pts:
        out.append('<g id="correspondences">')
        for a, b in chord_pts:
            out.append(
                f'<line class="chord" x1="{_num(a[0])}" y1="{_num(-a[1])}" x2="{_num(b[0])}" y2="{_num(-b[1])}" '
                f'{_CHORD} vector-effect="non-scaling-stroke"/>'
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
