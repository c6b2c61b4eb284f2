"""Text and SVG pictures of spacetime diagrams, time running upward."""
from __future__ import annotations

from xml.sax.saxutils import quoteattr

import numpy as np

from .lattice import JointDiagram
from .symmetry import compute_J

FILLED, EMPTY = "■", "□"


def _glyphs(bits) -> str:
    return "".join(FILLED if b else EMPTY for b in bits)


def _cell_line(row) -> str:
    return " ".join(_glyphs(cell) for cell in np.asarray(row))


def _field_line(row) -> str:
    return " ".join(_glyphs([b]) for b in np.asarray(row))


def render_text(diagram, j_field: bool = False) -> str:
    """Render a diagram as lines of glyphs, the latest row first.

    Matter cells print their two subcells minus then plus. A JointDiagram
    interleaves each matter row (marked ``psi``) with its gauge row (``A``,
    r then l). A 2-D array is drawn as a bit field, one glyph per site; with
    ``j_field=True`` a matter diagram is reduced to its J field first.
    """
    if isinstance(diagram, JointDiagram):
        psi, gauge = (np.asarray(p) for p in diagram)
        if j_field:
            return render_text(compute_J(psi))
        width = len(str(len(psi) - 1))
        lines = []
        for t in range(len(psi) - 1, -1, -1):
            lines.append(f"{t:>{width}} psi | {_cell_line(psi[t])}")
            lines.append(f"{'':>{width}}   A | {_cell_line(gauge[t])}")
        return "\n".join(lines) + "\n"

    d = np.asarray(diagram)
    if j_field:
        d = compute_J(d)
    width = len(str(len(d) - 1))
    line = _cell_line if d.ndim == 3 else _field_line
    return "\n".join(f"{t:>{width}} | {line(d[t])}" for t in range(len(d) - 1, -1, -1)) + "\n"


def render_svg(diagram, cell: int = 16, layer: str = "matter", title: str | None = None) -> str:
    """Standalone SVG: each cell as two side-by-side squares, black for 1.

    ``layer`` picks ``matter``, ``gauge`` (JointDiagram only) or ``J``, which
    draws a single square per cell shaded by J. Row t sits in ``<g id="t{t}">``
    with t = 0 at the bottom.
    """
    if isinstance(diagram, JointDiagram):
        psi, gauge = (np.asarray(p) for p in diagram)
    else:
        psi, gauge = np.asarray(diagram), None
    if layer == "matter":
        data = psi
    elif layer == "gauge":
        if gauge is None:
            raise ValueError("gauge layer needs a JointDiagram")
        data = gauge
    elif layer == "J":
        data = compute_J(psi)[..., None]
    else:
        raise ValueError(f"unknown layer {layer!r}")

    rows, n, sub = data.shape
    pad = 2
    cw = cell * 2 if sub == 1 else cell  # J squares span a whole cell
    cell_w = cw * sub
    w = pad * 2 + n * cell_w + (n - 1) * pad
    h = pad * 2 + rows * cell + (rows - 1) * pad
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
           f'viewBox="0 0 {w} {h}">']
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out.append(f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>')
    for t in range(rows):
        y = pad + (rows - 1 - t) * (cell + pad)
        out.append(f'<g id="t{t}">')
        for x in range(n):
            x0 = pad + x * (cell_w + pad)
            for k in range(sub):
                fill = "#000000" if data[t, x, k] else "#ffffff"
                out.append(f'<rect x="{x0 + k * cw}" y="{y}" width="{cw}" height="{cell}" '
                           f'fill="{fill}" stroke="#808080" stroke-width="1"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return quoteattr(text)[1:-1]
