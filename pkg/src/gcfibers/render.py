"""ASCII and SVG renderings of a face over its diagram grid.

Both renderers are bit-stable: fixed glyphs, fixed SVG style constants
(3px face edges over a 1px grid, shaded blocks at 20% opacity), no
timestamps.  Suitable for golden-file tests.
"""

from __future__ import annotations

from .blocks import LBlock
from .ladder import Face

CELL = 40  # svg pixels per unit
PAD = 20

# ascii glyphs: bold for face edges, light for remaining diagram edges
H_FACE, H_GRID = "===", "---"
V_FACE, V_GRID = "#", "|"


def ascii_face(
    face: Face,
    shade_blocks: list[LBlock] | None = None,
    overlay_w: int | None = None,
) -> str:
    """Plain-text picture of the face; row y is printed top to bottom."""
    d = face.diagram
    max_x = max(v[0] for v in d.vertices)
    max_y = max(v[1] for v in d.vertices)
    shaded = set()
    for blk in shade_blocks or ():
        shaded |= blk.boxes

    lines = []
    for y in range(max_y, -1, -1):
        row = ""
        for x in range(0, max_x + 1):
            row += "+" if (x, y) in d.vertices else " "
            e = ((x, y), (x + 1, y))
            if e in face:
                row += H_FACE
            elif e in d.edge_ids:
                row += H_GRID
            else:
                row += "   "
        lines.append(row.rstrip())
        if y == 0:
            break
        row = ""
        for x in range(0, max_x + 1):
            e = ((x, y - 1), (x, y))
            if e in face:
                row += V_FACE
            elif e in d.edge_ids:
                row += V_GRID
            else:
                row += " "
            if overlay_w and _box_in_overlay(x + 1, y, overlay_w):
                fill = "w"
            elif (x + 1, y) in shaded:
                fill = "#"
            else:
                fill = " "
            row += fill * 3
        lines.append(row.rstrip())
    return "\n".join(lines) + "\n"


def _box_in_overlay(a: int, b: int, k: int) -> bool:
    return a >= 1 and b >= 1 and k + 1 <= a + b <= k + 2


def svg_face(
    face: Face,
    shade_blocks: list[LBlock] | None = None,
    overlay_w: int | None = None,
) -> str:
    d = face.diagram
    max_x = max(v[0] for v in d.vertices)
    max_y = max(v[1] for v in d.vertices)

    def px(x, y):
        return PAD + x * CELL, PAD + (max_y - y) * CELL

    parts = []
    w = 2 * PAD + max_x * CELL
    h = 2 * PAD + max_y * CELL
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">'
    )
    parts.append(f'<rect width="{w}" height="{h}" fill="white"/>')

    for blk in shade_blocks or ():
        for (a, b) in sorted(blk.boxes):
            x0, y0 = px(a - 1, b)
            parts.append(
                f'<rect x="{x0}" y="{y0}" width="{CELL}" height="{CELL}" '
                f'fill="steelblue" fill-opacity="0.2"/>'
            )
    if overlay_w:
        for a in range(1, max_x + 2):
            for b in range(1, max_y + 2):
                if _box_in_overlay(a, b, overlay_w):
                    x0, y0 = px(a - 1, b)
                    parts.append(
                        f'<rect x="{x0}" y="{y0}" width="{CELL}" height="{CELL}" '
                        f'fill="goldenrod" fill-opacity="0.15"/>'
                    )

    face_edges = set(face.edges)
    for e in d.edges:
        (xa, ya), (xb, yb) = e
        x0, y0 = px(xa, ya)
        x1, y1 = px(xb, yb)
        if e in face_edges:
            style = 'stroke="black" stroke-width="3"'
        else:
            style = 'stroke="#999999" stroke-width="1"'
        parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" {style}/>')

    for v in sorted(d.vertices):
        x0, y0 = px(*v)
        r = 4 if v in d.top_vertices or v == d.origin else 2
        parts.append(f'<circle cx="{x0}" cy="{y0}" r="{r}" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
