"""Serialize LayeredSvg back to SVG text, one <path> per layer."""

from __future__ import annotations

from ..geometry import Subpath, segment_end, segment_start
from .model import LayeredSvg


def _num(x: float) -> str:
    # shortest exact representation so parse(serialize(x)) is bit-identical
    if float(x).is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _subpath_data(sp: Subpath) -> str:
    sx, sy = segment_start(sp[0])
    parts = [f"M {_num(sx)} {_num(sy)}"]
    segs = list(sp)
    closing_line = (
        segs
        and segs[-1][0] == "line"
        and segment_end(segs[-1]) == (sx, sy)
    )
    if closing_line:
        segs = segs[:-1]
    for seg in segs:
        if seg[0] == "line":
            x, y = seg[2]
            parts.append(f"L {_num(x)} {_num(y)}")
        else:
            (c1x, c1y), (c2x, c2y), (x, y) = seg[2], seg[3], seg[4]
            parts.append(
                f"C {_num(c1x)} {_num(c1y)} {_num(c2x)} {_num(c2y)} {_num(x)} {_num(y)}"
            )
    parts.append("Z")
    return " ".join(parts)


def serialize_svg(svg: LayeredSvg) -> str:
    """Deterministic SVG text; layers in paint order, colors as #rrggbb."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{svg.width}" '
            f'height="{svg.height}" viewBox="0 0 {svg.width} {svg.height}">'
        ),
    ]
    for layer in svg.layers:
        d = " ".join(_subpath_data(sp) for sp in layer.subpaths)
        fill = "#{:02x}{:02x}{:02x}".format(*layer.fill)
        rule = ' fill-rule="evenodd"' if layer.fill_rule == "evenodd" else ""
        lines.append(f'  <path d="{d}" fill="{fill}"{rule}/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
