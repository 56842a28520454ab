"""Parse the supported SVG subset into LayeredSvg.

Supported: svg, g, path, rect, circle, ellipse, polygon with solid fills;
transform attributes; viewBox/width/height sizing. Shapes are normalized to
line/cubic subpaths at parse time and all subpaths are closed. Stroke handling
is configurable: strict mode rejects any stroke, lenient mode converts it to a
fill layer placed immediately above its shape. Gradients, filters, text,
embedded images and translucency are outside the subset.
"""

from __future__ import annotations

import math
import re
import xml.etree.ElementTree as ET

from ..errors import MalformedDocument, UnsupportedFeature
from ..geometry import (
    Affine,
    Subpath,
    cubic,
    flatten_subpath,
    line,
    polygon_subpath,
    transform_subpath,
)
from .model import Layer, LayeredSvg, RGB

# circle quadrant as a cubic: control distance = r * KAPPA
KAPPA = 0.5522847498307936

_SHAPE_TAGS = {"path", "rect", "circle", "ellipse", "polygon"}
_CONTAINER_TAGS = {"svg", "g"}
_IGNORED_TAGS = {"title", "desc", "metadata", "style"}  # style: presentation attrs only
_REJECTED_TAGS = {
    "linearGradient",
    "radialGradient",
    "pattern",
    "image",
    "filter",
    "text",
    "use",
    "mask",
    "clipPath",
    "symbol",
    "marker",
    "foreignObject",
}

_NUMBER_RE = re.compile(r"[-+]?(?:\d*\.\d+|\d+\.?)(?:[eE][-+]?\d+)?")
_PATH_CMD_RE = re.compile(r"([MmZzLlHhVvCcSsQqTtAa])")
_TRANSFORM_RE = re.compile(r"(matrix|translate|scale|rotate|skewX|skewY)\s*\(([^)]*)\)")

_NAMED_COLORS: dict[str, RGB] = {
    "black": (0, 0, 0),
    "silver": (192, 192, 192),
    "gray": (128, 128, 128),
    "grey": (128, 128, 128),
    "white": (255, 255, 255),
    "maroon": (128, 0, 0),
    "red": (255, 0, 0),
    "purple": (128, 0, 128),
    "fuchsia": (255, 0, 255),
    "magenta": (255, 0, 255),
    "green": (0, 128, 0),
    "lime": (0, 255, 0),
    "olive": (128, 128, 0),
    "yellow": (255, 255, 0),
    "navy": (0, 0, 128),
    "blue": (0, 0, 255),
    "teal": (0, 128, 128),
    "aqua": (0, 255, 255),
    "cyan": (0, 255, 255),
    "orange": (255, 165, 0),
    "brown": (165, 42, 42),
    "pink": (255, 192, 203),
    "gold": (255, 215, 0),
    "darkgray": (169, 169, 169),
    "darkgrey": (169, 169, 169),
    "lightgray": (211, 211, 211),
    "lightgrey": (211, 211, 211),
}


def _strip_ns(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _floats(text: str) -> list[float]:
    return [float(m) for m in _NUMBER_RE.findall(text)]


def _parse_length(value: str, what: str) -> float:
    value = value.strip()
    if value.endswith("px"):
        value = value[:-2]
    if value.endswith("%"):
        raise UnsupportedFeature(f"percentage {what} not supported")
    try:
        return float(value)
    except ValueError as exc:
        raise MalformedDocument(f"bad {what}: {value!r}") from exc


def _parse_transform(text: str) -> Affine:
    t = Affine()
    for name, args in _TRANSFORM_RE.findall(text):
        v = _floats(args)
        if name == "matrix" and len(v) == 6:
            t = t @ Affine(a=v[0], b=v[1], c=v[2], d=v[3], e=v[4], f=v[5])
        elif name == "translate" and 1 <= len(v) <= 2:
            t = t @ Affine.translate(v[0], v[1] if len(v) > 1 else 0.0)
        elif name == "scale" and 1 <= len(v) <= 2:
            t = t @ Affine.scale(v[0], v[1] if len(v) > 1 else None)
        elif name == "rotate" and len(v) in (1, 3):
            t = t @ (Affine.rotate(v[0], v[1], v[2]) if len(v) == 3 else Affine.rotate(v[0]))
        elif name == "skewX" and len(v) == 1:
            t = t @ Affine(c=math.tan(math.radians(v[0])))
        elif name == "skewY" and len(v) == 1:
            t = t @ Affine(b=math.tan(math.radians(v[0])))
        else:
            raise MalformedDocument(f"bad transform {name}({args})")
    return t


def parse_color(text: str) -> RGB | None:
    """Solid paint -> RGB; None for no paint. Raises on unsupported servers."""
    text = text.strip()
    low = text.lower()
    if low in ("none", "transparent"):
        return None
    if low.startswith("url("):
        raise UnsupportedFeature(f"paint server fills not supported: {text}")
    if text.startswith("#"):
        hexpart = text[1:]
        if len(hexpart) == 3:
            return tuple(int(ch * 2, 16) for ch in hexpart)  # type: ignore[return-value]
        if len(hexpart) == 6:
            return tuple(int(hexpart[i : i + 2], 16) for i in (0, 2, 4))  # type: ignore[return-value]
        raise MalformedDocument(f"bad hex color {text!r}")
    if low.startswith("rgb(") and low.endswith(")"):
        parts = [p.strip() for p in low[4:-1].split(",")]
        if len(parts) != 3:
            raise MalformedDocument(f"bad rgb() color {text!r}")
        vals = []
        for p in parts:
            if p.endswith("%"):
                vals.append(int(round(float(p[:-1]) * 255 / 100)))
            else:
                vals.append(int(round(float(p))))
        if not all(0 <= v <= 255 for v in vals):
            raise MalformedDocument(f"rgb() channel out of range in {text!r}")
        return tuple(vals)  # type: ignore[return-value]
    if low in _NAMED_COLORS:
        return _NAMED_COLORS[low]
    raise UnsupportedFeature(f"unsupported color {text!r}")


class _Style:
    """Resolved presentation properties, inherited down the tree."""

    __slots__ = ("fill", "fill_rule", "stroke", "stroke_width", "opaque")

    def __init__(self, fill="black", fill_rule="nonzero", stroke="none", stroke_width=1.0, opaque=True):
        self.fill = fill
        self.fill_rule = fill_rule
        self.stroke = stroke
        self.stroke_width = stroke_width
        self.opaque = opaque

    def child(self, el: ET.Element) -> "_Style":
        props = dict()
        for key in ("fill", "fill-rule", "stroke", "stroke-width", "fill-opacity", "opacity", "stroke-opacity"):
            if key in el.attrib:
                props[key] = el.attrib[key]
        style_attr = el.attrib.get("style", "")
        for item in style_attr.split(";"):
            if ":" in item:
                k, v = item.split(":", 1)
                props[k.strip()] = v.strip()
        out = _Style(self.fill, self.fill_rule, self.stroke, self.stroke_width, self.opaque)
        if "fill" in props:
            out.fill = props["fill"]
        if "fill-rule" in props:
            out.fill_rule = props["fill-rule"]
        if "stroke" in props:
            out.stroke = props["stroke"]
        if "stroke-width" in props:
            out.stroke_width = _parse_length(props["stroke-width"], "stroke-width")
        for key in ("fill-opacity", "opacity", "stroke-opacity"):
            if key in props:
                try:
                    if float(props[key]) < 1.0:
                        out.opaque = False
                except ValueError:
                    raise MalformedDocument(f"bad {key}: {props[key]!r}")
        return out


# ---------------------------------------------------------------------------
# shape -> subpaths
# ---------------------------------------------------------------------------


def _close(sp: Subpath) -> Subpath:
    start = sp[0][1]
    end = sp[-1][-1]
    if start != end:
        sp.append(line(end, start))
    return sp


def _rect_subpaths(el: ET.Element) -> list[Subpath]:
    x = float(el.attrib.get("x", 0))
    y = float(el.attrib.get("y", 0))
    w = float(el.attrib["width"])
    h = float(el.attrib["height"])
    if w <= 0 or h <= 0:
        return []
    rx = el.attrib.get("rx")
    ry = el.attrib.get("ry")
    rx = float(rx) if rx is not None else (float(ry) if ry is not None else 0.0)
    ry = float(ry) if ry is not None else rx
    rx = min(rx, w / 2)
    ry = min(ry, h / 2)
    if rx <= 0 or ry <= 0:
        return [polygon_subpath([(x, y), (x + w, y), (x + w, y + h), (x, y + h)])]
    kx, ky = rx * KAPPA, ry * KAPPA
    sp: Subpath = []
    sp.append(line((x + rx, y), (x + w - rx, y)))
    sp.append(cubic((x + w - rx, y), (x + w - rx + kx, y), (x + w, y + ry - ky), (x + w, y + ry)))
    sp.append(line((x + w, y + ry), (x + w, y + h - ry)))
    sp.append(cubic((x + w, y + h - ry), (x + w, y + h - ry + ky), (x + w - rx + kx, y + h), (x + w - rx, y + h)))
    sp.append(line((x + w - rx, y + h), (x + rx, y + h)))
    sp.append(cubic((x + rx, y + h), (x + rx - kx, y + h), (x, y + h - ry + ky), (x, y + h - ry)))
    sp.append(line((x, y + h - ry), (x, y + ry)))
    sp.append(cubic((x, y + ry), (x, y + ry - ky), (x + rx - kx, y), (x + rx, y)))
    return [sp]


def _ellipse_subpaths(cx: float, cy: float, rx: float, ry: float) -> list[Subpath]:
    if rx <= 0 or ry <= 0:
        return []
    kx, ky = rx * KAPPA, ry * KAPPA
    return [[
        cubic((cx + rx, cy), (cx + rx, cy + ky), (cx + kx, cy + ry), (cx, cy + ry)),
        cubic((cx, cy + ry), (cx - kx, cy + ry), (cx - rx, cy + ky), (cx - rx, cy)),
        cubic((cx - rx, cy), (cx - rx, cy - ky), (cx - kx, cy - ry), (cx, cy - ry)),
        cubic((cx, cy - ry), (cx + kx, cy - ry), (cx + rx, cy - ky), (cx + rx, cy)),
    ]]


def _polygon_subpaths(el: ET.Element) -> list[Subpath]:
    pts = _floats(el.attrib.get("points", ""))
    if len(pts) < 6:
        return []
    points = list(zip(pts[0::2], pts[1::2]))
    return [polygon_subpath(points)]


def _arc_to_cubics(p0, rx, ry, rot_deg, large, sweep, p1) -> list:
    """Endpoint-parameterized elliptical arc as <= 90 degree cubic pieces."""
    x1, y1 = p0
    x2, y2 = p1
    if (x1, y1) == (x2, y2):
        return []
    rx, ry = abs(rx), abs(ry)
    if rx == 0 or ry == 0:
        return [line(p0, p1)]
    phi = math.radians(rot_deg % 360)
    cosp, sinp = math.cos(phi), math.sin(phi)
    # to the ellipse frame
    dx, dy = (x1 - x2) / 2, (y1 - y2) / 2
    x1p = cosp * dx + sinp * dy
    y1p = -sinp * dx + cosp * dy
    lam = (x1p / rx) ** 2 + (y1p / ry) ** 2
    if lam > 1:
        s = math.sqrt(lam)
        rx *= s
        ry *= s
    num = rx**2 * ry**2 - rx**2 * y1p**2 - ry**2 * x1p**2
    den = rx**2 * y1p**2 + ry**2 * x1p**2
    num = max(num, 0.0)
    coef = math.sqrt(num / den) if den else 0.0
    if large == sweep:
        coef = -coef
    cxp = coef * rx * y1p / ry
    cyp = -coef * ry * x1p / rx
    cx = cosp * cxp - sinp * cyp + (x1 + x2) / 2
    cy = sinp * cxp + cosp * cyp + (y1 + y2) / 2

    def angle(ux, uy, vx, vy):
        dot = ux * vx + uy * vy
        n = math.hypot(ux, uy) * math.hypot(vx, vy)
        a = math.acos(max(-1.0, min(1.0, dot / n)))
        if ux * vy - uy * vx < 0:
            a = -a
        return a

    theta1 = angle(1, 0, (x1p - cxp) / rx, (y1p - cyp) / ry)
    dtheta = angle((x1p - cxp) / rx, (y1p - cyp) / ry, (-x1p - cxp) / rx, (-y1p - cyp) / ry)
    if not sweep and dtheta > 0:
        dtheta -= 2 * math.pi
    elif sweep and dtheta < 0:
        dtheta += 2 * math.pi

    n_seg = max(1, int(math.ceil(abs(dtheta) / (math.pi / 2))))
    delta = dtheta / n_seg
    alpha = 4 / 3 * math.tan(delta / 4)
    segs = []
    t = theta1
    last = p0
    for i in range(n_seg):
        t2 = t + delta
        cos1, sin1 = math.cos(t), math.sin(t)
        cos2, sin2 = math.cos(t2), math.sin(t2)

        def to_world(px, py):
            return (cx + cosp * px * rx - sinp * py * ry, cy + sinp * px * rx + cosp * py * ry)

        e1 = to_world(cos1, sin1)
        e2 = to_world(cos2, sin2)
        d1 = (
            (-sin1 * rx * cosp - cos1 * ry * sinp) * alpha,
            (-sin1 * rx * sinp + cos1 * ry * cosp) * alpha,
        )
        d2 = (
            (-sin2 * rx * cosp - cos2 * ry * sinp) * alpha,
            (-sin2 * rx * sinp + cos2 * ry * cosp) * alpha,
        )
        end = p1 if i == n_seg - 1 else e2
        segs.append(cubic(last, (e1[0] + d1[0], e1[1] + d1[1]), (end[0] - d2[0], end[1] - d2[1]), end))
        last = end
        t = t2
    return segs


def parse_path_data(d: str) -> list[Subpath]:
    """SVG path data -> closed line/cubic subpaths (arcs and quads converted)."""
    tokens = [t for t in _PATH_CMD_RE.split(d) if t.strip()]
    subpaths: list[Subpath] = []
    current: Subpath = []
    pos = (0.0, 0.0)
    start = (0.0, 0.0)
    prev_cubic_ctrl = None
    prev_quad_ctrl = None
    cmd = None

    def flush():
        nonlocal current
        if current:
            subpaths.append(_close(current))
        current = []

    def add(seg):
        current.append(seg)

    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if _PATH_CMD_RE.fullmatch(tok):
            cmd = tok
            args = []
            i += 1
        else:
            args = _floats(tok)
            i += 1
        if cmd is None:
            raise MalformedDocument("path data does not start with a command")
        if cmd in "Zz":
            if current:
                flush()
                pos = start
            prev_cubic_ctrl = prev_quad_ctrl = None
            continue
        if not args:
            continue

        rel = cmd.islower()
        c = cmd.upper()
        k = 0

        def take(n):
            nonlocal k
            if k + n > len(args):
                raise MalformedDocument(f"truncated arguments for {cmd!r}")
            vals = args[k : k + n]
            k += n
            return vals

        while k < len(args):
            if c == "M":
                x, y = take(2)
                if rel:
                    x, y = pos[0] + x, pos[1] + y
                if current:
                    flush()
                pos = start = (x, y)
                prev_cubic_ctrl = prev_quad_ctrl = None
                c = "L"  # extra coordinate pairs are implicit line-tos
            elif c == "L":
                x, y = take(2)
                if rel:
                    x, y = pos[0] + x, pos[1] + y
                add(line(pos, (x, y)))
                pos = (x, y)
                prev_cubic_ctrl = prev_quad_ctrl = None
            elif c == "H":
                (x,) = take(1)
                if rel:
                    x += pos[0]
                add(line(pos, (x, pos[1])))
                pos = (x, pos[1])
                prev_cubic_ctrl = prev_quad_ctrl = None
            elif c == "V":
                (y,) = take(1)
                if rel:
                    y += pos[1]
                add(line(pos, (pos[0], y)))
                pos = (pos[0], y)
                prev_cubic_ctrl = prev_quad_ctrl = None
            elif c in ("C", "S"):
                if c == "C":
                    x1, y1, x2, y2, x, y = take(6)
                    if rel:
                        x1, y1, x2, y2, x, y = (
                            x1 + pos[0], y1 + pos[1], x2 + pos[0], y2 + pos[1], x + pos[0], y + pos[1],
                        )
                else:
                    x2, y2, x, y = take(4)
                    if rel:
                        x2, y2, x, y = x2 + pos[0], y2 + pos[1], x + pos[0], y + pos[1]
                    if prev_cubic_ctrl is not None:
                        x1, y1 = 2 * pos[0] - prev_cubic_ctrl[0], 2 * pos[1] - prev_cubic_ctrl[1]
                    else:
                        x1, y1 = pos
                add(cubic(pos, (x1, y1), (x2, y2), (x, y)))
                prev_cubic_ctrl = (x2, y2)
                prev_quad_ctrl = None
                pos = (x, y)
            elif c in ("Q", "T"):
                if c == "Q":
                    qx, qy, x, y = take(4)
                    if rel:
                        qx, qy, x, y = qx + pos[0], qy + pos[1], x + pos[0], y + pos[1]
                else:
                    x, y = take(2)
                    if rel:
                        x, y = x + pos[0], y + pos[1]
                    if prev_quad_ctrl is not None:
                        qx, qy = 2 * pos[0] - prev_quad_ctrl[0], 2 * pos[1] - prev_quad_ctrl[1]
                    else:
                        qx, qy = pos
                c1 = (pos[0] + 2 / 3 * (qx - pos[0]), pos[1] + 2 / 3 * (qy - pos[1]))
                c2 = (x + 2 / 3 * (qx - x), y + 2 / 3 * (qy - y))
                add(cubic(pos, c1, c2, (x, y)))
                prev_quad_ctrl = (qx, qy)
                prev_cubic_ctrl = None
                pos = (x, y)
            elif c == "A":
                rx, ry, rot, large, sweep, x, y = take(7)
                if rel:
                    x, y = x + pos[0], y + pos[1]
                for seg in _arc_to_cubics(pos, rx, ry, rot, bool(large), bool(sweep), (x, y)):
                    add(seg)
                pos = (x, y)
                prev_cubic_ctrl = prev_quad_ctrl = None
            else:
                raise MalformedDocument(f"unsupported path command {cmd!r}")
    flush()
    return [sp for sp in subpaths if sp]


def _shape_subpaths(tag: str, el: ET.Element) -> list[Subpath]:
    if tag == "path":
        return parse_path_data(el.attrib.get("d", ""))
    if tag == "rect":
        return _rect_subpaths(el)
    if tag == "circle":
        r = float(el.attrib.get("r", 0))
        return _ellipse_subpaths(float(el.attrib.get("cx", 0)), float(el.attrib.get("cy", 0)), r, r)
    if tag == "ellipse":
        return _ellipse_subpaths(
            float(el.attrib.get("cx", 0)),
            float(el.attrib.get("cy", 0)),
            float(el.attrib.get("rx", 0)),
            float(el.attrib.get("ry", 0)),
        )
    if tag == "polygon":
        return _polygon_subpaths(el)
    raise AssertionError(tag)


# ---------------------------------------------------------------------------
# stroke -> fill outline (lenient mode)
# ---------------------------------------------------------------------------


def _offset_ring(poly, dist: float):
    """Offset a closed polygon by dist along each edge's left normal, bevel joins."""
    import numpy as np

    n = len(poly)
    out = []
    for i in range(n):
        a = poly[i]
        b = poly[(i + 1) % n]
        dx, dy = b[0] - a[0], b[1] - a[1]
        ln = math.hypot(dx, dy)
        if ln == 0:
            continue
        nx, ny = dy / ln, -dx / ln  # left normal in y-down coords
        out.append((a[0] + nx * dist, a[1] + ny * dist))
        out.append((b[0] + nx * dist, b[1] + ny * dist))
    return np.asarray(out) if out else None


def _stroke_subpaths(subpaths: list[Subpath], width: float, tol: float = 0.1) -> list[Subpath]:
    half = width / 2.0
    rings: list[Subpath] = []
    for sp in subpaths:
        poly = flatten_subpath(sp, tol)
        if len(poly) < 3:
            continue
        outer = _offset_ring(poly, -half)
        inner = _offset_ring(poly, +half)
        if outer is not None and len(outer) >= 3:
            rings.append(polygon_subpath(outer))
        if inner is not None and len(inner) >= 3:
            rings.append(polygon_subpath(inner[::-1]))
    return rings


# ---------------------------------------------------------------------------
# document walk
# ---------------------------------------------------------------------------


def parse_svg(text: str, strict: bool = True) -> LayeredSvg:
    """Parse an SVG document string into ordered fill layers.

    Layers come back in document paint order. `strict` rejects strokes and
    translucency; lenient mode converts strokes to fill layers stacked
    immediately above their shape and ignores opacity.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise MalformedDocument(f"XML parse error: {exc}") from exc
    if _strip_ns(root.tag) != "svg":
        raise MalformedDocument(f"root element is <{_strip_ns(root.tag)}>, not <svg>")

    if strict:
        for el in root.iter():
            if _strip_ns(el.tag) in _REJECTED_TAGS:
                raise UnsupportedFeature(f"<{_strip_ns(el.tag)}> is outside the supported subset")

    width_attr = root.attrib.get("width")
    height_attr = root.attrib.get("height")
    viewbox = root.attrib.get("viewBox")
    if viewbox:
        vb = _floats(viewbox)
        if len(vb) != 4 or vb[2] <= 0 or vb[3] <= 0:
            raise MalformedDocument(f"bad viewBox {viewbox!r}")
        vbx, vby, vbw, vbh = vb
    elif width_attr and height_attr:
        vbx = vby = 0.0
        vbw = _parse_length(width_attr, "width")
        vbh = _parse_length(height_attr, "height")
    else:
        raise MalformedDocument("document has neither viewBox nor width/height")

    width = _parse_length(width_attr, "width") if width_attr else vbw
    height = _parse_length(height_attr, "height") if height_attr else vbh
    if width <= 0 or height <= 0:
        raise MalformedDocument(f"non-positive canvas {width}x{height}")

    base = Affine.scale(width / vbw, height / vbh) @ Affine.translate(-vbx, -vby)
    layers: list[Layer] = []

    def emit(el: ET.Element, tag: str, ctm: Affine, style: _Style) -> None:
        subpaths = _shape_subpaths(tag, el)
        if not subpaths:
            return
        if not ctm.is_identity():
            subpaths = [transform_subpath(sp, ctm) for sp in subpaths]
        if not style.opaque:
            if strict:
                raise UnsupportedFeature("translucent fill")
        fill = parse_color(style.fill)
        rule = "evenodd" if style.fill_rule == "evenodd" else "nonzero"
        if fill is not None:
            layers.append(Layer(fill=fill, subpaths=subpaths, fill_rule=rule))
        stroke = parse_color(style.stroke) if style.stroke else None
        if stroke is not None:
            if strict:
                raise UnsupportedFeature("stroke painting")
            outline = _stroke_subpaths(subpaths, style.stroke_width)
            if outline:
                layers.append(Layer(fill=stroke, subpaths=outline, fill_rule="nonzero"))

    def walk(el: ET.Element, ctm: Affine, style: _Style) -> None:
        for child in el:
            tag = _strip_ns(child.tag)
            if tag in _IGNORED_TAGS or tag == "defs":
                continue
            child_style = style.child(child)
            child_ctm = ctm
            if "transform" in child.attrib:
                child_ctm = ctm @ _parse_transform(child.attrib["transform"])
            if tag == "g":
                walk(child, child_ctm, child_style)
            elif tag in _SHAPE_TAGS:
                emit(child, tag, child_ctm, child_style)
            elif tag in _REJECTED_TAGS:
                raise UnsupportedFeature(f"<{tag}> is outside the supported subset")
            elif strict:
                raise UnsupportedFeature(f"unknown element <{tag}>")

    root_style = _Style().child(root)
    walk(root, base, root_style)
    return LayeredSvg(width=int(round(width)), height=int(round(height)), layers=layers)
