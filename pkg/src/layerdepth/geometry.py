"""Path geometry: segments, Bezier flattening, affine transforms.

A subpath is a list of consecutive segments forming a closed outline.
Segments are plain tuples::

    ("line",  (x0, y0), (x1, y1))
    ("cubic", (x0, y0), (c1x, c1y), (c2x, c2y), (x1, y1))

Coordinates are pixels, x right, y down. Each segment starts where the
previous one ends and the last segment ends at the first segment's start.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

Point = tuple[float, float]
Segment = tuple
Subpath = list

# Subdivision stops once control points sit within this many pixels of the
# chord; 0.1 px keeps index rasters free of flattening artifacts.
DEFAULT_FLATTEN_TOL = 0.1

_MAX_SUBDIV_DEPTH = 32


def line(p0: Point, p1: Point) -> Segment:
    return ("line", (float(p0[0]), float(p0[1])), (float(p1[0]), float(p1[1])))


def cubic(p0: Point, c1: Point, c2: Point, p1: Point) -> Segment:
    return (
        "cubic",
        (float(p0[0]), float(p0[1])),
        (float(c1[0]), float(c1[1])),
        (float(c2[0]), float(c2[1])),
        (float(p1[0]), float(p1[1])),
    )


def segment_start(seg: Segment) -> Point:
    return seg[1]


def segment_end(seg: Segment) -> Point:
    return seg[-1]


def polygon_subpath(points: Iterable[Point]) -> Subpath:
    """Closed subpath of line segments through `points` (last edge closes the loop)."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise ValueError("polygon needs at least 3 points")
    segs = [line(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]
    return segs


def subpath_is_closed(subpath: Subpath, eps: float = 1e-9) -> bool:
    if not subpath:
        return False
    x0, y0 = segment_start(subpath[0])
    x1, y1 = segment_end(subpath[-1])
    return abs(x0 - x1) <= eps and abs(y0 - y1) <= eps


def _dist_to_chord(p: Point, a: Point, b: Point) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    n = (dx * dx + dy * dy) ** 0.5
    if n == 0.0:
        return ((px - ax) ** 2 + (py - ay) ** 2) ** 0.5
    return abs(dx * (py - ay) - dy * (px - ax)) / n


def flatten_cubic(p0: Point, c1: Point, c2: Point, p1: Point, tol: float) -> list[Point]:
    """Polyline approximation of a cubic, excluding p0 and including p1."""
    out: list[Point] = []

    def rec(a, b, c, d, depth):
        if depth >= _MAX_SUBDIV_DEPTH or (
            _dist_to_chord(b, a, d) <= tol and _dist_to_chord(c, a, d) <= tol
        ):
            out.append(d)
            return
        # de Casteljau split at t = 1/2
        ab = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        bc = ((b[0] + c[0]) / 2, (b[1] + c[1]) / 2)
        cd = ((c[0] + d[0]) / 2, (c[1] + d[1]) / 2)
        abc = ((ab[0] + bc[0]) / 2, (ab[1] + bc[1]) / 2)
        bcd = ((bc[0] + cd[0]) / 2, (bc[1] + cd[1]) / 2)
        mid = ((abc[0] + bcd[0]) / 2, (abc[1] + bcd[1]) / 2)
        rec(a, ab, abc, mid, depth + 1)
        rec(mid, bcd, cd, d, depth + 1)

    rec(p0, c1, c2, p1, 0)
    return out


def cubic_point(p0: Point, c1: Point, c2: Point, p1: Point, t: float) -> Point:
    s = 1.0 - t
    x = s**3 * p0[0] + 3 * s * s * t * c1[0] + 3 * s * t * t * c2[0] + t**3 * p1[0]
    y = s**3 * p0[1] + 3 * s * s * t * c1[1] + 3 * s * t * t * c2[1] + t**3 * p1[1]
    return (x, y)


def flatten_subpath(subpath: Subpath, tol: float = DEFAULT_FLATTEN_TOL) -> np.ndarray:
    """Closed polygon (N, 2) approximating `subpath`; last point is not repeated."""
    pts: list[Point] = [segment_start(subpath[0])]
    for seg in subpath:
        if seg[0] == "line":
            pts.append(seg[2])
        elif seg[0] == "cubic":
            pts.extend(flatten_cubic(seg[1], seg[2], seg[3], seg[4], tol))
        else:
            raise ValueError(f"unknown segment kind {seg[0]!r}")
    # drop the closing duplicate and any zero-length steps
    poly = [pts[0]]
    for p in pts[1:]:
        if p != poly[-1]:
            poly.append(p)
    if len(poly) > 1 and poly[-1] == poly[0]:
        poly.pop()
    return np.asarray(poly, dtype=np.float64)


def polygon_area(points: np.ndarray) -> float:
    """Signed shoelace area in y-down pixel coordinates.

    Negative for loops that run counter-clockwise on screen.
    """
    x = points[:, 0]
    y = points[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


@dataclass(frozen=True)
class Affine:
    """2D affine map (a c e; b d f) applied as (x, y) -> (a x + c y + e, b x + d y + f)."""

    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0
    e: float = 0.0
    f: float = 0.0

    def apply(self, p: Point) -> Point:
        x, y = p
        return (self.a * x + self.c * y + self.e, self.b * x + self.d * y + self.f)

    def __matmul__(self, other: "Affine") -> "Affine":
        # self after other: self(other(p))
        return Affine(
            a=self.a * other.a + self.c * other.b,
            b=self.b * other.a + self.d * other.b,
            c=self.a * other.c + self.c * other.d,
            d=self.b * other.c + self.d * other.d,
            e=self.a * other.e + self.c * other.f + self.e,
            f=self.b * other.e + self.d * other.f + self.f,
        )

    def is_identity(self) -> bool:
        return self == Affine()

    @staticmethod
    def translate(tx: float, ty: float) -> "Affine":
        return Affine(e=tx, f=ty)

    @staticmethod
    def scale(sx: float, sy: float | None = None) -> "Affine":
        return Affine(a=sx, d=sx if sy is None else sy)

    @staticmethod
    def rotate(degrees: float, cx: float = 0.0, cy: float = 0.0) -> "Affine":
        t = np.deg2rad(degrees)
        cos, sin = float(np.cos(t)), float(np.sin(t))
        rot = Affine(a=cos, b=sin, c=-sin, d=cos)
        if cx == 0.0 and cy == 0.0:
            return rot
        return Affine.translate(cx, cy) @ rot @ Affine.translate(-cx, -cy)


def transform_subpath(subpath: Subpath, t: Affine) -> Subpath:
    out = []
    for seg in subpath:
        if seg[0] == "line":
            out.append(("line", t.apply(seg[1]), t.apply(seg[2])))
        else:
            out.append(("cubic", t.apply(seg[1]), t.apply(seg[2]), t.apply(seg[3]), t.apply(seg[4])))
    return out
