"""Dataset curation: merge consecutive same-color layers, reject ambiguous docs.

Ambiguity rule: after merging, a document is rejected when a pixel exists
where an upper layer covers a spot that a lower layer of the same color both
covers and would show through a render without that upper layer. Such files
give contradictory layer-index supervision for one color.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import DEFAULT_FLATTEN_TOL, flatten_subpath
from .model import Layer, LayeredSvg
from .raster import fill_polygons, layer_polygons, paint_index


@dataclass
class CurationResult:
    accepted: bool
    curated: LayeredSvg | None
    reason: str | None = None
    merged_layers: int = 0  # how many layers the consecutive merge removed


def _winding_at(polys: list[np.ndarray], px: float, py: float) -> int:
    """Signed winding at a point, same half-open crossing rules as the rasterizer."""
    wind = 0
    for poly in polys:
        a = poly
        b = np.roll(poly, -1, axis=0)
        for (x0, y0), (x1, y1) in zip(a, b):
            ya, yb = (y1, y0) if y0 > y1 else (y0, y1)
            if not (ya <= py < yb):
                continue
            x = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
            if x <= px:
                wind += -1 if y0 > y1 else 1
    return wind


def _crossings_at(polys: list[np.ndarray], px: float, py: float) -> int:
    count = 0
    for poly in polys:
        a = poly
        b = np.roll(poly, -1, axis=0)
        for (x0, y0), (x1, y1) in zip(a, b):
            ya, yb = (y1, y0) if y0 > y1 else (y0, y1)
            if not (ya <= py < yb):
                continue
            x = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
            if x <= px:
                count += 1
    return count


def _interior_pixel_center(poly: np.ndarray) -> tuple[float, float] | None:
    """Center of some pixel inside the ring, or None for sub-pixel rings."""
    x0 = int(np.floor(poly[:, 0].min()))
    y0 = int(np.floor(poly[:, 1].min()))
    x1 = int(np.ceil(poly[:, 0].max())) + 1
    y1 = int(np.ceil(poly[:, 1].max())) + 1
    w, h = x1 - x0, y1 - y0
    if w <= 0 or h <= 0 or w * h > 4_000_000:
        return None
    local = poly - np.array([x0, y0], dtype=np.float64)
    mask = fill_polygons([local], w, h, "nonzero")
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None
    r, c = hits[0]
    return (x0 + c + 0.5, y0 + r + 0.5)


def _reverse_subpath(sp):
    out = []
    for seg in reversed(sp):
        if seg[0] == "line":
            out.append(("line", seg[2], seg[1]))
        else:
            out.append(("cubic", seg[4], seg[3], seg[2], seg[1]))
    return out


def _union_normalized_subpaths(layer: Layer, tol: float) -> list:
    """Re-orient rings so concatenating them fills the layer's coverage under nonzero.

    Boundary rings are turned positive, hole rings negative, and rings that do
    not change coverage are dropped. Exact for rings that do not cross each
    other, which is what well-formed fill art uses.
    """
    rings = [(sp, flatten_subpath(sp, tol)) for sp in layer.subpaths]
    all_polys = [poly for _, poly in rings if len(poly) >= 3]
    out = []
    for sp, poly in rings:
        if len(poly) < 3:
            continue
        pt = _interior_pixel_center(poly)
        if pt is None:
            continue
        self_wind = _winding_at([poly], *pt)
        if self_wind == 0:
            continue
        if layer.fill_rule == "nonzero":
            w_in = _winding_at(all_polys, *pt)
            covered_in = w_in != 0
            covered_out = (w_in - self_wind) != 0
        else:
            c_in = _crossings_at(all_polys, *pt)
            c_self = _crossings_at([poly], *pt)
            covered_in = c_in % 2 == 1
            covered_out = (c_in - c_self) % 2 == 1
        if covered_in == covered_out:
            continue  # redundant ring, no coverage boundary
        want_positive = covered_in and not covered_out
        positive = self_wind > 0
        out.append(sp if positive == want_positive else _reverse_subpath(sp))
    return out or list(layer.subpaths)


def merge_consecutive_layers(svg: LayeredSvg, tol: float = DEFAULT_FLATTEN_TOL) -> tuple[LayeredSvg, int]:
    """Collapse each run of consecutive layers sharing an exact fill into one layer."""
    merged: list[Layer] = []
    i = 0
    removed = 0
    while i < len(svg.layers):
        j = i
        while j + 1 < len(svg.layers) and svg.layers[j + 1].fill == svg.layers[i].fill:
            j += 1
        if j == i:
            merged.append(svg.layers[i])
        else:
            subpaths = []
            for k in range(i, j + 1):
                subpaths.extend(_union_normalized_subpaths(svg.layers[k], tol))
            merged.append(Layer(fill=svg.layers[i].fill, subpaths=subpaths, fill_rule="nonzero"))
            removed += j - i
        i = j + 1
    return LayeredSvg(width=svg.width, height=svg.height, layers=merged), removed


def curate(svg: LayeredSvg, tol: float = DEFAULT_FLATTEN_TOL) -> CurationResult:
    """Merge consecutive same-color layers, then reject ambiguous same-color overlaps."""
    doc, removed = merge_consecutive_layers(svg, tol)
    n = len(doc.layers)
    if n >= 2:
        geoms = [layer_polygons(layer, None, tol) for layer in doc.layers]
        rules = [layer.fill_rule for layer in doc.layers]
        full = paint_index(
            [(geoms[k], rules[k], k + 1) for k in range(n)], doc.width, doc.height
        )
        visible = [bool(np.any(full == k + 1)) for k in range(n)]
        for b in range(1, n):
            lowers = [
                a
                for a in range(b)
                if doc.layers[a].fill == doc.layers[b].fill and visible[a] and visible[b]
            ]
            if not lowers:
                continue
            cov_b = fill_polygons(geoms[b], doc.width, doc.height, rules[b])
            without_b = paint_index(
                [(geoms[k], rules[k], k + 1) for k in range(n) if k != b],
                doc.width,
                doc.height,
            )
            for a in lowers:
                if np.any(cov_b & (without_b == a + 1)):
                    return CurationResult(
                        accepted=False,
                        curated=None,
                        reason="ambiguous same-color overlap",
                        merged_layers=removed,
                    )
    return CurationResult(accepted=True, curated=doc, merged_layers=removed)
