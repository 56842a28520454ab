"""Mask outlines as closed vector subpaths.

Boundaries follow pixel edges (crack contours) with the covered region kept on
the walker's left, so outer rings and hole rings come out with opposite
orientations and an unsimplified trace re-rasterizes to the exact input mask.
At checkerboard corners the walker turns left, which reads diagonally-touching
pixels as separate regions (4-connectivity, matching the clustering).
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import EmptyMask
from ..geometry import Subpath, cubic, polygon_subpath
from .config import PipelineConfig

# directions as (dx, dy); y grows downward
_LEFT_TURN = {(1, 0): (0, -1), (0, -1): (-1, 0), (-1, 0): (0, 1), (0, 1): (1, 0)}

# share of the simplification budget given to Douglas-Peucker; the remainder
# absorbs staircase noise and chord-recentering residue so the total boundary
# deviation stays within trace_epsilon
_DP_BUDGET = 0.85


def _boundary_edges(mask: np.ndarray):
    """Directed lattice edges (x0, y0) -> (x1, y1) with covered pixels on the left."""
    padded = np.zeros((mask.shape[0] + 2, mask.shape[1] + 2), dtype=bool)
    padded[1:-1, 1:-1] = mask
    inner = padded[1:-1, 1:-1]
    edges = []

    top = inner & ~padded[:-2, 1:-1]
    for r, c in np.argwhere(top):
        edges.append(((c + 1, r), (c, r)))
    bottom = inner & ~padded[2:, 1:-1]
    for r, c in np.argwhere(bottom):
        edges.append(((c, r + 1), (c + 1, r + 1)))
    left = inner & ~padded[1:-1, :-2]
    for r, c in np.argwhere(left):
        edges.append(((c, r), (c, r + 1)))
    right = inner & ~padded[1:-1, 2:]
    for r, c in np.argwhere(right):
        edges.append(((c + 1, r + 1), (c + 1, r)))
    return edges


def _walk_rings(edges) -> list[list[tuple[int, int]]]:
    outgoing: dict[tuple[int, int], list[int]] = {}
    for i, (a, _) in enumerate(edges):
        outgoing.setdefault(a, []).append(i)
    used = [False] * len(edges)
    rings = []
    for start_idx in range(len(edges)):
        if used[start_idx]:
            continue
        ring = []
        idx = start_idx
        while not used[idx]:
            used[idx] = True
            a, b = edges[idx]
            ring.append(a)
            candidates = [j for j in outgoing.get(b, ()) if not used[j]]
            if not candidates:
                break  # ring closed back to its start
            if len(candidates) == 1:
                idx = candidates[0]
                continue
            # checkerboard corner: prefer the left turn to keep regions 4-connected
            din = (b[0] - a[0], b[1] - a[1])
            want = _LEFT_TURN[din]
            nxt = None
            for j in candidates:
                e = edges[j]
                if (e[1][0] - e[0][0], e[1][1] - e[0][1]) == want:
                    nxt = j
                    break
            idx = nxt if nxt is not None else candidates[0]
        rings.append(ring)
    return rings


def _drop_collinear(points: np.ndarray) -> np.ndarray:
    n = len(points)
    if n < 3:
        return points
    prev = np.roll(points, 1, axis=0)
    nxt = np.roll(points, -1, axis=0)
    cross = (points[:, 0] - prev[:, 0]) * (nxt[:, 1] - points[:, 1]) - (
        points[:, 1] - prev[:, 1]
    ) * (nxt[:, 0] - points[:, 0])
    keep = cross != 0
    if keep.sum() < 3:
        return points
    return points[keep]


def _dp_open(points: np.ndarray, eps: float) -> list[int]:
    """Douglas-Peucker on an open polyline; returns kept indices (ends included)."""
    n = len(points)
    keep = [0, n - 1]
    stack = [(0, n - 1)]
    while stack:
        i, j = stack.pop()
        if j <= i + 1:
            continue
        a = points[i]
        b = points[j]
        seg = b - a
        seg_len = math.hypot(seg[0], seg[1])
        mid = points[i + 1 : j]
        if seg_len == 0:
            d = np.hypot(mid[:, 0] - a[0], mid[:, 1] - a[1])
        else:
            d = np.abs(seg[0] * (mid[:, 1] - a[1]) - seg[1] * (mid[:, 0] - a[0])) / seg_len
        worst = int(np.argmax(d))
        if d[worst] > eps:
            k = i + 1 + worst
            keep.append(k)
            stack.append((i, k))
            stack.append((k, j))
    return sorted(set(keep))


def _recenter_chords(points: np.ndarray, kept: list[int]) -> np.ndarray:
    """Rebalance simplification error: each chord shifts along its normal to
    the midrange of its arc's deviations (halving the one-sided error plain
    Douglas-Peucker leaves on convex arcs), and consecutive shifted chords
    intersect to form the new vertices."""
    n = len(points)
    lines = []
    for k in range(len(kept)):
        i, j = kept[k], kept[(k + 1) % len(kept)]
        a, b = points[i], points[j]
        d = b - a
        length = math.hypot(d[0], d[1])
        if length == 0:
            continue
        normal = np.array([d[1], -d[0]]) / length
        arc = points[i : j + 1] if j > i else np.concatenate([points[i:], points[: j + 1]])
        dev = (arc - a) @ normal
        shift = (dev.max() + dev.min()) / 2.0
        lines.append((a + normal * shift, d / length, length))
    verts = []
    for k in range(len(lines)):
        p1, d1, len1 = lines[k - 1]
        p2, d2, _ = lines[k]
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        if abs(cross) < 1e-6:
            verts.append(p2)
            continue
        delta = p2 - p1
        t = (delta[0] * d2[1] - delta[1] * d2[0]) / cross
        if not -2.0 * len1 <= t <= 2.0 * len1:  # near-parallel overshoot
            verts.append(p2)
        else:
            verts.append(p1 + d1 * t)
    return np.asarray(verts, dtype=np.float64)


def simplify_ring(points: np.ndarray, eps: float) -> np.ndarray:
    """Simplify a closed ring; eps == 0 only removes collinear runs."""
    pts = _drop_collinear(np.asarray(points, dtype=np.float64))
    if eps <= 0 or len(pts) <= 4:
        return pts
    # anchor at the lexicographically smallest vertex and the one farthest from it
    a0 = int(np.lexsort((pts[:, 1], pts[:, 0]))[0])
    pts = np.roll(pts, -a0, axis=0)
    d0 = np.hypot(pts[:, 0] - pts[0, 0], pts[:, 1] - pts[0, 1])
    a1 = int(np.argmax(d0))
    if a1 == 0:
        return pts
    first = pts[: a1 + 1]
    second = np.concatenate([pts[a1:], pts[:1]], axis=0)
    budget = eps * _DP_BUDGET
    kept = _dp_open(first, budget)[:-1] + [a1 + i for i in _dp_open(second, budget)[:-1]]
    if len(kept) < 3:
        return pts
    out = _recenter_chords(pts, kept)
    if len(out) < 3:
        return pts
    return out


# ---------------------------------------------------------------------------
# least-squares cubic fitting (Schneider-style)
# ---------------------------------------------------------------------------


def _unit(v):
    n = math.hypot(v[0], v[1])
    return v / n if n else v


def _bezier_point(ctrl, t):
    t = np.asarray(t, dtype=np.float64)[:, None]
    s = 1.0 - t
    return s**3 * ctrl[0] + 3 * s**2 * t * ctrl[1] + 3 * s * t**2 * ctrl[2] + t**3 * ctrl[3]


def _fit_single(points, u, tan_left, tan_right):
    a1 = tan_left[None, :] * (3 * (1 - u) ** 2 * u)[:, None]
    a2 = tan_right[None, :] * (3 * (1 - u) * u**2)[:, None]
    c00 = np.sum(a1 * a1)
    c01 = np.sum(a1 * a2)
    c11 = np.sum(a2 * a2)
    s = 1 - u
    base = (
        (s**3 + 3 * s * s * u)[:, None] * points[0]
        + (u**3 + 3 * s * u * u)[:, None] * points[-1]
    )
    tmp = points - base
    x0 = np.sum(a1 * tmp)
    x1 = np.sum(a2 * tmp)
    det = c00 * c11 - c01 * c01
    alpha_l = (x0 * c11 - c01 * x1) / det if det else 0.0
    alpha_r = (c00 * x1 - c01 * x0) / det if det else 0.0
    seg_len = math.hypot(*(points[-1] - points[0]))
    if alpha_l < 1e-6 * seg_len or alpha_r < 1e-6 * seg_len:
        alpha_l = alpha_r = seg_len / 3.0
    return np.array(
        [points[0], points[0] + tan_left * alpha_l, points[-1] + tan_right * alpha_r, points[-1]]
    )


def _max_error(points, ctrl, u):
    pts = _bezier_point(ctrl, u)
    d = np.sum((pts - points) ** 2, axis=1)
    worst = int(np.argmax(d))
    return float(d[worst]), worst


def fit_cubics(points: np.ndarray, max_sq_error: float) -> list[np.ndarray]:
    """Fit an open polyline with cubics, splitting until the squared error bound holds."""
    if len(points) == 2:
        d = (points[1] - points[0]) / 3.0
        return [np.array([points[0], points[0] + d, points[1] - d, points[1]])]
    tan_left = _unit(points[1] - points[0])
    tan_right = _unit(points[-2] - points[-1])
    return _fit_rec(points, tan_left, tan_right, max_sq_error, depth=0)


def _fit_rec(points, tan_left, tan_right, max_sq_error, depth):
    if len(points) == 2:
        d = (points[1] - points[0]) / 3.0
        return [np.array([points[0], points[0] + tan_left * np.linalg.norm(d), points[1] + tan_right * np.linalg.norm(d), points[1]])]
    chord = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(points, axis=0).T))])
    u = chord / chord[-1] if chord[-1] else np.linspace(0, 1, len(points))
    ctrl = _fit_single(points, u, tan_left, tan_right)
    err, split = _max_error(points, ctrl, u)
    if err <= max_sq_error:
        return [ctrl]
    if depth >= 24 or len(points) <= 3:
        mid = len(points) // 2 if len(points) > 3 else 1
        split = mid
    split = min(max(split, 1), len(points) - 2)
    tan_center = _unit(points[split - 1] - points[split + 1])
    left = _fit_rec(points[: split + 1], tan_left, tan_center, max_sq_error, depth + 1)
    right = _fit_rec(points[split:], -tan_center, tan_right, max_sq_error, depth + 1)
    return left + right


def _sharp_corner_indices(points: np.ndarray) -> np.ndarray:
    """Vertices whose turn angle exceeds 60 degrees."""
    prev = np.roll(points, 1, axis=0)
    nxt = np.roll(points, -1, axis=0)
    v0 = points - prev
    v1 = nxt - points
    dot = np.sum(v0 * v1, axis=1)
    norm = np.hypot(*v0.T) * np.hypot(*v1.T)
    with np.errstate(invalid="ignore", divide="ignore"):
        cosang = np.where(norm > 0, dot / norm, 1.0)
    return np.flatnonzero(cosang < math.cos(math.radians(60)))


def _ring_to_cubics(dense: np.ndarray, eps: float) -> Subpath:
    """Closed dense ring -> cubic segments.

    Corners are found on a coarse simplification so staircase vertices do not
    read as corners, then each dense arc between corners is least-squares fit;
    fitting against the dense points keeps the curve from drifting between
    simplified vertices."""
    a0 = int(np.lexsort((dense[:, 1], dense[:, 0]))[0])
    dense = np.roll(dense, -a0, axis=0)
    d0 = np.hypot(dense[:, 0] - dense[0, 0], dense[:, 1] - dense[0, 1])
    a1 = int(np.argmax(d0))
    coarse_eps = max(eps, 1.0)
    if a1 == 0:
        kept = list(range(len(dense)))
    else:
        first = dense[: a1 + 1]
        second = np.concatenate([dense[a1:], dense[:1]], axis=0)
        kept = _dp_open(first, coarse_eps)[:-1] + [a1 + i for i in _dp_open(second, coarse_eps)[:-1]]
    kept_pts = dense[kept]
    corner_positions = _sharp_corner_indices(kept_pts)
    corners = [kept[i] for i in corner_positions] if corner_positions.size else [0]

    max_sq = max(eps, 0.75) ** 2
    segs: Subpath = []
    for i in range(len(corners)):
        a = corners[i]
        b = corners[(i + 1) % len(corners)]
        if b > a:
            arc = dense[a : b + 1]
        else:
            arc = np.concatenate([dense[a:], dense[: b + 1]], axis=0)
        if len(arc) < 2:
            continue
        for ctrl in fit_cubics(arc, max_sq):
            segs.append(cubic(ctrl[0], ctrl[1], ctrl[2], ctrl[3]))
    return segs


def trace_mask(mask: np.ndarray, cfg: PipelineConfig | None = None) -> list[Subpath]:
    """Closed subpaths outlining a boolean mask.

    Outer rings and holes carry opposite orientations so the set fills
    correctly under the nonzero rule. With trace_epsilon == 0 and no curve
    fitting, re-rasterization reproduces the mask exactly.
    """
    cfg = cfg or PipelineConfig()
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyMask("mask has no covered pixels")
    rings = _walk_rings(_boundary_edges(mask))
    subpaths: list[Subpath] = []
    for ring in rings:
        dense = _drop_collinear(np.asarray(ring, dtype=np.float64))
        if len(dense) < 3:
            continue
        if cfg.curve_fit:
            sp = _ring_to_cubics(dense, cfg.trace_epsilon)
            if sp:
                subpaths.append(sp)
        else:
            pts = simplify_ring(dense, cfg.trace_epsilon)
            if len(pts) >= 3:
                subpaths.append(polygon_subpath(pts))
    if not subpaths:
        raise EmptyMask("mask reduced to nothing after simplification")
    return subpaths
