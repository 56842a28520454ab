"""Heightfield relief meshes from depth maps, with Wavefront OBJ output."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .depth.maps import DepthMap
from .errors import TooSmall


@dataclass
class ReliefMesh:
    vertices: np.ndarray  # (V, 3) float64, (x, y, z)
    triangles: np.ndarray  # (F, 3) int64 vertex indices
    height_scale: float = 1.0

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        if self.triangles.size and (
            self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices)
        ):
            raise ValueError("triangle index out of range")


def default_height_scale(d: DepthMap) -> float:
    return 0.1 * max(d.height, d.width)


def depth_to_mesh(d: DepthMap, height_scale: float | None = None, stride: int = 1) -> ReliefMesh:
    """Grid mesh with one vertex per sampled pixel at (x, y, scale * unit depth).

    Depth is min-max normalized to [0, 1] first (a constant map stays flat at
    zero), so foreground rises by up to `height_scale`. Every cell splits into
    two triangles along its top-left to bottom-right diagonal.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if height_scale is None:
        height_scale = default_height_scale(d)
    if height_scale <= 0:
        raise ValueError("height_scale must be positive")
    v = d.values[::stride, ::stride]
    rows, cols = v.shape
    if rows < 2 or cols < 2:
        raise TooSmall(f"need at least a 2x2 grid after striding, got {rows}x{cols}")

    span = v.max() - v.min()
    unit = (v - v.min()) / span if span > 0 else np.zeros_like(v)
    ys, xs = np.mgrid[0:rows, 0:cols]
    vertices = np.stack(
        [
            (xs * stride).ravel().astype(np.float64),
            (ys * stride).ravel().astype(np.float64),
            (unit * height_scale).ravel(),
        ],
        axis=1,
    )

    r, c = np.mgrid[0 : rows - 1, 0 : cols - 1]
    tl = (r * cols + c).ravel()
    tr = tl + 1
    bl = tl + cols
    br = bl + 1
    upper = np.stack([tl, tr, br], axis=1)
    lower = np.stack([tl, br, bl], axis=1)
    triangles = np.empty((2 * len(tl), 3), dtype=np.int64)
    triangles[0::2] = upper
    triangles[1::2] = lower
    return ReliefMesh(vertices=vertices, triangles=triangles, height_scale=float(height_scale))


def write_obj(mesh: ReliefMesh, path) -> None:
    """ASCII OBJ, LF endings, 6-decimal coordinates, 1-based face indices."""
    lines = []
    for x, y, z in mesh.vertices:
        lines.append(f"v {x:.6f} {y:.6f} {z:.6f}")
    for a, b, c in mesh.triangles:
        lines.append(f"f {a + 1} {b + 1} {c + 1}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_obj(path) -> ReliefMesh:
    vertices = []
    triangles = []
    with open(path) as fh:
        for raw in fh:
            parts = raw.split()
            if not parts:
                continue
            if parts[0] == "v":
                vertices.append([float(p) for p in parts[1:4]])
            elif parts[0] == "f":
                triangles.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return ReliefMesh(
        vertices=np.asarray(vertices, dtype=np.float64),
        triangles=np.asarray(triangles, dtype=np.int64),
    )
