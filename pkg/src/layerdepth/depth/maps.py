"""Depth map values, PNG ingestion/output, and threshold binning."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image

from ..errors import DecodeError, EmptyMap, UnsortedEdges, UnsupportedFormat
from ..svg.model import IndexRaster, RasterImage, index_to_rgb, rgb_to_index

DEPTH_FORMATS = ("false_color_24", "gray_16", "gray_8")


@dataclass
class DepthMap:
    """H x W real-valued layer-index map; larger values sit nearer the viewer."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"expected (H, W) values, got {v.shape}")
        if v.size == 0:
            raise EmptyMap("depth map has no pixels")
        if not np.all(np.isfinite(v)):
            raise ValueError("depth values must be finite")
        self.values = v

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @staticmethod
    def from_index_raster(raster: IndexRaster) -> "DepthMap":
        return DepthMap(raster.indices.astype(np.float64))


def bin_depth(d: DepthMap, edges) -> IndexRaster:
    """Assign bin k (1-based) where edges[k-2] < value <= edges[k-1].

    With no edges everything lands in bin 1; values above the last edge land
    in bin len(edges) + 1. The split {value > t} is exactly bin 2 of [t].
    """
    edges = np.asarray(list(edges), dtype=np.float64)
    if edges.size and np.any(np.diff(edges) <= 0):
        raise UnsortedEdges(f"edges not strictly ascending: {edges.tolist()}")
    bins = np.searchsorted(edges, d.values, side="left") + 1
    return IndexRaster(bins.astype(np.int32))


# ---------------------------------------------------------------------------
# PNG I/O
# ---------------------------------------------------------------------------


def save_color_png(image: RasterImage, path) -> None:
    Image.fromarray(image.pixels, mode="RGB").save(path, format="PNG")


def save_index_png(raster: IndexRaster, path, gray16: bool = False) -> None:
    """False-color 24-bit by default; 16-bit grayscale when indices permit."""
    if gray16:
        if raster.indices.size and raster.indices.max() >= 65536:
            raise ValueError("indices do not fit 16-bit grayscale")
        img = Image.fromarray(raster.indices.astype(np.uint16))
        img.save(path, format="PNG")
        return
    Image.fromarray(index_to_rgb(raster.indices), mode="RGB").save(path, format="PNG")


def load_color_png(path) -> RasterImage:
    with Image.open(path) as img:
        return RasterImage(np.asarray(img.convert("RGB"), dtype=np.uint8))


def _open_array(path):
    try:
        with Image.open(path) as img:
            return np.asarray(img), img.mode
    except Exception as exc:
        raise DecodeError(f"cannot decode {path}: {exc}") from exc


def load_depth(path, format: str = "auto") -> DepthMap:
    """Read a depth PNG. false_color_24 decodes base-256 RGB; gray formats are raw."""
    if format not in DEPTH_FORMATS + ("auto",):
        raise UnsupportedFormat(f"unknown depth format {format!r}")
    arr, mode = _open_array(path)
    if arr.size == 0:
        raise DecodeError(f"{path}: empty image")
    if format == "auto":
        if arr.ndim == 3:
            format = "false_color_24"
        elif arr.dtype == np.uint8:
            format = "gray_8"
        else:
            format = "gray_16"
    if format == "false_color_24":
        if arr.ndim != 3 or arr.shape[2] < 3:
            raise DecodeError(f"{path}: declared false_color_24 but mode is {mode}")
        return DepthMap(rgb_to_index(arr[..., :3]).astype(np.float64))
    if arr.ndim != 2:
        raise DecodeError(f"{path}: declared {format} but mode is {mode}")
    if format == "gray_8" and arr.dtype != np.uint8:
        raise DecodeError(f"{path}: declared gray_8 but dtype is {arr.dtype}")
    if format == "gray_16" and arr.dtype == np.uint8:
        raise DecodeError(f"{path}: declared gray_16 but file is 8-bit")
    return DepthMap(arr.astype(np.float64))


def load_index_png(path) -> IndexRaster:
    depth = load_depth(path, "auto")
    return IndexRaster(depth.values.astype(np.int32))
