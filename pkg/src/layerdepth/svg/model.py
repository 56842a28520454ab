"""Core value types: layered vector documents and the rasters derived from them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, IndexOverflow
from ..geometry import Subpath, subpath_is_closed

RGB = tuple[int, int, int]

MAX_LAYER_INDEX = 1 << 24  # indices are encoded across three 8-bit channels


@dataclass
class Layer:
    """One fill layer: a color plus closed outlines filled with a single rule."""

    fill: RGB
    subpaths: list[Subpath]
    fill_rule: str = "nonzero"  # or "evenodd"

    def __post_init__(self):
        if self.fill_rule not in ("nonzero", "evenodd"):
            raise ValueError(f"bad fill rule {self.fill_rule!r}")
        self.fill = tuple(int(c) for c in self.fill)
        if not all(0 <= c <= 255 for c in self.fill):
            raise ValueError(f"fill out of range: {self.fill}")

    def validate(self) -> None:
        if not self.subpaths:
            raise ValueError("layer has no subpaths")
        for sp in self.subpaths:
            if not subpath_is_closed(sp):
                raise ValueError("subpath not closed")


@dataclass
class LayeredSvg:
    """Ordered stack of fill layers; index 0 paints first (backmost)."""

    width: int
    height: int
    layers: list[Layer] = field(default_factory=list)

    def __post_init__(self):
        self.width = int(self.width)
        self.height = int(self.height)
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"canvas must be positive, got {self.width}x{self.height}")

    def validate(self) -> None:
        for layer in self.layers:
            layer.validate()


@dataclass
class RasterImage:
    """H x W 8-bit RGB raster stored as a (H, W, 3) uint8 array."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"expected (H, W, 3) pixels, got {px.shape}")
        self.pixels = px

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def same_size(self, other: "RasterImage") -> None:
        if self.pixels.shape[:2] != other.pixels.shape[:2]:
            raise DimensionMismatch(
                f"{self.pixels.shape[:2]} vs {other.pixels.shape[:2]}"
            )


@dataclass
class IndexRaster:
    """H x W raster of layer indices; 0 marks uncovered canvas, layers are 1-based."""

    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices)
        if idx.ndim != 2:
            raise ValueError(f"expected (H, W) indices, got {idx.shape}")
        if idx.size and (idx.min() < 0 or idx.max() >= MAX_LAYER_INDEX):
            raise IndexOverflow("index outside [0, 2^24)")
        self.indices = idx.astype(np.int32)

    @property
    def width(self) -> int:
        return self.indices.shape[1]

    @property
    def height(self) -> int:
        return self.indices.shape[0]


def encode_layer_index(i: int) -> RGB:
    """Spread a layer index across RGB channels in base 256, low byte in R."""
    if not 0 <= i < MAX_LAYER_INDEX:
        raise IndexOverflow(f"layer index {i} outside [0, 2^24)")
    return (i % 256, (i // 256) % 256, (i // 256**2) % 256)


def decode_layer_index(rgb) -> int:
    """Inverse of encode_layer_index: R + 256 G + 256^2 B."""
    r, g, b = (int(c) for c in rgb)
    return r + 256 * g + 256**2 * b


def index_to_rgb(indices: np.ndarray) -> np.ndarray:
    """Vectorized encode: (H, W) int -> (H, W, 3) uint8 false-color image."""
    idx = np.asarray(indices)
    if idx.size and (idx.min() < 0 or idx.max() >= MAX_LAYER_INDEX):
        raise IndexOverflow("index outside [0, 2^24)")
    out = np.empty(idx.shape + (3,), dtype=np.uint8)
    out[..., 0] = idx % 256
    out[..., 1] = (idx // 256) % 256
    out[..., 2] = (idx // 256**2) % 256
    return out


def rgb_to_index(pixels: np.ndarray) -> np.ndarray:
    """Vectorized decode: (H, W, 3) uint8 -> (H, W) int32."""
    px = np.asarray(pixels).astype(np.int32)
    return px[..., 0] + 256 * px[..., 1] + 256**2 * px[..., 2]
