"""End-to-end depth-aware vectorization: cluster, rank by depth, merge,
fill occluded holes, trace, and assemble an ordered layered document."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch
from ..svg.model import Layer, LayeredSvg, RasterImage
from .clustering import ClusterMap, cluster_colors, merge_similar_layers, order_by_depth
from .config import PipelineConfig
from .holes import fill_holes
from .tracing import trace_mask


@dataclass
class StackLayer:
    mask: np.ndarray  # extended boolean mask after hole filling
    color: tuple[int, int, int]
    depth_rank: int  # 1-based; 1 paints first


@dataclass
class OrderedLayerStack:
    layers: list[StackLayer]


def _color_u8(mean_color) -> tuple[int, int, int]:
    return tuple(int(round(c * 255)) for c in mean_color)


def build_layer_stack(cm: ClusterMap) -> OrderedLayerStack:
    """Hole-filled masks for every rank of an ordered cluster map."""
    layers = [
        StackLayer(
            mask=fill_holes(cm, rank),
            color=_color_u8(cm.clusters[rank - 1].mean_color),
            depth_rank=rank,
        )
        for rank in range(1, len(cm.clusters) + 1)
    ]
    return OrderedLayerStack(layers=layers)


def vectorize(img: RasterImage, depth, cfg: PipelineConfig | None = None) -> LayeredSvg:
    """Raster plus depth map -> layered SVG ordered back to front."""
    cfg = cfg or PipelineConfig()
    from ..depth.maps import DepthMap

    dvals = depth.values if isinstance(depth, DepthMap) else np.asarray(depth, dtype=np.float64)
    if dvals.shape != img.pixels.shape[:2]:
        raise DimensionMismatch(f"depth {dvals.shape} vs image {img.pixels.shape[:2]}")

    cm = cluster_colors(img, cfg)
    cm = order_by_depth(cm, dvals)
    cm = merge_similar_layers(cm, cfg.merge_tau)
    stack = build_layer_stack(cm)

    layers = [
        Layer(fill=sl.color, subpaths=trace_mask(sl.mask, cfg), fill_rule="nonzero")
        for sl in stack.layers
    ]
    return LayeredSvg(width=img.width, height=img.height, layers=layers)
