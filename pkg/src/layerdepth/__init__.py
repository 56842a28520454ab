"""layerdepth: layered vector graphics curation, depth metrics, depth-aware
vectorization, relief meshes, and the explorer bundle/serve tooling."""

from . import errors
from .bundle import build_bundle, load_bundle, save_bundle
from .depth import (
    DepthMap,
    MetricsReport,
    NormalizationStats,
    OrderMetricConfig,
    bin_depth,
    load_depth,
    mae_normalized,
    mse_normalized,
    normalize,
    order_consistency,
    order_consistency_exhaustive,
    path_count_error,
    rgb_mse,
    ssim,
)
from .pipeline import (
    ClusterMap,
    PipelineConfig,
    cluster_colors,
    fill_holes,
    merge_similar_layers,
    order_by_depth,
    trace_mask,
    vectorize,
)
from .relief import ReliefMesh, depth_to_mesh, read_obj, write_obj
from .svg import (
    IndexRaster,
    Layer,
    LayeredSvg,
    RasterImage,
    curate,
    decode_layer_index,
    encode_layer_index,
    parse_svg,
    rasterize,
    rasterize_color,
    rasterize_index,
    serialize_svg,
)

__version__ = "0.1.0"

__all__ = [
    "ClusterMap",
    "DepthMap",
    "IndexRaster",
    "Layer",
    "LayeredSvg",
    "MetricsReport",
    "NormalizationStats",
    "OrderMetricConfig",
    "PipelineConfig",
    "RasterImage",
    "ReliefMesh",
    "bin_depth",
    "build_bundle",
    "cluster_colors",
    "curate",
    "decode_layer_index",
    "depth_to_mesh",
    "encode_layer_index",
    "errors",
    "fill_holes",
    "load_bundle",
    "load_depth",
    "mae_normalized",
    "merge_similar_layers",
    "mse_normalized",
    "normalize",
    "order_by_depth",
    "order_consistency",
    "order_consistency_exhaustive",
    "parse_svg",
    "path_count_error",
    "rasterize",
    "rasterize_color",
    "rasterize_index",
    "read_obj",
    "rgb_mse",
    "save_bundle",
    "serialize_svg",
    "ssim",
    "trace_mask",
    "vectorize",
    "write_obj",
]
