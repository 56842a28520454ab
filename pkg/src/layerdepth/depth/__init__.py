from .maps import (
    DEPTH_FORMATS,
    DepthMap,
    bin_depth,
    load_color_png,
    load_depth,
    load_index_png,
    save_color_png,
    save_index_png,
)
from .metrics import (
    MetricsReport,
    NormalizationStats,
    OrderMetricConfig,
    luma,
    mae_normalized,
    mse_normalized,
    normalize,
    order_consistency,
    order_consistency_exhaustive,
    path_count_error,
    rgb_mse,
    round_sig,
    sample_pixel_pairs,
    ssim,
)

__all__ = [
    "DEPTH_FORMATS",
    "DepthMap",
    "MetricsReport",
    "NormalizationStats",
    "OrderMetricConfig",
    "bin_depth",
    "load_color_png",
    "load_depth",
    "load_index_png",
    "luma",
    "mae_normalized",
    "mse_normalized",
    "normalize",
    "order_consistency",
    "order_consistency_exhaustive",
    "path_count_error",
    "rgb_mse",
    "round_sig",
    "sample_pixel_pairs",
    "save_color_png",
    "save_index_png",
    "ssim",
]
