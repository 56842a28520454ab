from .model import (
    IndexRaster,
    Layer,
    LayeredSvg,
    MAX_LAYER_INDEX,
    RasterImage,
    decode_layer_index,
    encode_layer_index,
    index_to_rgb,
    rgb_to_index,
)
from .parse import parse_svg
from .raster import fill_polygons, rasterize, rasterize_color, rasterize_index
from .curate import CurationResult, curate, merge_consecutive_layers
from .serialize import serialize_svg

__all__ = [
    "IndexRaster",
    "Layer",
    "LayeredSvg",
    "MAX_LAYER_INDEX",
    "RasterImage",
    "CurationResult",
    "curate",
    "decode_layer_index",
    "encode_layer_index",
    "fill_polygons",
    "index_to_rgb",
    "merge_consecutive_layers",
    "parse_svg",
    "rasterize",
    "rasterize_color",
    "rasterize_index",
    "rgb_to_index",
    "serialize_svg",
]
