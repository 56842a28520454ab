from .clustering import ClusterInfo, ClusterMap, cluster_colors, merge_similar_layers, order_by_depth
from .config import PipelineConfig
from .holes import fill_holes
from .tracing import simplify_ring, trace_mask
from .vectorize import OrderedLayerStack, StackLayer, build_layer_stack, vectorize

__all__ = [
    "ClusterInfo",
    "ClusterMap",
    "OrderedLayerStack",
    "PipelineConfig",
    "StackLayer",
    "build_layer_stack",
    "cluster_colors",
    "fill_holes",
    "merge_similar_layers",
    "order_by_depth",
    "simplify_ring",
    "trace_mask",
    "vectorize",
]
