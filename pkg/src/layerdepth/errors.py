"""Exception types shared across the package."""


class LayerDepthError(Exception):
    """Base class for all layerdepth errors."""


class UnsupportedFeature(LayerDepthError):
    """The SVG document uses an element or attribute outside the supported subset."""


class MalformedDocument(LayerDepthError):
    """The SVG document cannot be parsed."""


class IndexOverflow(LayerDepthError):
    """A layer index does not fit in 24 bits."""


class DegenerateGeometry(LayerDepthError):
    """Zero-area canvas or otherwise unusable geometry."""


class EmptyMap(LayerDepthError):
    """A depth map with no pixels."""


class DimensionMismatch(LayerDepthError):
    """Two rasters/maps that must share dimensions do not."""


class NoValidPairs(LayerDepthError):
    """Ordering metric found no pixel pair with distinct ground-truth values."""


class TooSmall(LayerDepthError):
    """Input below the minimum size an operation supports."""


class ZeroGroundTruth(LayerDepthError):
    """Path-count error is undefined for a ground truth of zero paths."""


class UnsortedEdges(LayerDepthError):
    """Bin edges must be strictly ascending."""


class DecodeError(LayerDepthError):
    """An image file could not be decoded as the declared format."""


class UnsupportedFormat(LayerDepthError):
    """Unknown depth-image format name."""


class RankOutOfRange(LayerDepthError):
    """Cluster rank outside 1..K."""


class EmptyMask(LayerDepthError):
    """A boolean mask with no set pixels where one is required."""


class PortInUse(LayerDepthError):
    """The requested TCP port is already bound."""
