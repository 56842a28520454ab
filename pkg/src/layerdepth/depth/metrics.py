"""Depth evaluation: scale-invariant normalization, ordering consistency,
and visual-fidelity measures.

Normalization centers on the median and scales by the mean absolute deviation
about it, making every comparison invariant to positive affine rescaling of
either map. The ordering metric samples pixel pairs with a counter-based
generator so the value depends only on (seed, pair index), never on
evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..errors import DimensionMismatch, NoValidPairs, TooSmall, ZeroGroundTruth
from ..svg.model import RasterImage
from .maps import DepthMap

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03

# Rec.601 luma weights
_LUMA = np.array([0.299, 0.587, 0.114])


@dataclass
class NormalizationStats:
    median: float
    mad: float  # mean absolute deviation about the median
    degenerate: bool  # constant map: scale undefined, values only centered


def normalize(d: DepthMap) -> tuple[DepthMap, NormalizationStats]:
    """(d - median) / mean(|d - median|); constant maps are centered and flagged."""
    v = d.values
    m = float(np.median(v))
    s = float(np.mean(np.abs(v - m)))
    if s == 0.0:
        return DepthMap(v - m), NormalizationStats(median=m, mad=0.0, degenerate=True)
    return DepthMap((v - m) / s), NormalizationStats(median=m, mad=s, degenerate=False)


def _check_dims(a: DepthMap, b: DepthMap) -> None:
    if a.values.shape != b.values.shape:
        raise DimensionMismatch(f"{a.values.shape} vs {b.values.shape}")


def mae_normalized(gt: DepthMap, pred: DepthMap) -> float:
    _check_dims(gt, pred)
    ng, _ = normalize(gt)
    np_, _ = normalize(pred)
    return float(np.mean(np.abs(ng.values - np_.values)))


def mse_normalized(gt: DepthMap, pred: DepthMap) -> float:
    _check_dims(gt, pred)
    ng, _ = normalize(gt)
    np_, _ = normalize(pred)
    return float(np.mean((ng.values - np_.values) ** 2))


# ---------------------------------------------------------------------------
# ordering consistency
# ---------------------------------------------------------------------------


@dataclass
class OrderMetricConfig:
    pair_count: int | None = None  # defaults to floor(H * W / 50)
    seed: int = 0
    tie_policy: str = "pred_tie_fails"

    def __post_init__(self):
        if self.pair_count is not None and self.pair_count < 1:
            raise ValueError("pair_count must be >= 1")
        if self.tie_policy != "pred_tie_fails":
            raise ValueError(f"unknown tie policy {self.tie_policy!r}")


_SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SM_M1 = np.uint64(0xBF58476D1CE4E5B9)
_SM_M2 = np.uint64(0x94D049BB133111EB)


def _splitmix64_stream(seed: int, count: int) -> np.ndarray:
    """Elements 1..count of the splitmix64 stream for `seed`, vectorized."""
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + np.arange(1, count + 1, dtype=np.uint64) * _SM_GAMMA
        z = (z ^ (z >> np.uint64(30))) * _SM_M1
        z = (z ^ (z >> np.uint64(27))) * _SM_M2
        return z ^ (z >> np.uint64(31))


def sample_pixel_pairs(seed: int, pair_count: int, n_pixels: int) -> tuple[np.ndarray, np.ndarray]:
    """Pair i is derived from stream positions 2i+1 and 2i+2, so any subset of
    pairs can be regenerated independently of the others."""
    h = _splitmix64_stream(seed, 2 * pair_count)
    flat = (h % np.uint64(n_pixels)).astype(np.int64)
    return flat[0::2], flat[1::2]


def order_consistency(gt: DepthMap, pred: DepthMap, cfg: OrderMetricConfig | None = None) -> float:
    """Fraction of sampled pixel pairs whose relative order the prediction keeps.

    Pairs with equal ground-truth values are discarded (not re-drawn);
    prediction ties on kept pairs count as not preserved.
    """
    cfg = cfg or OrderMetricConfig()
    _check_dims(gt, pred)
    gv = gt.values.ravel()
    pv = pred.values.ravel()
    pairs = cfg.pair_count if cfg.pair_count is not None else gv.size // 50
    if pairs < 1:
        raise ValueError("pair_count must be >= 1 (map too small for the default)")
    p, q = sample_pixel_pairs(cfg.seed, pairs, gv.size)
    dg = gv[p] - gv[q]
    keep = dg != 0
    kept = int(keep.sum())
    if kept == 0:
        raise NoValidPairs("no sampled pair has distinct ground-truth values")
    dp = pv[p[keep]] - pv[q[keep]]
    preserved = int(np.count_nonzero(np.sign(dg[keep]) == np.sign(dp)))
    return preserved / kept


def order_consistency_exhaustive(gt: DepthMap, pred: DepthMap) -> float:
    """Same definition over every unordered pixel pair; oracle for small maps."""
    _check_dims(gt, pred)
    gv = gt.values.ravel()
    pv = pred.values.ravel()
    n = gv.size
    kept = 0
    preserved = 0
    block = max(1, 5_000_000 // max(n, 1))
    cols = np.arange(n)
    for s in range(0, n, block):
        e = min(s + block, n)
        dg = gv[s:e, None] - gv[None, :]
        upper = cols[None, :] > np.arange(s, e)[:, None]
        keep = (dg != 0) & upper
        kept += int(keep.sum())
        if not keep.any():
            continue
        dp = pv[s:e, None] - pv[None, :]
        preserved += int(np.count_nonzero(np.sign(dg[keep]) == np.sign(dp[keep])))
    if kept == 0:
        raise NoValidPairs("ground truth is constant")
    return preserved / kept


# ---------------------------------------------------------------------------
# visual fidelity
# ---------------------------------------------------------------------------


def rgb_mse(a: RasterImage, b: RasterImage) -> float:
    """Mean squared RGB difference with channels scaled to [0, 1]."""
    a.same_size(b)
    fa = a.pixels.astype(np.float64) / 255.0
    fb = b.pixels.astype(np.float64) / 255.0
    return float(np.mean((fa - fb) ** 2))


def _gaussian_kernel(sigma: float, radius: int) -> np.ndarray:
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def _convolve_sep(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Separable 2D convolution with edge-repeating 'symmetric' padding."""
    r = len(kernel) // 2
    out = img
    for axis in (0, 1):
        padded = np.pad(out, [(r, r) if ax == axis else (0, 0) for ax in (0, 1)], mode="symmetric")
        acc = np.zeros_like(out, dtype=np.float64)
        for k in range(len(kernel)):
            sl = [slice(None), slice(None)]
            sl[axis] = slice(k, k + out.shape[axis])
            acc += kernel[k] * padded[tuple(sl)]
        out = acc
    return out


def luma(image: RasterImage) -> np.ndarray:
    """Rec.601 luma in [0, 1]."""
    return image.pixels.astype(np.float64) @ _LUMA / 255.0


def ssim(a: RasterImage, b: RasterImage) -> float:
    """Mean local structural similarity on luma, Gaussian 11x11 window.

    Wang et al. constants: sigma 1.5, K1 0.01, K2 0.03, dynamic range 1.0,
    population covariance; a half-window border is excluded from the mean.
    """
    a.same_size(b)
    if min(a.width, a.height) < SSIM_WINDOW:
        raise TooSmall(f"images must be at least {SSIM_WINDOW} px per side")
    x = luma(a)
    y = luma(b)
    radius = SSIM_WINDOW // 2
    kernel = _gaussian_kernel(SSIM_SIGMA, radius)

    ux = _convolve_sep(x, kernel)
    uy = _convolve_sep(y, kernel)
    uxx = _convolve_sep(x * x, kernel)
    uyy = _convolve_sep(y * y, kernel)
    uxy = _convolve_sep(x * y, kernel)
    vx = uxx - ux * ux
    vy = uyy - uy * uy
    vxy = uxy - ux * uy

    c1 = SSIM_K1**2
    c2 = SSIM_K2**2
    s = ((2 * ux * uy + c1) * (2 * vxy + c2)) / ((ux**2 + uy**2 + c1) * (vx + vy + c2))
    interior = s[radius:-radius, radius:-radius]
    return float(interior.mean())


def path_count_error(n_gt: int, n_pred: int) -> float:
    """|N - N~| / N."""
    if n_gt < 1:
        raise ZeroGroundTruth("ground-truth path count must be >= 1")
    return abs(n_gt - n_pred) / n_gt


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def round_sig(x: float, digits: int = 6) -> float:
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


@dataclass
class MetricsReport:
    order: float | None = None
    mae: float | None = None
    mse: float | None = None
    path_count_error: float | None = None
    rgb_mse: float | None = None
    ssim: float | None = None

    def __post_init__(self):
        if self.order is not None and not (0.0 <= self.order <= 1.0):
            raise ValueError(f"order must be in [0, 1], got {self.order}")

    def to_dict(self) -> dict:
        return {k: round_sig(v) for k, v in asdict(self).items() if v is not None}
