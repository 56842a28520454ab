"""Color-constant clustering: quantize, connected components, speckle and
similar-color merging. Deterministic alternative to k-means for flat-color art."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import DimensionMismatch
from ..svg.model import RasterImage
from .config import PipelineConfig

_MAX_MERGE_PASSES = 1024


@dataclass(frozen=True)
class ClusterInfo:
    mean_color: tuple[float, float, float]  # RGB in [0, 1]
    pixel_count: int
    median_depth: float | None = None  # set by order_by_depth


@dataclass
class ClusterMap:
    """Dense 0-based label image plus per-cluster statistics.

    After ordering, id k is the cluster of rank k + 1 (rank 1 = backmost)."""

    labels: np.ndarray
    clusters: list[ClusterInfo]

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int32)

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]


def _relabel_by_first_occurrence(labels: np.ndarray) -> np.ndarray:
    flat = labels.ravel()
    _, first_idx, inverse = np.unique(flat, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first_idx, kind="stable"), kind="stable")
    return order[inverse].reshape(labels.shape).astype(np.int32)


def _component_labels(key: np.ndarray) -> np.ndarray:
    """4-connected components of equal values, labeled by first occurrence."""
    h, w = key.shape
    n = h * w
    idx = np.arange(n, dtype=np.int64).reshape(h, w)
    right = key[:, :-1] == key[:, 1:]
    down = key[:-1, :] == key[1:, :]
    rows = np.concatenate([idx[:, :-1][right], idx[:-1, :][down]])
    cols = np.concatenate([idx[:, 1:][right], idx[1:, :][down]])
    graph = coo_matrix(
        (np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n)
    )
    _, labels = connected_components(graph, directed=False)
    return _relabel_by_first_occurrence(labels.reshape(h, w))


def _stats(labels: np.ndarray, rgb01: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = int(labels.max()) + 1
    flat = labels.ravel()
    counts = np.bincount(flat, minlength=k)
    means = np.stack(
        [np.bincount(flat, weights=rgb01[..., c].ravel(), minlength=k) for c in range(3)],
        axis=1,
    )
    means /= counts[:, None]
    return counts, means


def _adjacent_pairs(labels: np.ndarray) -> np.ndarray:
    a = np.concatenate([labels[:, :-1].ravel(), labels[:-1, :].ravel()])
    b = np.concatenate([labels[:, 1:].ravel(), labels[1:, :].ravel()])
    diff = a != b
    lo = np.minimum(a[diff], b[diff])
    hi = np.maximum(a[diff], b[diff])
    if lo.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    return np.unique(np.stack([lo, hi], axis=1), axis=0)


def _apply_remap(labels, counts, means, remap):
    labels = _relabel_by_first_occurrence(remap[labels])
    k = int(labels.max()) + 1
    new_counts = np.zeros(k, dtype=np.int64)
    new_means = np.zeros((k, 3), dtype=np.float64)
    return labels, k, new_counts, new_means


def _merge_speckles(labels, counts, means, min_area, rgb01):
    """Fold components below min_area into the adjacent cluster whose mean
    color is nearest; repeats because merges can create new small survivors."""
    for _ in range(_MAX_MERGE_PASSES):
        k = counts.size
        if k <= 1:
            break
        small = np.flatnonzero(counts < min_area)
        if small.size == 0:
            break
        pairs = _adjacent_pairs(labels)
        neighbors: dict[int, list[int]] = {}
        for lo, hi in pairs:
            neighbors.setdefault(int(lo), []).append(int(hi))
            neighbors.setdefault(int(hi), []).append(int(lo))

        parent = np.arange(k)

        def root(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        work_counts = counts.astype(np.float64).copy()
        work_sums = means * counts[:, None]
        changed = False
        for cid in sorted(small.tolist(), key=lambda c: (counts[c], c)):
            rc = root(cid)
            if rc != cid and work_counts[rc] >= min_area:
                continue  # already absorbed into something big enough
            cand_roots = sorted({root(nb) for nb in neighbors.get(cid, [])} - {rc})
            if not cand_roots:
                continue
            my_mean = work_sums[rc] / work_counts[rc]
            _, target = min(
                (float(np.sum((work_sums[c] / work_counts[c] - my_mean) ** 2)), c)
                for c in cand_roots
            )
            parent[rc] = target
            work_counts[target] += work_counts[rc]
            work_sums[target] += work_sums[rc]
            changed = True
        if not changed:
            break
        remap = np.array([root(i) for i in range(k)])
        labels = _relabel_by_first_occurrence(remap[labels])
        counts, means = _stats(labels, rgb01)
    return labels, counts, means


def _merge_similar_adjacent(labels, counts, means, max_dist):
    """Merge touching clusters whose mean colors sit closer than max_dist."""
    for _ in range(_MAX_MERGE_PASSES):
        if counts.size <= 1:
            break
        pairs = _adjacent_pairs(labels)
        if pairs.size == 0:
            break
        d = np.linalg.norm(means[pairs[:, 0]] - means[pairs[:, 1]], axis=1)
        close = d < max_dist
        if not close.any():
            break
        best = np.lexsort((pairs[close][:, 1], pairs[close][:, 0], d[close]))[0]
        lo, hi = pairs[close][best]
        remap = np.arange(counts.size)
        remap[hi] = lo
        labels = _relabel_by_first_occurrence(remap[labels])
        total = counts[lo] + counts[hi]
        merged_mean = (means[lo] * counts[lo] + means[hi] * counts[hi]) / total
        counts = counts.copy()
        means = means.copy()
        counts[lo] = total
        means[lo] = merged_mean
        keep = np.ones(counts.size, dtype=bool)
        keep[hi] = False
        counts = counts[keep]
        means = means[keep]
    return labels, counts, means


def cluster_colors(img: RasterImage, cfg: PipelineConfig | None = None) -> ClusterMap:
    """Quantize colors, split into 4-connected components, absorb speckles,
    then merge adjacent near-identical clusters."""
    cfg = cfg or PipelineConfig()
    rgb01 = img.pixels.astype(np.float64) / 255.0
    shift = 8 - cfg.color_precision
    q = (img.pixels >> shift).astype(np.int32)
    key = (q[..., 0] << 16) | (q[..., 1] << 8) | q[..., 2]

    labels = _component_labels(key)
    counts, means = _stats(labels, rgb01)
    if cfg.filter_speckle > 0:
        labels, counts, means = _merge_speckles(
            labels, counts, means, cfg.filter_speckle, rgb01
        )
    if cfg.layer_difference > 0:
        labels, counts, means = _merge_similar_adjacent(labels, counts, means, cfg.layer_difference)

    clusters = [
        ClusterInfo(mean_color=tuple(means[i]), pixel_count=int(counts[i]))
        for i in range(counts.size)
    ]
    return ClusterMap(labels=labels, clusters=clusters)


def order_by_depth(cm: ClusterMap, depth) -> ClusterMap:
    """Rank clusters by the lower-middle median of their depth values.

    Equal medians break by pixel count descending (bigger area goes behind),
    then by current id for full determinism. Ids are relabeled so id k holds
    rank k + 1."""
    from ..depth.maps import DepthMap

    if isinstance(depth, DepthMap):
        dvals = depth.values
    else:
        dvals = np.asarray(depth, dtype=np.float64)
    if dvals.shape != cm.labels.shape:
        raise DimensionMismatch(f"{dvals.shape} vs {cm.labels.shape}")

    k = len(cm.clusters)
    flat_lab = cm.labels.ravel()
    flat_d = dvals.ravel()
    order = np.lexsort((flat_d, flat_lab))
    counts = np.bincount(flat_lab, minlength=k)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    med_idx = starts + (counts - 1) // 2  # lower middle of an even-sized sample
    medians = flat_d[order[med_idx]]

    rank_order = sorted(range(k), key=lambda i: (medians[i], -counts[i], i))
    new_id = np.empty(k, dtype=np.int32)
    for new, old in enumerate(rank_order):
        new_id[old] = new
    clusters = [
        replace(cm.clusters[old], median_depth=float(medians[old]))
        for old in rank_order
    ]
    return ClusterMap(labels=new_id[cm.labels], clusters=clusters)


def merge_similar_layers(cm: ClusterMap, tau: float) -> ClusterMap:
    """Merge rank-adjacent clusters with mean colors closer than tau (L2, strict),
    repeating until no adjacent pair qualifies; ranks recompact after each merge."""
    labels = cm.labels.copy()
    clusters = list(cm.clusters)
    while len(clusters) > 1:
        merged = False
        for i in range(len(clusters) - 1):
            a, b = clusters[i], clusters[i + 1]
            dist = float(
                np.linalg.norm(np.subtract(a.mean_color, b.mean_color))
            )
            if dist < tau:
                total = a.pixel_count + b.pixel_count
                color = tuple(
                    (np.asarray(a.mean_color) * a.pixel_count + np.asarray(b.mean_color) * b.pixel_count)
                    / total
                )
                clusters[i] = ClusterInfo(
                    mean_color=color, pixel_count=total, median_depth=a.median_depth
                )
                del clusters[i + 1]
                labels = np.where(labels == i + 1, i, labels)
                labels = np.where(labels > i + 1, labels - 1, labels)
                merged = True
                break
        if not merged:
            break
    return ClusterMap(labels=labels, clusters=clusters)
