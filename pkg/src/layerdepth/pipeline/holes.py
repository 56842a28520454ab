"""Occlusion-aware mask extension: pixels hidden by higher-ranked clusters
adopt the in/out membership of their nearest visible-or-lower pixel.

Exact Euclidean nearest with ties resolved toward the row-major-first source,
so results match a brute-force nearest-source scan bit for bit.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import distance_transform_edt

from ..errors import RankOutOfRange
from .clustering import ClusterMap


def _rowmajor_first_membership(r0: int, c0: int, k: int, source: np.ndarray, member: np.ndarray) -> bool:
    """Membership of the first source pixel (row-major) at squared distance k."""
    h, w = source.shape
    radius = math.isqrt(k)
    for dy in range(-radius, radius + 1):
        rr = r0 + dy
        if rr < 0 or rr >= h:
            continue
        rem = k - dy * dy
        dx = math.isqrt(rem)
        if dx * dx != rem:
            continue
        for cc in ((c0,) if dx == 0 else (c0 - dx, c0 + dx)):
            if 0 <= cc < w and source[rr, cc]:
                return bool(member[rr, cc])
    raise AssertionError("no source at the claimed nearest distance")


def fill_holes(cm: ClusterMap, rank: int) -> np.ndarray:
    """Extended boolean mask for the cluster holding `rank` (1-based).

    Pixels of higher rank adopt the membership (rank == n vs rank < n) of
    their nearest pixel with rank <= n; pixels at the rank stay in, pixels
    below it are never added.
    """
    k = len(cm.clusters)
    if not 1 <= rank <= k:
        raise RankOutOfRange(f"rank {rank} outside 1..{k}")
    cid = rank - 1
    labels = cm.labels
    at = labels == cid
    candidates = labels > cid
    if not candidates.any():
        return at.copy()
    below = labels < cid
    if not below.any():
        # every nearest source belongs to the layer itself
        return at | candidates

    d_at = distance_transform_edt(~at)
    d_below = distance_transform_edt(~below)
    # pixel coordinates are integers, so squared distances are exact integers
    sq_at = np.rint(d_at * d_at).astype(np.int64)
    sq_below = np.rint(d_below * d_below).astype(np.int64)

    adopt = sq_at < sq_below
    ties = candidates & (sq_at == sq_below)
    if ties.any():
        source = labels <= cid
        for r, c in np.argwhere(ties):
            adopt[r, c] = _rowmajor_first_membership(
                int(r), int(c), int(sq_at[r, c]), source, at
            )
    return at | (candidates & adopt)
