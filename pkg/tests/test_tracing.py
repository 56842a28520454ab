import numpy as np
import pytest

from layerdepth import PipelineConfig, trace_mask
from layerdepth.errors import EmptyMask
from layerdepth.geometry import flatten_subpath, polygon_area
from layerdepth.svg.raster import fill_polygons


def re_rasterize(subpaths, shape):
    polys = [flatten_subpath(sp) for sp in subpaths]
    return fill_polygons(polys, shape[1], shape[0], "nonzero")


def iou(a, b):
    return (a & b).sum() / max((a | b).sum(), 1)


def disk_mask(h, w, cx, cy, r):
    yy, xx = np.mgrid[0:h, 0:w]
    return (xx + 0.5 - cx) ** 2 + (yy + 0.5 - cy) ** 2 <= r * r


def test_single_pixel_square():
    mask = np.zeros((5, 6), dtype=bool)
    mask[2, 3] = True
    subpaths = trace_mask(mask)
    assert len(subpaths) == 1
    pts = {seg[1] for seg in subpaths[0]}
    assert pts == {(3, 2), (4, 2), (4, 3), (3, 3)}


def test_rectangle_simplifies_to_four_vertices():
    mask = np.zeros((8, 8), dtype=bool)
    mask[2:6, 1:7] = True
    subpaths = trace_mask(mask)
    assert len(subpaths) == 1
    assert len(subpaths[0]) == 4


def test_disk_epsilon_one_iou():
    mask = disk_mask(48, 48, 24, 24, 20)
    subpaths = trace_mask(mask, PipelineConfig(trace_epsilon=1.0))
    back = re_rasterize(subpaths, mask.shape)
    assert iou(back, mask) >= 0.98
    # simplification actually trims the staircase
    assert len(subpaths[0]) < np.count_nonzero(mask[:, 24]) * 4


def test_exact_reconstruction_at_zero_epsilon():
    rng = np.random.default_rng(0)
    for _ in range(8):
        mask = rng.random((24, 31)) < 0.45
        if not mask.any():
            continue
        back = re_rasterize(trace_mask(mask), mask.shape)
        assert np.array_equal(back, mask)


def test_hole_orientation_opposite():
    mask = np.zeros((12, 12), dtype=bool)
    mask[2:10, 2:10] = True
    mask[5:7, 5:7] = False
    subpaths = trace_mask(mask)
    assert len(subpaths) == 2
    areas = sorted(polygon_area(flatten_subpath(sp)) for sp in subpaths)
    assert areas[0] < 0 < areas[1]  # outer loop and hole wind opposite ways
    assert abs(areas[0]) > abs(areas[1])
    back = re_rasterize(subpaths, mask.shape)
    assert np.array_equal(back, mask)


def test_diagonal_checkerboard_separates():
    mask = np.zeros((4, 4), dtype=bool)
    mask[1, 1] = mask[2, 2] = True
    subpaths = trace_mask(mask)
    assert len(subpaths) == 2
    back = re_rasterize(subpaths, mask.shape)
    assert np.array_equal(back, mask)


def test_multiple_components():
    mask = np.zeros((10, 20), dtype=bool)
    mask[2:5, 2:6] = True
    mask[6:9, 12:18] = True
    subpaths = trace_mask(mask)
    assert len(subpaths) == 2
    assert np.array_equal(re_rasterize(subpaths, mask.shape), mask)


def test_curve_fit_disk():
    mask = disk_mask(64, 64, 32, 32, 24)
    subpaths = trace_mask(mask, PipelineConfig(trace_epsilon=1.0, curve_fit=True))
    kinds = {seg[0] for sp in subpaths for seg in sp}
    assert "cubic" in kinds
    back = re_rasterize(subpaths, mask.shape)
    assert iou(back, mask) >= 0.97
    # far fewer segments than boundary pixels
    assert sum(len(sp) for sp in subpaths) < 40


def test_empty_mask_raises():
    with pytest.raises(EmptyMask):
        trace_mask(np.zeros((4, 4), dtype=bool))


def test_full_mask_single_rect():
    mask = np.ones((6, 9), dtype=bool)
    subpaths = trace_mask(mask)
    assert len(subpaths) == 1
    assert len(subpaths[0]) == 4
    assert np.array_equal(re_rasterize(subpaths, mask.shape), mask)
