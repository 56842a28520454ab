import numpy as np
import pytest

from layerdepth import DepthMap, depth_to_mesh, read_obj, write_obj
from layerdepth.errors import TooSmall
from layerdepth.relief import default_height_scale


def test_2x2_counts():
    mesh = depth_to_mesh(DepthMap(np.array([[0.0, 1.0], [1.0, 0.0]])), height_scale=1.0)
    assert len(mesh.vertices) == 4
    assert len(mesh.triangles) == 2


def test_constant_map_planar():
    mesh = depth_to_mesh(DepthMap(np.full((4, 5), 3.0)), height_scale=2.0)
    assert (mesh.vertices[:, 2] == 0.0).all()


def test_ramp_normals_identical():
    d = DepthMap(np.arange(3, dtype=float)[:, None].repeat(3, axis=1))  # d(i, j) = i
    mesh = depth_to_mesh(d, height_scale=2.0)
    v = mesh.vertices
    normals = []
    for a, b, c in mesh.triangles:
        n = np.cross(v[b] - v[a], v[c] - v[a])
        normals.append(n / np.linalg.norm(n))
    normals = np.asarray(normals)
    # analytically: z rises by scale/2 per row, so every normal is
    # proportional to (0, -scale/2, 1)
    expected = np.array([0.0, -1.0, 1.0])
    expected /= np.linalg.norm(expected)
    assert np.allclose(normals, expected)


def test_counting_laws_random_sizes():
    rng = np.random.default_rng(0)
    for _ in range(12):
        h = int(rng.integers(2, 40))
        w = int(rng.integers(2, 40))
        mesh = depth_to_mesh(DepthMap(rng.uniform(0, 5, (h, w))), height_scale=1.0)
        assert len(mesh.vertices) == h * w
        assert len(mesh.triangles) == 2 * (h - 1) * (w - 1)


def test_stride_counting():
    d = DepthMap(np.zeros((10, 7)) + np.arange(7))
    mesh = depth_to_mesh(d, height_scale=1.0, stride=3)
    rows = -(-10 // 3)  # ceil
    cols = -(-7 // 3)
    assert len(mesh.vertices) == rows * cols
    assert len(mesh.triangles) == 2 * (rows - 1) * (cols - 1)
    assert mesh.vertices[:, 0].max() == (cols - 1) * 3  # x keeps pixel units


def test_raising_one_pixel_moves_one_vertex():
    base = np.zeros((5, 5))
    base[0, 0] = 1.0  # keep min-max span fixed
    bumped = base.copy()
    bumped[2, 3] = 0.5
    m0 = depth_to_mesh(DepthMap(base), height_scale=1.0)
    m1 = depth_to_mesh(DepthMap(bumped), height_scale=1.0)
    diff = np.abs(m0.vertices - m1.vertices).sum(axis=1)
    changed = np.flatnonzero(diff)
    assert len(changed) == 1
    assert changed[0] == 2 * 5 + 3
    assert m1.vertices[changed[0], 2] > m0.vertices[changed[0], 2]


def test_interior_edges_shared_by_two_triangles():
    mesh = depth_to_mesh(DepthMap(np.random.default_rng(1).uniform(0, 1, (6, 6))), height_scale=1.0)
    from collections import Counter

    edges = Counter()
    for tri in mesh.triangles:
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            edges[(min(a, b), max(a, b))] += 1
    counts = set(edges.values())
    assert counts <= {1, 2}
    # boundary edges appear once: 2 * (rows-1 + cols-1) plus the corner diagonals
    assert sum(1 for v in edges.values() if v == 2) > 0


def test_default_height_scale():
    d = DepthMap(np.zeros((10, 30)) + np.arange(30))
    assert default_height_scale(d) == pytest.approx(3.0)
    mesh = depth_to_mesh(d)
    assert mesh.vertices[:, 2].max() == pytest.approx(3.0)


def test_too_small_and_bad_args():
    with pytest.raises(TooSmall):
        depth_to_mesh(DepthMap(np.zeros((1, 5)) + np.arange(5)), height_scale=1.0)
    with pytest.raises(TooSmall):
        depth_to_mesh(DepthMap(np.random.default_rng(0).uniform(0, 1, (6, 6))), height_scale=1.0, stride=6)
    with pytest.raises(ValueError):
        depth_to_mesh(DepthMap(np.zeros((3, 3)) + np.arange(3)), height_scale=0.0)
    with pytest.raises(ValueError):
        depth_to_mesh(DepthMap(np.zeros((3, 3)) + np.arange(3)), stride=0)


def test_obj_roundtrip_and_determinism(tmp_path):
    rng = np.random.default_rng(2)
    mesh = depth_to_mesh(DepthMap(rng.uniform(0, 9, (7, 5))), height_scale=1.5)
    p1 = tmp_path / "a.obj"
    p2 = tmp_path / "b.obj"
    write_obj(mesh, p1)
    write_obj(mesh, p2)
    assert p1.read_bytes() == p2.read_bytes()
    text = p1.read_text()
    assert text.count("\nv ") + text.startswith("v ") == len(mesh.vertices)
    back = read_obj(p1)
    assert np.array_equal(back.triangles, mesh.triangles)
    assert np.array_equal(back.vertices, np.round(mesh.vertices, 6))


def test_2x2_obj_line_counts(tmp_path):
    mesh = depth_to_mesh(DepthMap(np.array([[0.0, 1.0], [2.0, 3.0]])), height_scale=1.0)
    p = tmp_path / "m.obj"
    write_obj(mesh, p)
    lines = p.read_text().splitlines()
    assert sum(1 for l in lines if l.startswith("v ")) == 4
    assert sum(1 for l in lines if l.startswith("f ")) == 2
