"""Shared fixtures: deterministic synthetic layered SVGs.

Generated documents have a full-canvas background layer, well-separated layer
colors (robust to 6-bit quantization and the 0.05 merge threshold), and every
layer stays visible in the final render, so they pass curation untouched.
"""

from __future__ import annotations

import numpy as np
import pytest

from layerdepth import parse_svg, rasterize_index
from layerdepth.svg.model import LayeredSvg

_MIN_CHANNEL_GAP = 48  # keeps colors distinct under quantization and merging


def _min_visible(size: int) -> int:
    return max(12, size * size // 2000)


def _pick_colors(rng: np.random.Generator, n: int) -> list[tuple[int, int, int]]:
    colors: list[tuple[int, int, int]] = []
    while len(colors) < n:
        c = tuple(int(v) for v in rng.integers(0, 256, 3))
        if all(max(abs(c[k] - o[k]) for k in range(3)) >= _MIN_CHANNEL_GAP for o in colors):
            colors.append(c)
    return colors


def _shape_element(rng: np.random.Generator, size: int, color: tuple[int, int, int]) -> str:
    fill = "#{:02x}{:02x}{:02x}".format(*color)
    kind = rng.choice(["circle", "rect", "ellipse", "polygon"])
    lo, hi = size // 8, size - size // 8
    r_lo, r_hi = max(2, size // 8), max(4, size // 3)
    if kind == "circle":
        r = int(rng.integers(r_lo, r_hi))
        cx = int(rng.integers(lo, hi))
        cy = int(rng.integers(lo, hi))
        return f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="{fill}"/>'
    if kind == "ellipse":
        rx = int(rng.integers(r_lo, r_hi))
        ry = int(rng.integers(r_lo, r_hi))
        cx = int(rng.integers(lo, hi))
        cy = int(rng.integers(lo, hi))
        return f'<ellipse cx="{cx}" cy="{cy}" rx="{rx}" ry="{ry}" fill="{fill}"/>'
    if kind == "rect":
        w = int(rng.integers(max(3, size // 6), max(4, size // 2)))
        h = int(rng.integers(max(3, size // 6), max(4, size // 2)))
        x = int(rng.integers(0, size - w))
        y = int(rng.integers(0, size - h))
        return f'<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="{fill}"/>'
    # star polygon
    cx = int(rng.integers(lo, hi))
    cy = int(rng.integers(lo, hi))
    r_out = int(rng.integers(r_lo, r_hi))
    r_in = max(2, r_out // 2)
    spikes = int(rng.integers(5, 9))
    pts = []
    for i in range(2 * spikes):
        r = r_out if i % 2 == 0 else r_in
        ang = np.pi * i / spikes
        pts.append(f"{cx + r * np.cos(ang):.2f},{cy + r * np.sin(ang):.2f}")
    return f'<polygon points="{" ".join(pts)}" fill="{fill}"/>'


def make_fixture_svg(seed: int, n_layers: int, size: int = 64) -> str:
    """SVG text with n_layers layers, all visible in the final render."""
    assert n_layers >= 1
    for attempt in range(64):
        rng = np.random.default_rng((seed, n_layers, size, attempt))
        colors = _pick_colors(rng, n_layers)
        body = [f'<rect x="0" y="0" width="{size}" height="{size}" fill="#{colors[0][0]:02x}{colors[0][1]:02x}{colors[0][2]:02x}"/>']
        body += [_shape_element(rng, size, colors[i]) for i in range(1, n_layers)]
        text = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">\n'
            + "\n".join(body)
            + "\n</svg>\n"
        )
        idx = rasterize_index(parse_svg(text)).indices
        visible = np.bincount(idx.ravel(), minlength=n_layers + 1)[1 : n_layers + 1]
        if (visible >= _min_visible(size)).all():
            return text
    raise AssertionError(f"could not generate a fixture for seed={seed} layers={n_layers}")


def make_fixture(seed: int, n_layers: int, size: int = 64) -> LayeredSvg:
    return parse_svg(make_fixture_svg(seed, n_layers, size))


@pytest.fixture
def five_circles() -> LayeredSvg:
    """The 64x64 five-overlapping-circles document used by several oracles."""
    parts = ['<svg xmlns="http://www.w3.org/2000/svg" width="64" height="64">']
    geom = [(20, 22, 14), (40, 20, 12), (30, 40, 15), (46, 44, 11), (14, 48, 10)]
    cols = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd"]
    for (cx, cy, r), col in zip(geom, cols):
        parts.append(f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="{col}"/>')
    parts.append("</svg>")
    return parse_svg("\n".join(parts))
