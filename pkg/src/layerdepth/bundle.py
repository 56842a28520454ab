"""Versioned JSON interchange document for the interactive layer explorer."""

from __future__ import annotations

import base64
import io
import json

import numpy as np
from PIL import Image

from .depth.maps import DepthMap
from .errors import DecodeError, DimensionMismatch
from .svg.model import RasterImage, rgb_to_index

BUNDLE_VERSION = 1


def _decode_image_b64(data: str) -> np.ndarray:
    try:
        raw = base64.b64decode(data)
        with Image.open(io.BytesIO(raw)) as img:
            return np.asarray(img)
    except Exception as exc:
        raise DecodeError(f"embedded image not decodable: {exc}") from exc


def depth_from_png_bytes(raw: bytes) -> DepthMap:
    try:
        with Image.open(io.BytesIO(raw)) as img:
            arr = np.asarray(img)
    except Exception as exc:
        raise DecodeError(f"depth PNG not decodable: {exc}") from exc
    if arr.ndim == 3:
        return DepthMap(rgb_to_index(arr[..., :3]).astype(np.float64))
    return DepthMap(arr.astype(np.float64))


def suggested_bins(d: DepthMap) -> list[float]:
    """Distinct integer depth values shifted down by one half; empty otherwise."""
    v = d.values
    if not np.all(v == np.round(v)):
        return []
    return [float(x) - 0.5 for x in np.unique(v)]


def depth_stats(d: DepthMap) -> dict:
    m = float(np.median(d.values))
    return {
        "min": float(d.values.min()),
        "max": float(d.values.max()),
        "median": m,
        "mad": float(np.mean(np.abs(d.values - m))),
    }


def build_bundle(image_png: bytes, depth_png: bytes, clusters: list[dict] | None = None) -> dict:
    """Assemble a bundle from raw PNG bytes; the files are embedded untouched."""
    try:
        with Image.open(io.BytesIO(image_png)) as img:
            iw, ih = img.size
    except Exception as exc:
        raise DecodeError(f"image PNG not decodable: {exc}") from exc
    depth = depth_from_png_bytes(depth_png)
    if (depth.width, depth.height) != (iw, ih):
        raise DimensionMismatch(
            f"image {iw}x{ih} vs depth {depth.width}x{depth.height}"
        )
    doc = {
        "version": BUNDLE_VERSION,
        "image": base64.b64encode(image_png).decode("ascii"),
        "depth": base64.b64encode(depth_png).decode("ascii"),
        "depth_stats": depth_stats(depth),
        "suggested_bins": suggested_bins(depth),
    }
    if clusters is not None:
        doc["clusters"] = clusters
    return doc


def validate_bundle(doc: dict) -> None:
    if doc.get("version") != BUNDLE_VERSION:
        raise DecodeError(f"unsupported bundle version {doc.get('version')!r}")
    img = _decode_image_b64(doc["image"])
    depth = depth_from_png_bytes(base64.b64decode(doc["depth"]))
    if img.shape[:2] != depth.values.shape:
        raise DimensionMismatch(f"image {img.shape[:2]} vs depth {depth.values.shape}")
    bins = doc.get("suggested_bins", [])
    if any(b1 <= b0 for b0, b1 in zip(bins, bins[1:])):
        raise DecodeError("suggested_bins not ascending")


def bundle_image(doc: dict) -> RasterImage:
    raw = base64.b64decode(doc["image"])
    with Image.open(io.BytesIO(raw)) as img:
        return RasterImage(np.asarray(img.convert("RGB"), dtype=np.uint8))


def bundle_depth(doc: dict) -> DepthMap:
    return depth_from_png_bytes(base64.b64decode(doc["depth"]))


def save_bundle(doc: dict, path) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_bundle(path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    validate_bundle(doc)
    return doc
