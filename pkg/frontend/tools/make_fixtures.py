"""Generate the frontend test fixtures from the Python core.

Writes tests/fixtures/bundle.json (false-color depth), bundle_gray16.json
(same content, 16-bit grayscale depth), and refs.json holding core-computed
reference masks so the client's thresholding can be checked pixel for pixel.

Run from frontend/: python3 tools/make_fixtures.py
"""

import base64
import io
import json
import sys
from pathlib import Path

import numpy as np
from PIL import Image

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "tests"))

from conftest import make_fixture_svg

from layerdepth import DepthMap, bin_depth, parse_svg, rasterize_color, rasterize_index
from layerdepth.bundle import build_bundle
from layerdepth.depth.maps import save_color_png, save_index_png


def png_bytes(save_fn, *args, **kwargs) -> bytes:
    buf = io.BytesIO()
    save_fn(*args, buf, **kwargs)
    return buf.getvalue()


def b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def main() -> None:
    out_dir = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)

    doc = parse_svg(make_fixture_svg(seed=42, n_layers=5, size=48))
    img = rasterize_color(doc)
    idx = rasterize_index(doc)
    depth = DepthMap.from_index_raster(idx)

    image_png = png_bytes(lambda im, fh: save_color_png(im, fh), img)
    depth_png = png_bytes(lambda ix, fh: save_index_png(ix, fh), idx)
    depth16_png = png_bytes(lambda ix, fh: save_index_png(ix, fh, gray16=True), idx)

    bundle = build_bundle(image_png, depth_png)
    (out_dir / "bundle.json").write_text(json.dumps(bundle, sort_keys=True))
    bundle16 = build_bundle(image_png, depth16_png)
    (out_dir / "bundle_gray16.json").write_text(json.dumps(bundle16, sort_keys=True))

    stats = bundle["depth_stats"]
    thresholds = {
        "min": stats["min"],
        "median": stats["median"],
        "mid": 1.5,
        "max": stats["max"],
    }
    masks = {}
    for name, t in thresholds.items():
        fg = bin_depth(depth, [t]).indices == 2  # strictly greater than t
        masks[name] = b64(fg.astype(np.uint8).tobytes())

    edges = [1.5, 3.5]
    labels = bin_depth(depth, edges).indices
    mask_bin2 = (labels == 2).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(mask_bin2 * 255).convert("1").save(buf, format="PNG")

    refs = {
        "width": idx.width,
        "height": idx.height,
        "depth_values": depth.values.astype(int).ravel().tolist(),
        "image_probes": [
            {"x": x, "y": y, "rgb": img.pixels[y, x].tolist()}
            for x, y in [(0, 0), (12, 7), (24, 24), (47, 47), (5, 40)]
        ],
        "thresholds": thresholds,
        "threshold_masks": masks,
        "bins": {
            "edges": edges,
            "labels": b64(labels.astype(np.uint8).tobytes()),
            "bin2_png": b64(buf.getvalue()),
        },
    }
    (out_dir / "refs.json").write_text(json.dumps(refs, sort_keys=True))
    print(f"wrote fixtures to {out_dir}")


if __name__ == "__main__":
    main()
