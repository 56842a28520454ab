"""Command-line front door: curate, rasterize, eval-depth, vectorize, relief,
bundle, serve. Machine-readable JSON goes to stdout, human logs to stderr;
seeds are explicit so every command is reproducible."""

from __future__ import annotations

import argparse
import errno
import json
import mimetypes
import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import urlsplit

from . import bundle as bundle_mod
from .depth.maps import DepthMap, load_color_png, load_depth, save_color_png, save_index_png
from .depth.metrics import (
    MetricsReport,
    OrderMetricConfig,
    mae_normalized,
    mse_normalized,
    order_consistency,
    path_count_error,
    rgb_mse,
    ssim,
)
from .errors import DimensionMismatch, LayerDepthError, PortInUse, UnsupportedFormat
from .pipeline.clustering import cluster_colors, order_by_depth
from .pipeline.config import PipelineConfig
from .pipeline.vectorize import vectorize
from .relief import depth_to_mesh, write_obj
from .svg.curate import curate
from .svg.model import IndexRaster
from .svg.parse import parse_svg
from .svg.raster import rasterize_color, rasterize_index
from .svg.serialize import serialize_svg


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def _load_config(path: str | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    text = Path(path).read_text()
    if path.endswith(".toml"):
        try:
            import tomllib  # py311+
        except ModuleNotFoundError:
            try:
                import tomli as tomllib  # type: ignore[no-redef]
            except ModuleNotFoundError as exc:
                raise UnsupportedFormat(
                    "TOML config needs Python 3.11+ or the tomli package; use JSON instead"
                ) from exc
        data = tomllib.loads(text)
    else:
        data = json.loads(text)
    return PipelineConfig.from_dict(data)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_curate(args) -> int:
    in_dir = Path(args.in_dir)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    accepted = rejected = merged_layers = 0
    for path in sorted(in_dir.glob("*.svg")):
        try:
            svg = parse_svg(path.read_text(), strict=not args.lenient)
            result = curate(svg)
        except LayerDepthError as exc:
            _log(f"{path.name}: rejected ({exc})")
            rejected += 1
            continue
        if result.accepted:
            (out_dir / path.name).write_text(serialize_svg(result.curated))
            accepted += 1
            merged_layers += result.merged_layers
        else:
            _log(f"{path.name}: rejected ({result.reason})")
            rejected += 1
    _emit({"accepted": accepted, "merged_layers": merged_layers, "rejected": rejected})
    return 0


def cmd_rasterize(args) -> int:
    svg = parse_svg(Path(args.svg).read_text(), strict=not args.lenient)
    size = args.size
    if args.out_color:
        img = rasterize_color(svg, size=size, antialias=args.antialias)
        save_color_png(img, args.out_color)
        _log(f"wrote {args.out_color} ({img.width}x{img.height})")
    if args.out_index:
        idx = rasterize_index(svg, size=size)
        save_index_png(idx, args.out_index, gray16=args.gray16)
        _log(f"wrote {args.out_index} ({idx.width}x{idx.height})")
    return 0


def cmd_eval_depth(args) -> int:
    gt = load_depth(args.gt, args.gt_format)
    pred = load_depth(args.pred, args.pred_format)
    cfg = OrderMetricConfig(pair_count=args.pairs, seed=args.seed)
    report = MetricsReport(
        order=order_consistency(gt, pred, cfg),
        mae=mae_normalized(gt, pred),
        mse=mse_normalized(gt, pred),
    )
    _emit(report.to_dict())
    return 0


def _index_to_depth(idx: IndexRaster) -> DepthMap:
    return DepthMap.from_index_raster(idx)


def cmd_vectorize(args) -> int:
    img = load_color_png(args.image)
    depth = load_depth(args.depth, args.depth_format)
    cfg = _load_config(args.config)
    svg = vectorize(img, depth, cfg)
    Path(args.out).write_text(serialize_svg(svg))
    _log(f"wrote {args.out} ({len(svg.layers)} layers)")

    rendered = rasterize_color(svg)
    report = MetricsReport(rgb_mse=rgb_mse(img, rendered), ssim=ssim(img, rendered))
    if args.gt_svg:
        gt_svg = parse_svg(Path(args.gt_svg).read_text(), strict=not args.lenient)
        size = max(img.width, img.height)
        gt_idx = rasterize_index(gt_svg, size=size)
        if (gt_idx.height, gt_idx.width) != (img.height, img.width):
            raise DimensionMismatch(
                f"ground truth renders {gt_idx.width}x{gt_idx.height}, image is {img.width}x{img.height}"
            )
        pred_idx = rasterize_index(svg)
        gt_d = _index_to_depth(gt_idx)
        pred_d = _index_to_depth(pred_idx)
        report.order = order_consistency(
            gt_d, pred_d, OrderMetricConfig(pair_count=args.pairs, seed=args.seed)
        )
        report.mae = mae_normalized(gt_d, pred_d)
        report.mse = mse_normalized(gt_d, pred_d)
        report.path_count_error = path_count_error(len(gt_svg.layers), len(svg.layers))
    _emit(report.to_dict())
    return 0


def cmd_relief(args) -> int:
    depth = load_depth(args.depth, args.depth_format)
    mesh = depth_to_mesh(depth, height_scale=args.scale, stride=args.stride)
    write_obj(mesh, args.out)
    _log(f"wrote {args.out} ({len(mesh.vertices)} vertices, {len(mesh.triangles)} triangles)")
    return 0


def cmd_bundle(args) -> int:
    image_png = Path(args.image).read_bytes()
    depth_png = Path(args.depth).read_bytes()
    clusters = None
    if args.clusters:
        img = load_color_png(args.image)
        depth = load_depth(args.depth, args.depth_format)
        cm = order_by_depth(cluster_colors(img, _load_config(args.config)), depth)
        clusters = [
            {
                "rank": i + 1,
                "color": [round(c, 6) for c in info.mean_color],
                "pixel_count": info.pixel_count,
                "median_depth": info.median_depth,
            }
            for i, info in enumerate(cm.clusters)
        ]
    doc = bundle_mod.build_bundle(image_png, depth_png, clusters=clusters)
    bundle_mod.save_bundle(doc, args.out)
    _log(f"wrote {args.out}")
    return 0


class _ExplorerHandler(BaseHTTPRequestHandler):
    bundle_bytes: bytes = b"{}"
    ui_dir: Path | None = None

    def do_GET(self):  # noqa: N802 (http.server API)
        path = urlsplit(self.path).path
        if path == "/bundle.json":
            self._send(200, "application/json", self.bundle_bytes)
            return
        if self.ui_dir is not None:
            rel = "index.html" if path == "/" else path.lstrip("/")
            target = (self.ui_dir / rel).resolve()
            if target.is_file() and self.ui_dir.resolve() in target.parents:
                ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
                self._send(200, ctype, target.read_bytes())
                return
        self._send(404, "text/plain", b"not found")

    def _send(self, code: int, ctype: str, body: bytes) -> None:
        self.send_response(code)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, fmt, *log_args):
        _log(f"serve: {fmt % log_args}")


def make_server(bundle_path, port: int, ui_dir=None) -> ThreadingHTTPServer:
    """Read-only HTTP server for a validated bundle; port 0 picks a free port."""
    raw = Path(bundle_path).read_bytes()
    bundle_mod.validate_bundle(json.loads(raw))

    handler = type(
        "_BoundHandler",
        (_ExplorerHandler,),
        {"bundle_bytes": raw, "ui_dir": Path(ui_dir) if ui_dir else None},
    )
    try:
        return ThreadingHTTPServer(("127.0.0.1", port), handler)
    except OSError as exc:
        if exc.errno == errno.EADDRINUSE:
            raise PortInUse(f"port {port} is already in use") from exc
        raise


def cmd_serve(args) -> int:
    server = make_server(args.bundle, args.port, args.ui_dir)
    host, port = server.server_address[:2]
    _log(f"serving {args.bundle} at http://{host}:{port}/bundle.json")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        _log("stopped")
    finally:
        server.server_close()
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="layerdepth", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curate", help="merge/reject layered SVGs in a directory")
    c.add_argument("in_dir")
    c.add_argument("out_dir")
    c.add_argument("--lenient", action="store_true", help="convert strokes instead of rejecting")
    c.set_defaults(func=cmd_curate)

    r = sub.add_parser("rasterize", help="render color and/or index PNGs from an SVG")
    r.add_argument("svg")
    r.add_argument("--out-color")
    r.add_argument("--out-index")
    r.add_argument("--size", type=int, default=None, help="uniform scale so max side == SIZE")
    r.add_argument("--gray16", action="store_true", help="write index PNG as 16-bit grayscale")
    r.add_argument("--antialias", action="store_true")
    r.add_argument("--lenient", action="store_true")
    r.set_defaults(func=cmd_rasterize)

    e = sub.add_parser("eval-depth", help="ordering/MAE/MSE metrics between two depth PNGs")
    e.add_argument("gt")
    e.add_argument("pred")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--pairs", type=int, default=None)
    e.add_argument("--gt-format", default="auto", dest="gt_format")
    e.add_argument("--pred-format", default="auto", dest="pred_format")
    e.set_defaults(func=cmd_eval_depth)

    v = sub.add_parser("vectorize", help="depth-ordered vectorization of a raster image")
    v.add_argument("image")
    v.add_argument("depth")
    v.add_argument("--out", required=True)
    v.add_argument("--config", default=None, help="flat JSON/TOML file of pipeline settings")
    v.add_argument("--depth-format", default="auto", dest="depth_format")
    v.add_argument("--gt-svg", default=None, dest="gt_svg")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--pairs", type=int, default=None)
    v.add_argument("--lenient", action="store_true")
    v.set_defaults(func=cmd_vectorize)

    m = sub.add_parser("relief", help="triangulated heightfield OBJ from a depth PNG")
    m.add_argument("depth")
    m.add_argument("out")
    m.add_argument("--scale", type=float, default=None)
    m.add_argument("--stride", type=int, default=1)
    m.add_argument("--depth-format", default="auto", dest="depth_format")
    m.set_defaults(func=cmd_relief)

    b = sub.add_parser("bundle", help="pack image+depth PNGs into an explorer bundle")
    b.add_argument("image")
    b.add_argument("depth")
    b.add_argument("out")
    b.add_argument("--clusters", action="store_true", help="embed per-cluster statistics")
    b.add_argument("--config", default=None)
    b.add_argument("--depth-format", default="auto", dest="depth_format")
    b.set_defaults(func=cmd_bundle)

    s = sub.add_parser("serve", help="serve a bundle (and UI assets) over local HTTP")
    s.add_argument("bundle")
    s.add_argument("--port", type=int, default=8601)
    s.add_argument("--ui-dir", default=None, dest="ui_dir")
    s.set_defaults(func=cmd_serve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LayerDepthError, OSError) as exc:
        _log(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
