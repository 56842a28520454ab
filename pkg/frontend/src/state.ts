// Explorer state and the pure recompute functions behind each view. Keeping
// these free of DOM access makes the pixel-exactness testable in Node.

import { BundleDocument, base64ToBytes, parseBundle, ClusterStat, DepthStats } from "./bundle.js";
import { DepthField, binLabels, binMask, depthFromPng, thresholdMask } from "./depth.js";
import { decodePng, encodeMaskPng, toRgba } from "./png.js";

export interface LoadedBundle {
  width: number;
  height: number;
  rgba: Uint8ClampedArray;
  depth: DepthField;
  stats: DepthStats;
  suggestedBins: number[];
  clusters?: ClusterStat[];
}

export interface ExplorerState {
  bundle: LoadedBundle;
  t: number;
  bins: number[];
  visible: Set<number>; // bin ids currently shown in the stacked view
  hover: { x: number; y: number; depth: number } | null;
}

export const SLIDER_STEPS = 512;

// hidden pixels render as a light checkerboard
const CHECKER_A = 0xf2;
const CHECKER_B = 0xd4;
const CHECKER_CELL = 6;

export async function loadBundle(json: unknown): Promise<LoadedBundle> {
  const doc: BundleDocument = parseBundle(json);
  const image = await decodePng(base64ToBytes(doc.image));
  const depth = depthFromPng(await decodePng(base64ToBytes(doc.depth)));
  if (image.width !== depth.width || image.height !== depth.height) {
    throw new Error("bundle image and depth dimensions differ");
  }
  return {
    width: image.width,
    height: image.height,
    rgba: toRgba(image),
    depth,
    stats: doc.depth_stats,
    suggestedBins: doc.suggested_bins,
    clusters: doc.clusters,
  };
}

export function initialState(bundle: LoadedBundle): ExplorerState {
  return {
    bundle,
    t: bundle.stats.median,
    bins: bundle.suggestedBins.slice(),
    visible: new Set(allBinIds(bundle.suggestedBins)),
    hover: null,
  };
}

export function clampThreshold(bundle: LoadedBundle, t: number): number {
  return Math.min(bundle.stats.max, Math.max(bundle.stats.min, t));
}

export function sliderToThreshold(bundle: LoadedBundle, step: number): number {
  const { min, max } = bundle.stats;
  return min + ((max - min) * step) / SLIDER_STEPS;
}

export function allBinIds(edges: number[]): number[] {
  return Array.from({ length: edges.length + 1 }, (_, i) => i + 1);
}

function checker(i: number, width: number): number {
  const x = i % width;
  const y = (i / width) | 0;
  const parity = (((x / CHECKER_CELL) | 0) + ((y / CHECKER_CELL) | 0)) & 1;
  return parity ? CHECKER_B : CHECKER_A;
}

function maskedView(bundle: LoadedBundle, mask: Uint8Array, keep: 0 | 1): Uint8ClampedArray {
  const n = bundle.width * bundle.height;
  const out = new Uint8ClampedArray(n * 4);
  for (let i = 0; i < n; i++) {
    if (mask[i] === keep) {
      out[i * 4] = bundle.rgba[i * 4];
      out[i * 4 + 1] = bundle.rgba[i * 4 + 1];
      out[i * 4 + 2] = bundle.rgba[i * 4 + 2];
    } else {
      const c = checker(i, bundle.width);
      out[i * 4] = out[i * 4 + 1] = out[i * 4 + 2] = c;
    }
    out[i * 4 + 3] = 255;
  }
  return out;
}

export interface SplitView {
  mask: Uint8Array; // 1 = foreground (depth > t)
  foreground: Uint8ClampedArray;
  background: Uint8ClampedArray;
}

/** Two-pane threshold split; foreground is exactly {depth > t}. */
export function renderSplit(state: ExplorerState): SplitView {
  const b = state.bundle;
  const mask = thresholdMask(b.depth.values, state.t);
  return {
    mask,
    foreground: maskedView(b, mask, 1),
    background: maskedView(b, mask, 0),
  };
}

export interface BinsView {
  labels: Int32Array;
  binIds: number[];
  composite: Uint8ClampedArray; // visible bins only, others checkerboard
  counts: Map<number, number>;
}

/** Stacked layer view: image pixels for bins toggled visible. */
export function renderBins(state: ExplorerState): BinsView {
  const b = state.bundle;
  const labels = binLabels(b.depth.values, state.bins);
  const ids = allBinIds(state.bins);
  const counts = new Map<number, number>(ids.map((id) => [id, 0]));
  const n = b.width * b.height;
  const out = new Uint8ClampedArray(n * 4);
  for (let i = 0; i < n; i++) {
    const id = labels[i];
    counts.set(id, (counts.get(id) ?? 0) + 1);
    if (state.visible.has(id)) {
      out[i * 4] = b.rgba[i * 4];
      out[i * 4 + 1] = b.rgba[i * 4 + 1];
      out[i * 4 + 2] = b.rgba[i * 4 + 2];
    } else {
      const c = checker(i, b.width);
      out[i * 4] = out[i * 4 + 1] = out[i * 4 + 2] = c;
    }
    out[i * 4 + 3] = 255;
  }
  return { labels, binIds: ids, composite: out, counts };
}

/** 1-bit PNG of one bin's mask; rejects empty bins. */
export async function exportMask(state: ExplorerState, binId: number): Promise<Uint8Array> {
  const labels = binLabels(state.bundle.depth.values, state.bins);
  const mask = binMask(labels, binId);
  let any = 0;
  for (let i = 0; i < mask.length; i++) any |= mask[i];
  if (!any) throw new Error(`bin ${binId} is empty`);
  return encodeMaskPng(mask, state.bundle.width, state.bundle.height);
}
