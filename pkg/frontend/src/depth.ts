// Depth decoding and pixel-exact thresholding/binning. The comparisons must
// match the core byte for byte: foreground is strictly depth > t, and bin k
// (1-based) holds values with edges[k-2] < v <= edges[k-1].

import { PngImage, decodePng, sample } from "./png.js";

export interface DepthField {
  width: number;
  height: number;
  values: Float64Array;
}

export function depthFromPng(img: PngImage): DepthField {
  const n = img.width * img.height;
  const values = new Float64Array(n);
  if (img.colorType === 2 || img.colorType === 6) {
    if (img.bitDepth !== 8) throw new Error("false-color depth must be 8-bit");
    for (let i = 0; i < n; i++) {
      values[i] = sample(img, i, 0) + 256 * sample(img, i, 1) + 65536 * sample(img, i, 2);
    }
  } else {
    for (let i = 0; i < n; i++) values[i] = sample(img, i, 0);
  }
  return { width: img.width, height: img.height, values };
}

export async function decodeDepthPng(bytes: Uint8Array): Promise<DepthField> {
  return depthFromPng(await decodePng(bytes));
}

/** 0/1 mask of pixels strictly above the threshold. */
export function thresholdMask(values: Float64Array, t: number): Uint8Array {
  const out = new Uint8Array(values.length);
  for (let i = 0; i < values.length; i++) out[i] = values[i] > t ? 1 : 0;
  return out;
}

export function assertAscending(edges: number[]): void {
  for (let i = 1; i < edges.length; i++) {
    if (edges[i] <= edges[i - 1]) throw new Error("bin edges must be strictly ascending");
  }
}

/** 1-based bin label per pixel; len(edges) + 1 bins. */
export function binLabels(values: Float64Array, edges: number[]): Int32Array {
  assertAscending(edges);
  const out = new Int32Array(values.length);
  for (let i = 0; i < values.length; i++) {
    const v = values[i];
    let bin = 1;
    while (bin <= edges.length && v > edges[bin - 1]) bin++;
    out[i] = bin;
  }
  return out;
}

export function binMask(labels: Int32Array, bin: number): Uint8Array {
  const out = new Uint8Array(labels.length);
  for (let i = 0; i < labels.length; i++) out[i] = labels[i] === bin ? 1 : 0;
  return out;
}
