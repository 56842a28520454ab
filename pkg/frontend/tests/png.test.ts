import { describe, expect, it } from "vitest";

import { base64ToBytes, parseBundle } from "../src/bundle.js";
import { decodePng, encodeMaskPng, sample, toRgba } from "../src/png.js";
import { b64Bytes, readFixture, refs } from "./helpers.js";

const bundle = parseBundle(readFixture("bundle.json"));
const bundle16 = parseBundle(readFixture("bundle_gray16.json"));

describe("decodePng", () => {
  it("decodes the bundle's RGB image with exact pixels", async () => {
    const img = await decodePng(base64ToBytes(bundle.image));
    expect(img.width).toBe(refs.width);
    expect(img.height).toBe(refs.height);
    expect(img.colorType).toBe(2);
    for (const probe of refs.image_probes) {
      const i = probe.y * img.width + probe.x;
      expect([sample(img, i, 0), sample(img, i, 1), sample(img, i, 2)]).toEqual(probe.rgb);
    }
  });

  it("decodes the false-color depth image", async () => {
    const img = await decodePng(base64ToBytes(bundle.depth));
    expect(img.colorType).toBe(2);
    // the red channel carries the low byte of small indices
    const i = 0;
    expect(sample(img, i, 0)).toBe(refs.depth_values[0] % 256);
  });

  it("decodes 16-bit grayscale with full precision", async () => {
    const img = await decodePng(base64ToBytes(bundle16.depth));
    expect(img.colorType).toBe(0);
    expect(img.bitDepth).toBe(16);
    for (let i = 0; i < refs.depth_values.length; i += 97) {
      expect(sample(img, i, 0)).toBe(refs.depth_values[i]);
    }
  });

  it("converts to RGBA for canvas display", async () => {
    const img = await decodePng(base64ToBytes(bundle.image));
    const rgba = toRgba(img);
    expect(rgba.length).toBe(refs.width * refs.height * 4);
    const probe = refs.image_probes[1];
    const o = (probe.y * refs.width + probe.x) * 4;
    expect([rgba[o], rgba[o + 1], rgba[o + 2], rgba[o + 3]]).toEqual([...probe.rgb, 255]);
  });

  it("rejects junk and truncated data", async () => {
    await expect(decodePng(new Uint8Array([1, 2, 3]))).rejects.toThrow("not a PNG");
    const good = base64ToBytes(bundle.image);
    await expect(decodePng(good.subarray(0, 40))).rejects.toThrow();
  });

  it("decodes a core-produced 1-bit mask PNG", async () => {
    const img = await decodePng(b64Bytes(refs.bins.bin2_png));
    expect(img.bitDepth).toBe(1);
    const labels = b64Bytes(refs.bins.labels);
    for (let i = 0; i < labels.length; i += 31) {
      expect(sample(img, i, 0)).toBe(labels[i] === 2 ? 1 : 0);
    }
  });
});

describe("encodeMaskPng", () => {
  it("round-trips masks exactly, including ragged widths", async () => {
    for (const w of [8, 13, 48]) {
      const h = 9;
      const mask = new Uint8Array(w * h);
      for (let i = 0; i < mask.length; i++) mask[i] = (i * 7) % 3 === 0 ? 1 : 0;
      const png = await encodeMaskPng(mask, w, h);
      const back = await decodePng(png);
      expect(back.width).toBe(w);
      expect(back.bitDepth).toBe(1);
      for (let i = 0; i < mask.length; i++) {
        expect(sample(back, i, 0)).toBe(mask[i]);
      }
    }
  });

  it("rejects size mismatches", async () => {
    await expect(encodeMaskPng(new Uint8Array(5), 2, 2)).rejects.toThrow("mismatch");
  });
});
