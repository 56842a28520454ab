import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export function readFixture(name: string): unknown {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8"));
}

export interface Refs {
  width: number;
  height: number;
  depth_values: number[];
  image_probes: { x: number; y: number; rgb: number[] }[];
  thresholds: Record<string, number>;
  threshold_masks: Record<string, string>;
  bins: { edges: number[]; labels: string; bin2_png: string };
}

export const refs = readFixture("refs.json") as Refs;

export function b64Bytes(b64: string): Uint8Array {
  return new Uint8Array(Buffer.from(b64, "base64"));
}
