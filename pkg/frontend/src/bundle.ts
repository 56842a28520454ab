// Bundle document: the versioned JSON interchange produced by the CLI.

export interface DepthStats {
  min: number;
  max: number;
  median: number;
  mad: number;
}

export interface ClusterStat {
  rank: number;
  color: number[];
  pixel_count: number;
  median_depth: number | null;
}

export interface BundleDocument {
  version: number;
  image: string; // base64 PNG
  depth: string; // base64 PNG, false-color 24-bit or 8/16-bit grayscale
  depth_stats: DepthStats;
  suggested_bins: number[];
  clusters?: ClusterStat[];
}

export function base64ToBytes(b64: string): Uint8Array {
  if (typeof atob === "function") {
    const bin = atob(b64);
    const out = new Uint8Array(bin.length);
    for (let i = 0; i < bin.length; i++) out[i] = bin.charCodeAt(i);
    return out;
  }
  return new Uint8Array(Buffer.from(b64, "base64"));
}

export function parseBundle(json: unknown): BundleDocument {
  const doc = json as Partial<BundleDocument>;
  if (!doc || typeof doc !== "object") throw new Error("bundle is not an object");
  if (doc.version !== 1) throw new Error(`unsupported bundle version ${doc.version}`);
  if (typeof doc.image !== "string" || typeof doc.depth !== "string") {
    throw new Error("bundle is missing embedded images");
  }
  const stats = doc.depth_stats;
  if (
    !stats ||
    [stats.min, stats.max, stats.median, stats.mad].some((v) => typeof v !== "number")
  ) {
    throw new Error("bundle is missing depth_stats");
  }
  const bins = doc.suggested_bins ?? [];
  for (let i = 1; i < bins.length; i++) {
    if (bins[i] <= bins[i - 1]) throw new Error("suggested_bins not ascending");
  }
  return {
    version: 1,
    image: doc.image,
    depth: doc.depth,
    depth_stats: stats as DepthStats,
    suggested_bins: bins,
    clusters: doc.clusters,
  };
}
