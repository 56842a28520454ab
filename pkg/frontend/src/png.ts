// Minimal PNG codec for the explorer: decodes the bundle's 8-bit RGB(A)/gray
// and 16-bit gray images exactly (no canvas round trip, which would flatten
// 16-bit samples), and encodes 1-bit grayscale masks for export.

export interface PngImage {
  width: number;
  height: number;
  bitDepth: number;
  colorType: number; // 0 gray, 2 rgb, 4 gray+alpha, 6 rgba
  channels: number;
  /** Unfiltered scanline bytes, row-major, without filter bytes. */
  data: Uint8Array;
}

const SIGNATURE = [0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a];
const CHANNELS: Record<number, number> = { 0: 1, 2: 3, 4: 2, 6: 4 };

const CRC_TABLE = new Uint32Array(256);
for (let n = 0; n < 256; n++) {
  let c = n;
  for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
  CRC_TABLE[n] = c >>> 0;
}

export function crc32(bytes: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < bytes.length; i++) c = CRC_TABLE[(c ^ bytes[i]) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

async function pump(data: Uint8Array, stream: TransformStream<Uint8Array, Uint8Array>): Promise<Uint8Array> {
  const writer = stream.writable.getWriter();
  void writer.write(data);
  void writer.close();
  const chunks: Uint8Array[] = [];
  const reader = stream.readable.getReader();
  let total = 0;
  for (;;) {
    const { done, value } = await reader.read();
    if (done) break;
    chunks.push(value);
    total += value.length;
  }
  const out = new Uint8Array(total);
  let off = 0;
  for (const c of chunks) {
    out.set(c, off);
    off += c.length;
  }
  return out;
}

const inflate = (d: Uint8Array) => pump(d, new DecompressionStream("deflate"));
const deflate = (d: Uint8Array) => pump(d, new CompressionStream("deflate"));

function paeth(a: number, b: number, c: number): number {
  const p = a + b - c;
  const pa = Math.abs(p - a);
  const pb = Math.abs(p - b);
  const pc = Math.abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  return pb <= pc ? b : c;
}

export async function decodePng(bytes: Uint8Array): Promise<PngImage> {
  if (bytes.length < 8 || SIGNATURE.some((v, i) => bytes[i] !== v)) {
    throw new Error("not a PNG file");
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  let pos = 8;
  let width = 0;
  let height = 0;
  let bitDepth = 0;
  let colorType = 0;
  const idat: Uint8Array[] = [];
  while (pos + 8 <= bytes.length) {
    const length = view.getUint32(pos);
    const type = String.fromCharCode(bytes[pos + 4], bytes[pos + 5], bytes[pos + 6], bytes[pos + 7]);
    const body = bytes.subarray(pos + 8, pos + 8 + length);
    if (type === "IHDR") {
      width = view.getUint32(pos + 8);
      height = view.getUint32(pos + 12);
      bitDepth = bytes[pos + 16];
      colorType = bytes[pos + 17];
      const interlace = bytes[pos + 20];
      if (!(colorType in CHANNELS)) throw new Error(`unsupported color type ${colorType}`);
      if (interlace !== 0) throw new Error("interlaced PNG not supported");
      if (![1, 8, 16].includes(bitDepth)) throw new Error(`unsupported bit depth ${bitDepth}`);
    } else if (type === "IDAT") {
      idat.push(body);
    } else if (type === "IEND") {
      break;
    }
    pos += 12 + length;
  }
  if (width === 0 || height === 0 || idat.length === 0) throw new Error("truncated PNG");

  let zdata: Uint8Array;
  if (idat.length === 1) {
    zdata = idat[0];
  } else {
    zdata = new Uint8Array(idat.reduce((s, c) => s + c.length, 0));
    let off = 0;
    for (const c of idat) {
      zdata.set(c, off);
      off += c.length;
    }
  }
  const raw = await inflate(zdata);

  const channels = CHANNELS[colorType];
  const rowBytes = Math.ceil((width * channels * bitDepth) / 8);
  const bpp = Math.max(1, (channels * bitDepth) / 8);
  if (raw.length < (rowBytes + 1) * height) throw new Error("PNG data too short");
  const out = new Uint8Array(rowBytes * height);
  for (let y = 0; y < height; y++) {
    const filter = raw[y * (rowBytes + 1)];
    const src = (rowBytes + 1) * y + 1;
    const dst = rowBytes * y;
    for (let x = 0; x < rowBytes; x++) {
      const cur = raw[src + x];
      const left = x >= bpp ? out[dst + x - bpp] : 0;
      const up = y > 0 ? out[dst + x - rowBytes] : 0;
      const ul = y > 0 && x >= bpp ? out[dst + x - bpp - rowBytes] : 0;
      let v: number;
      switch (filter) {
        case 0: v = cur; break;
        case 1: v = cur + left; break;
        case 2: v = cur + up; break;
        case 3: v = cur + ((left + up) >> 1); break;
        case 4: v = cur + paeth(left, up, ul); break;
        default: throw new Error(`bad filter ${filter}`);
      }
      out[dst + x] = v & 0xff;
    }
  }
  return { width, height, bitDepth, colorType, channels, data: out };
}

/** Sample value of channel `ch` at pixel index `i` (16-bit is big-endian). */
export function sample(img: PngImage, i: number, ch: number): number {
  if (img.bitDepth === 8) return img.data[i * img.channels + ch];
  if (img.bitDepth === 16) {
    const o = (i * img.channels + ch) * 2;
    return img.data[o] * 256 + img.data[o + 1];
  }
  // 1-bit grayscale, MSB first
  const rowBits = Math.ceil(img.width / 8) * 8;
  const y = Math.floor(i / img.width);
  const x = i % img.width;
  const bit = y * rowBits + x;
  return (img.data[bit >> 3] >> (7 - (bit & 7))) & 1;
}

/** RGBA buffer for canvas display. */
export function toRgba(img: PngImage): Uint8ClampedArray {
  const n = img.width * img.height;
  const out = new Uint8ClampedArray(n * 4);
  const max = img.bitDepth === 16 ? 65535 : img.bitDepth === 8 ? 255 : 1;
  for (let i = 0; i < n; i++) {
    let r: number, g: number, b: number, a = max;
    if (img.colorType === 2 || img.colorType === 6) {
      r = sample(img, i, 0);
      g = sample(img, i, 1);
      b = sample(img, i, 2);
      if (img.colorType === 6) a = sample(img, i, 3);
    } else {
      r = g = b = sample(img, i, 0);
      if (img.colorType === 4) a = sample(img, i, 1);
    }
    out[i * 4] = Math.round((r / max) * 255);
    out[i * 4 + 1] = Math.round((g / max) * 255);
    out[i * 4 + 2] = Math.round((b / max) * 255);
    out[i * 4 + 3] = Math.round((a / max) * 255);
  }
  return out;
}

function chunk(type: string, body: Uint8Array): Uint8Array {
  const out = new Uint8Array(12 + body.length);
  const view = new DataView(out.buffer);
  view.setUint32(0, body.length);
  for (let i = 0; i < 4; i++) out[4 + i] = type.charCodeAt(i);
  out.set(body, 8);
  view.setUint32(8 + body.length, crc32(out.subarray(4, 8 + body.length)));
  return out;
}

/** Encode a 0/1 mask as a 1-bit grayscale PNG (1 = white). */
export async function encodeMaskPng(mask: Uint8Array, width: number, height: number): Promise<Uint8Array> {
  if (mask.length !== width * height) throw new Error("mask size mismatch");
  const rowBytes = Math.ceil(width / 8);
  const raw = new Uint8Array((rowBytes + 1) * height); // filter byte 0 per row
  for (let y = 0; y < height; y++) {
    const base = y * (rowBytes + 1) + 1;
    for (let x = 0; x < width; x++) {
      if (mask[y * width + x]) raw[base + (x >> 3)] |= 0x80 >> (x & 7);
    }
  }
  const ihdr = new Uint8Array(13);
  const view = new DataView(ihdr.buffer);
  view.setUint32(0, width);
  view.setUint32(4, height);
  ihdr[8] = 1; // bit depth
  ihdr[9] = 0; // grayscale
  const idat = await deflate(raw);
  const parts = [
    new Uint8Array(SIGNATURE),
    chunk("IHDR", ihdr),
    chunk("IDAT", idat),
    chunk("IEND", new Uint8Array(0)),
  ];
  const total = parts.reduce((s, p) => s + p.length, 0);
  const out = new Uint8Array(total);
  let off = 0;
  for (const p of parts) {
    out.set(p, off);
    off += p.length;
  }
  return out;
}
