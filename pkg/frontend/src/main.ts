// DOM wiring for the layer explorer: load a bundle, move the threshold
// slider (recomputed synchronously per input event), toggle bin visibility,
// inspect pixels, export masks.

import {
  ExplorerState,
  SLIDER_STEPS,
  allBinIds,
  clampThreshold,
  exportMask,
  initialState,
  loadBundle,
  renderBins,
  renderSplit,
  sliderToThreshold,
} from "./state.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

const statusEl = $("status");
const fgCanvas = $<HTMLCanvasElement>("fg");
const bgCanvas = $<HTMLCanvasElement>("bg");
const binsCanvas = $<HTMLCanvasElement>("bins-canvas");
const slider = $<HTMLInputElement>("threshold");
const tInput = $<HTMLInputElement>("t-value");
const tLabel = $("t-label");
const binsInput = $<HTMLInputElement>("bins-edges");
const togglesEl = $("bin-toggles");
const hoverEl = $("hover");
const timingEl = $("timing");

let state: ExplorerState | null = null;

function toast(msg: string, isError = false): void {
  statusEl.textContent = msg;
  statusEl.className = isError ? "error" : "";
  if (isError) setTimeout(() => (statusEl.textContent = ""), 4000);
}

function paint(canvas: HTMLCanvasElement, rgba: Uint8ClampedArray, w: number, h: number): void {
  canvas.width = w;
  canvas.height = h;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.putImageData(new ImageData(rgba, w, h), 0, 0);
}

function refreshSplit(): void {
  if (!state) return;
  const start = performance.now();
  const view = renderSplit(state);
  const b = state.bundle;
  paint(fgCanvas, view.foreground, b.width, b.height);
  paint(bgCanvas, view.background, b.width, b.height);
  const ms = performance.now() - start;
  tLabel.textContent = `t = ${state.t.toPrecision(6)}`;
  timingEl.textContent = `${ms.toFixed(1)} ms`;
}

function refreshBins(): void {
  if (!state) return;
  const view = renderBins(state);
  const b = state.bundle;
  paint(binsCanvas, view.composite, b.width, b.height);

  togglesEl.textContent = "";
  for (const id of view.binIds) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = state.visible.has(id);
    box.onchange = () => {
      if (!state) return;
      if (box.checked) state.visible.add(id);
      else state.visible.delete(id);
      refreshBins();
    };
    const button = document.createElement("button");
    button.textContent = "export";
    button.onclick = () => void download(id);
    label.append(box, ` bin ${id} (${view.counts.get(id) ?? 0} px) `, button);
    togglesEl.append(label);
  }
}

async function download(binId: number): Promise<void> {
  if (!state) return;
  try {
    const png = await exportMask(state, binId);
    const blob = new Blob([png], { type: "image/png" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = `mask_bin${binId}.png`;
    a.click();
    URL.revokeObjectURL(a.href);
  } catch (err) {
    toast(String(err), true);
  }
}

function applyBundle(json: unknown): void {
  void loadBundle(json)
    .then((bundle) => {
      state = initialState(bundle);
      slider.value = String(
        Math.round(((state.t - bundle.stats.min) / Math.max(bundle.stats.max - bundle.stats.min, 1e-12)) * SLIDER_STEPS)
      );
      tInput.value = state.t.toPrecision(6);
      binsInput.value = state.bins.join(", ");
      toast(`loaded ${bundle.width}x${bundle.height} bundle`);
      refreshSplit();
      refreshBins();
      wireHover();
    })
    .catch((err) => toast(String(err), true));
}

function wireHover(): void {
  for (const canvas of [fgCanvas, bgCanvas, binsCanvas]) {
    canvas.onmousemove = (ev) => {
      if (!state) return;
      const rect = canvas.getBoundingClientRect();
      const x = Math.floor(((ev.clientX - rect.left) / rect.width) * state.bundle.width);
      const y = Math.floor(((ev.clientY - rect.top) / rect.height) * state.bundle.height);
      if (x < 0 || y < 0 || x >= state.bundle.width || y >= state.bundle.height) return;
      const depth = state.bundle.depth.values[y * state.bundle.width + x];
      state.hover = { x, y, depth };
      hoverEl.textContent = `(${x}, ${y}) depth ${depth}`;
    };
  }
}

slider.max = String(SLIDER_STEPS);
slider.oninput = () => {
  if (!state) return;
  state.t = sliderToThreshold(state.bundle, Number(slider.value));
  tInput.value = state.t.toPrecision(6);
  refreshSplit();
};

tInput.onchange = () => {
  if (!state) return;
  const v = Number(tInput.value);
  if (Number.isFinite(v)) {
    state.t = clampThreshold(state.bundle, v);
    tInput.value = String(state.t);
    refreshSplit();
  }
};

binsInput.onchange = () => {
  if (!state) return;
  try {
    const edges = binsInput.value
      .split(",")
      .map((s) => s.trim())
      .filter((s) => s.length > 0)
      .map(Number);
    if (edges.some((v) => !Number.isFinite(v))) throw new Error("bins must be numbers");
    state.bins = edges;
    state.visible = new Set(allBinIds(edges));
    refreshBins();
  } catch (err) {
    toast(String(err), true);
  }
};

$("use-suggested").onclick = () => {
  if (!state) return;
  binsInput.value = state.bundle.suggestedBins.join(", ");
  binsInput.onchange?.(new Event("change"));
};

$<HTMLInputElement>("file").onchange = (ev) => {
  const file = (ev.target as HTMLInputElement).files?.[0];
  if (!file) return;
  file
    .text()
    .then((text) => applyBundle(JSON.parse(text)))
    .catch((err) => toast(String(err), true));
};

fetch("/bundle.json")
  .then((r) => (r.ok ? r.json() : Promise.reject(new Error(`HTTP ${r.status}`))))
  .then(applyBundle)
  .catch(() => toast("no served bundle; pick a file"));
