/** Browser entry point: binds the controller to the DOM. */

import { Client } from "./api.js";
import { Controller } from "./controller.js";
import { render } from "./render.js";
import { EditorState, ZOOM_PRESETS } from "./state.js";

function download(name: string, bytes: Uint8Array<ArrayBuffer>): void {
  const blob = new Blob([bytes], { type: "image/svg+xml" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = name;
  a.click();
  URL.revokeObjectURL(url);
}

export function boot(root: Document = document): Controller {
  const canvas = root.getElementById("board") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const banner = root.getElementById("banner")!;
  const convertBtn = root.getElementById("convert") as HTMLButtonElement;
  const exportCutBtn = root.getElementById("export-cut") as HTMLButtonElement;
  const exportTapeBtn = root.getElementById("export-tape") as HTMLButtonElement;
  const violationList = root.getElementById("violations")!;
  const zoomBar = root.getElementById("zoom")!;

  const state = new EditorState();
  const controller = new Controller(state, new Client(), redraw);

  function redraw(): void {
    render(ctx, state, canvas.width, canvas.height);
    banner.textContent = state.banner ?? "";
    banner.style.display = state.banner ? "block" : "none";
    convertBtn.disabled = state.recomputePending;
    convertBtn.textContent = state.stale ? "Convert (stale)" : "Convert";
    exportCutBtn.disabled = !state.canExport;
    exportTapeBtn.disabled = !state.canExport;
    violationList.innerHTML = "";
    for (const [i, v] of (state.layout?.violations ?? []).entries()) {
      const li = root.createElement("li");
      li.textContent = v.message;
      li.addEventListener("click", () => controller.focusViolation(i));
      violationList.appendChild(li);
    }
  }

  canvas.addEventListener("pointerdown", (e) => {
    const r = canvas.getBoundingClientRect();
    controller.pointerDown(e.clientX - r.left, e.clientY - r.top, canvas.width, canvas.height);
  });
  canvas.addEventListener("pointermove", (e) => {
    const r = canvas.getBoundingClientRect();
    controller.pointerMove(e.clientX - r.left, e.clientY - r.top, canvas.width, canvas.height);
  });
  canvas.addEventListener("pointerup", () => void controller.pointerUp());
  root.addEventListener("keydown", (e) => {
    if ((e as KeyboardEvent).key === "r") void controller.rotateSelected();
  });

  convertBtn.addEventListener("click", () => void controller.recompute());
  exportCutBtn.addEventListener("click", async () => {
    const bytes = await controller.exportBytes("cut");
    if (bytes) download("layout_cut.svg", bytes);
  });
  exportTapeBtn.addEventListener("click", async () => {
    const bytes = await controller.exportBytes("finetape");
    if (bytes) download("layout_finetape.svg", bytes);
  });

  for (const z of ZOOM_PRESETS) {
    const btn = root.createElement("button");
    btn.textContent = `${z}x`;
    btn.addEventListener("click", () => controller.setZoom(z));
    zoomBar.appendChild(btn);
  }

  void controller.load();
  return controller;
}

if (typeof document !== "undefined" && document.getElementById("board")) {
  boot();
}
