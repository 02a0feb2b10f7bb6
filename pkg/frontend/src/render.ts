/** Canvas rendering of the editor scene.
 *
 * Draws against a minimal 2D-context interface rather than the DOM type
 * so tests can substitute a recording context. All geometry is in board
 * mm, mapped through the viewport transform.
 */

import type { LayoutPayload, ProjectSummary } from "./api.js";
import { EditorState, mmToPx, type Viewport } from "./state.js";

/** The slice of CanvasRenderingContext2D the renderer needs. */
export interface Ctx2D {
  globalAlpha: number;
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
  textAlign: CanvasTextAlign;
  setLineDash(segments: number[]): void;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  closePath(): void;
  fill(rule?: "evenodd" | "nonzero"): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

/** Orange-family zone shades, one per net, wrapping at the palette end. */
const ZONE_SHADES = [
  "#f0c070", "#e8a84e", "#f4d28e", "#dd9440", "#f9e0ac",
  "#d4832f", "#f2b963", "#e5c17f",
];

export function zoneShade(netId: number): string {
  return ZONE_SHADES[netId % ZONE_SHADES.length];
}

const DIM_ALPHA = 0.35;

export interface RenderFlags {
  /** True when the layout layer was drawn dimmed (stale). */
  dimmed: boolean;
  zonesDrawn: number;
  violationsDrawn: number;
}

export function render(
  ctx: Ctx2D,
  state: EditorState,
  canvasW: number,
  canvasH: number,
): RenderFlags {
  const flags: RenderFlags = { dimmed: false, zonesDrawn: 0, violationsDrawn: 0 };
  ctx.globalAlpha = 1;
  ctx.clearRect(0, 0, canvasW, canvasH);

  if (!state.project) {
    ctx.fillStyle = "#888";
    ctx.font = "14px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText("no project loaded", canvasW / 2, canvasH / 2);
    return flags;
  }

  const view = state.view;
  drawBoard(ctx, state.project, view, canvasW, canvasH);

  if (state.layout) {
    // a stale layout stays visible but dimmed until the next recompute
    flags.dimmed = state.stale;
    ctx.globalAlpha = flags.dimmed ? DIM_ALPHA : 1;
    flags.zonesDrawn = drawLayout(ctx, state.layout, view, canvasW, canvasH);
    ctx.globalAlpha = 1;
  }

  drawParts(ctx, state, view, canvasW, canvasH);

  if (state.layout) {
    flags.violationsDrawn = drawViolations(ctx, state.layout, view, canvasW, canvasH);
  }
  return flags;
}

function drawBoard(
  ctx: Ctx2D,
  project: ProjectSummary,
  view: Viewport,
  w: number,
  h: number,
): void {
  const b = project.board;
  const [x0, y0] = mmToPx(view, w, h, 0, 0);
  const [x1, y1] = mmToPx(view, w, h, b.width, b.height);
  ctx.fillStyle = "#fdf8ef";
  ctx.fillRect(x0, y0, x1 - x0, y1 - y0);
  ctx.strokeStyle = "#555";
  ctx.lineWidth = 1;
  ctx.setLineDash([]);
  ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);
  // margin band
  const [mx0, my0] = mmToPx(view, w, h, b.margin, b.margin);
  const [mx1, my1] = mmToPx(view, w, h, b.width - b.margin, b.height - b.margin);
  ctx.strokeStyle = "#ccc";
  ctx.setLineDash([4, 3]);
  ctx.strokeRect(mx0, my0, mx1 - mx0, my1 - my0);
  ctx.setLineDash([]);
}

function tracePolygon(
  ctx: Ctx2D,
  pts: [number, number][],
  view: Viewport,
  w: number,
  h: number,
): void {
  pts.forEach(([x, y], i) => {
    const [px, py] = mmToPx(view, w, h, x, y);
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.closePath();
}

function drawLayout(
  ctx: Ctx2D,
  layout: LayoutPayload,
  view: Viewport,
  w: number,
  h: number,
): number {
  let drawn = 0;
  for (const key of Object.keys(layout.zones).sort((a, b) => +a - +b)) {
    for (const poly of layout.zones[key]) {
      ctx.fillStyle = zoneShade(poly.net);
      ctx.beginPath();
      tracePolygon(ctx, poly.outer, view, w, h);
      for (const hole of poly.holes) tracePolygon(ctx, hole, view, w, h);
      ctx.fill("evenodd");
      drawn++;
    }
  }
  ctx.strokeStyle = "#222";
  ctx.lineWidth = 1;
  for (const path of layout.cut_paths) {
    ctx.beginPath();
    path.points.forEach(([x, y], i) => {
      const [px, py] = mmToPx(view, w, h, x, y);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    if (path.closed) ctx.closePath();
    ctx.stroke();
  }
  return drawn;
}

function drawParts(
  ctx: Ctx2D,
  state: EditorState,
  view: Viewport,
  w: number,
  h: number,
): void {
  const project = state.project!;
  for (const part of project.parts) {
    const placed = project.placement[part.id];
    if (!placed) continue;
    const dragging = state.drag?.partId === part.id;
    const x = dragging ? state.drag!.x : placed.x;
    const y = dragging ? state.drag!.y : placed.y;
    let { w: cw, h: ch } = part.courtyard;
    if (placed.rot === 90 || placed.rot === 270) [cw, ch] = [ch, cw];
    const [x0, y0] = mmToPx(view, w, h, x - cw / 2, y - ch / 2);
    const [x1, y1] = mmToPx(view, w, h, x + cw / 2, y + ch / 2);
    ctx.strokeStyle = part.id === state.selected ? "#0066dd" : "#333";
    ctx.lineWidth = part.id === state.selected ? 2 : 1;
    ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);
    ctx.fillStyle = "#333";
    ctx.font = "11px sans-serif";
    ctx.textAlign = "center";
    const [tx, ty] = mmToPx(view, w, h, x, y);
    ctx.fillText(part.label || part.id, tx, ty);
  }
}

function drawViolations(
  ctx: Ctx2D,
  layout: LayoutPayload,
  view: Viewport,
  w: number,
  h: number,
): number {
  for (const v of layout.violations) {
    const [px, py] = mmToPx(view, w, h, v.location[0], v.location[1]);
    ctx.strokeStyle = "#d11";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(px, py, 7, 0, Math.PI * 2);
    ctx.stroke();
    ctx.beginPath();
    ctx.moveTo(px - 5, py - 5);
    ctx.lineTo(px + 5, py + 5);
    ctx.moveTo(px - 5, py + 5);
    ctx.lineTo(px + 5, py - 5);
    ctx.stroke();
  }
  return layout.violations.length;
}
