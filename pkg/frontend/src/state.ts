/** Editor state and the pure logic around it.
 *
 * Everything here is DOM-free so it can be unit tested: snapping, the
 * stale flag, drag bookkeeping and the viewport transform. The canvas
 * and network layers sit on top.
 */

import type { LayoutPayload, Placement, ProjectSummary, Violation } from "./api.js";

/** Snap to the 0.1 mm grid the server uses. */
export function snap01(v: number): number {
  return Math.round(v * 10) / 10;
}

export interface DragState {
  partId: string;
  /** pointer-to-part-center offset in mm, captured on grab */
  offsetX: number;
  offsetY: number;
  /** where the part sat before the drag, for 422 rollback */
  origin: Placement;
  /** live position while the pointer moves (unsnapped) */
  x: number;
  y: number;
}

export const ZOOM_PRESETS = [1, 2, 4] as const;

export interface Viewport {
  /** device pixels per mm at zoom 1 */
  scale: number;
  zoom: number;
  /** board mm coordinate at the canvas center */
  centerX: number;
  centerY: number;
}

export class EditorState {
  project: ProjectSummary | null = null;
  layout: LayoutPayload | null = null;
  selected: string | null = null;
  drag: DragState | null = null;
  /** at most one in-flight mutation and one in-flight recompute */
  mutationPending = false;
  recomputePending = false;
  banner: string | null = null;
  view: Viewport = { scale: 6, zoom: 1, centerX: 50, centerY: 35 };

  /** True exactly when the layout on screen predates the placement. */
  get stale(): boolean {
    if (!this.project || !this.layout) return false;
    return this.layout.revision !== this.project.revision;
  }

  get canExport(): boolean {
    return (
      this.layout !== null && !this.stale && this.layout.pass && !this.recomputePending
    );
  }

  loadProject(p: ProjectSummary): void {
    this.project = p;
    if (this.selected && !p.parts.some((q) => q.id === this.selected)) {
      this.selected = null;
    }
    this.view.centerX = p.board.width / 2;
    this.view.centerY = p.board.height / 2;
  }

  applyPlacement(partId: string, pl: Placement, revision: number): void {
    if (!this.project) return;
    this.project.placement[partId] = pl;
    this.project.revision = revision;
  }

  applyLayout(layout: LayoutPayload): void {
    // discard responses that raced with newer edits
    if (this.layout && layout.revision < this.layout.revision) return;
    this.layout = layout;
  }

  /** Start dragging; remembers the origin so a rejected move can revert. */
  beginDrag(partId: string, pointerX: number, pointerY: number): boolean {
    if (!this.project || this.mutationPending) return false;
    const current = this.project.placement[partId];
    if (!current) return false;
    this.selected = partId;
    this.drag = {
      partId,
      offsetX: pointerX - current.x,
      offsetY: pointerY - current.y,
      origin: { ...current },
      x: current.x,
      y: current.y,
    };
    return true;
  }

  moveDrag(pointerX: number, pointerY: number): void {
    if (!this.drag) return;
    this.drag.x = pointerX - this.drag.offsetX;
    this.drag.y = pointerY - this.drag.offsetY;
  }

  /** Finish the drag; returns the snapped PUT body, or null if nothing moved. */
  endDrag(): { partId: string; body: Placement } | null {
    const d = this.drag;
    if (!d) return null;
    this.drag = null;
    const body: Placement = {
      x: snap01(d.x),
      y: snap01(d.y),
      rot: d.origin.rot,
    };
    if (body.x === d.origin.x && body.y === d.origin.y) return null;
    return { partId: d.partId, body };
  }

  /** Roll a rejected move back to where the part was grabbed. */
  revert(partId: string, origin: Placement): void {
    if (this.project) this.project.placement[partId] = origin;
  }

  /** Rotation key: next PUT body with rot advanced by 90. */
  rotateSelected(): { partId: string; body: Placement } | null {
    if (!this.project || !this.selected || this.mutationPending) return null;
    const current = this.project.placement[this.selected];
    if (!current) return null;
    return {
      partId: this.selected,
      body: { x: current.x, y: current.y, rot: (current.rot + 90) % 360 },
    };
  }

  /** Center the viewport on a violation's location. */
  panToViolation(v: Violation): void {
    this.view.centerX = v.location[0];
    this.view.centerY = v.location[1];
  }

  setZoom(zoom: number): void {
    if ((ZOOM_PRESETS as readonly number[]).includes(zoom)) this.view.zoom = zoom;
  }
}

/** Board mm -> canvas px for the given canvas size. */
export function mmToPx(
  view: Viewport,
  canvasW: number,
  canvasH: number,
  x: number,
  y: number,
): [number, number] {
  const s = view.scale * view.zoom;
  return [canvasW / 2 + (x - view.centerX) * s, canvasH / 2 + (y - view.centerY) * s];
}

export function pxToMm(
  view: Viewport,
  canvasW: number,
  canvasH: number,
  px: number,
  py: number,
): [number, number] {
  const s = view.scale * view.zoom;
  return [(px - canvasW / 2) / s + view.centerX, (py - canvasH / 2) / s + view.centerY];
}

/** Hit-test part courtyards, topmost (last drawn) first. */
export function partAt(
  project: ProjectSummary,
  x: number,
  y: number,
): string | null {
  for (let i = project.parts.length - 1; i >= 0; i--) {
    const part = project.parts[i];
    const pl = project.placement[part.id];
    if (!pl) continue;
    let { w, h } = part.courtyard;
    if (pl.rot === 90 || pl.rot === 270) [w, h] = [h, w];
    if (Math.abs(x - pl.x) <= w / 2 && Math.abs(y - pl.y) <= h / 2) {
      return part.id;
    }
  }
  return null;
}
