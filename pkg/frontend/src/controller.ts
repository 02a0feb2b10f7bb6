/** Wires editor state to the API client.
 *
 * All network interaction funnels through here so the gating rules live
 * in one place: at most one placement mutation and one recompute may be
 * in flight, a rejected move rolls the part back to its origin, and an
 * export is only offered for a fresh passing layout.
 */

import { ApiError, Client, type ExportMode, type Placement } from "./api.js";
import { EditorState, partAt, pxToMm } from "./state.js";

export class Controller {
  constructor(
    readonly state: EditorState,
    readonly client: Client,
    /** called whenever state changed and the view should redraw */
    readonly onChange: () => void = () => {},
  ) {}

  async load(): Promise<void> {
    try {
      this.state.loadProject(await this.client.getProject());
      this.state.banner = null;
    } catch (e) {
      this.state.banner = e instanceof ApiError ? e.detail : String(e);
    }
    this.onChange();
  }

  /** Pointer down in canvas px; returns true when a drag started. */
  pointerDown(px: number, py: number, canvasW: number, canvasH: number): boolean {
    if (!this.state.project) return false;
    const [x, y] = pxToMm(this.state.view, canvasW, canvasH, px, py);
    const partId = partAt(this.state.project, x, y);
    if (!partId) {
      this.state.selected = null;
      this.onChange();
      return false;
    }
    const started = this.state.beginDrag(partId, x, y);
    this.onChange();
    return started;
  }

  pointerMove(px: number, py: number, canvasW: number, canvasH: number): void {
    if (!this.state.drag) return;
    const [x, y] = pxToMm(this.state.view, canvasW, canvasH, px, py);
    this.state.moveDrag(x, y);
    this.onChange();
  }

  async pointerUp(): Promise<void> {
    const move = this.state.endDrag();
    this.onChange();
    if (move) await this.submitPlacement(move.partId, move.body);
  }

  /** PUT one placement; 422 reverts to the origin and shows the reason. */
  async submitPlacement(partId: string, body: Placement): Promise<void> {
    if (this.state.mutationPending || !this.state.project) return;
    const origin = { ...this.state.project.placement[partId] };
    // optimistic: show the part at its new spot while the PUT runs
    this.state.applyPlacement(partId, body, this.state.project.revision);
    this.state.mutationPending = true;
    this.onChange();
    try {
      const res = await this.client.putPlacement(partId, body);
      this.state.applyPlacement(
        partId,
        { x: res.x, y: res.y, rot: res.rot },
        res.revision,
      );
      this.state.banner = null;
    } catch (e) {
      this.state.revert(partId, origin);
      this.state.banner = e instanceof ApiError ? e.detail : String(e);
    } finally {
      this.state.mutationPending = false;
      this.onChange();
    }
  }

  async rotateSelected(): Promise<void> {
    const move = this.state.rotateSelected();
    if (move) await this.submitPlacement(move.partId, move.body);
  }

  /** The explicit Convert button. */
  async recompute(): Promise<void> {
    if (this.state.recomputePending) return;
    this.state.recomputePending = true;
    this.onChange();
    try {
      this.state.applyLayout(await this.client.recompute());
      this.state.banner = null;
    } catch (e) {
      this.state.banner = e instanceof ApiError ? e.detail : String(e);
    } finally {
      this.state.recomputePending = false;
      this.onChange();
    }
  }

  /** Fetch export bytes untouched; null when blocked or rejected. */
  async exportBytes(
    mode: ExportMode,
    tapeWidth?: number,
  ): Promise<Uint8Array<ArrayBuffer> | null> {
    if (!this.state.canExport) {
      this.state.banner = "convert first: layout is missing, stale or failing";
      this.onChange();
      return null;
    }
    try {
      return await this.client.exportSvg(mode, tapeWidth);
    } catch (e) {
      this.state.banner = e instanceof ApiError ? e.detail : String(e);
      this.onChange();
      return null;
    }
  }

  /** Clicking a violation in the list pans the canvas to it. */
  focusViolation(index: number): void {
    const v = this.state.layout?.violations[index];
    if (!v) return;
    this.state.panToViolation(v);
    this.onChange();
  }

  setZoom(zoom: number): void {
    this.state.setZoom(zoom);
    this.onChange();
  }
}
