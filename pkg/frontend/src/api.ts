/** Typed client for the papercircuit service API.
 *
 * Every method maps 1:1 onto an endpoint and performs no data massaging
 * beyond JSON decoding: exported files in particular are passed through
 * byte for byte, so a download from the editor is identical to what the
 * CLI writes for the same project state.
 */

export interface Courtyard {
  w: number;
  h: number;
}

export interface PartSummary {
  id: string;
  footprint: string;
  label: string;
  courtyard: Courtyard;
}

export interface PinRef {
  part: string;
  pin: number;
}

export interface NetSummary {
  id: number;
  name: string;
  pins: PinRef[];
}

export interface BoardSummary {
  width: number;
  height: number;
  margin: number;
  resolution: number;
  gap: number;
  min_feature: number;
}

export interface Placement {
  x: number;
  y: number;
  rot: number;
}

export interface ProjectSummary {
  parts: PartSummary[];
  nets: NetSummary[];
  board: BoardSummary;
  placement: Record<string, Placement>;
  revision: number;
}

export interface ZonePolygon {
  net: number;
  name: string;
  outer: [number, number][];
  holes: [number, number][][];
}

export interface CutPath {
  points: [number, number][];
  closed: boolean;
}

export interface Violation {
  kind: string;
  location: [number, number];
  nets: number[];
  detail: string;
  message: string;
}

export interface LayoutPayload {
  zones: Record<string, ZonePolygon[]>;
  cut_paths: CutPath[];
  violations: Violation[];
  pass: boolean;
  revision: number;
}

export class ApiError extends Error {
  constructor(readonly status: number, readonly detail: string) {
    super(detail);
  }
}

export type ExportMode = "cut" | "finetape";

async function decodeError(res: Response): Promise<never> {
  let detail = `${res.status} ${res.statusText}`;
  try {
    const body = await res.json();
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    /* non-JSON error body; keep the status line */
  }
  throw new ApiError(res.status, detail);
}

export class Client {
  constructor(
    private readonly base = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchFn(this.base + path);
    if (!res.ok) await decodeError(res);
    return res.json() as Promise<T>;
  }

  getProject(): Promise<ProjectSummary> {
    return this.get("/api/project");
  }

  async putPlacement(partId: string, body: Placement): Promise<Placement & { revision: number }> {
    const res = await this.fetchFn(
      `${this.base}/api/placement/${encodeURIComponent(partId)}`,
      {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      },
    );
    if (!res.ok) await decodeError(res);
    return res.json();
  }

  async recompute(): Promise<LayoutPayload> {
    const res = await this.fetchFn(`${this.base}/api/recompute`, {
      method: "POST",
    });
    if (!res.ok) await decodeError(res);
    return res.json();
  }

  getDrc(): Promise<LayoutPayload & { report: string }> {
    return this.get("/api/drc");
  }

  /** Raw SVG bytes, untouched. */
  async exportSvg(mode: ExportMode, tapeWidth?: number): Promise<Uint8Array<ArrayBuffer>> {
    const params = new URLSearchParams({ mode });
    if (tapeWidth !== undefined) params.set("tape_width", String(tapeWidth));
    const res = await this.fetchFn(`${this.base}/api/export?${params}`);
    if (!res.ok) await decodeError(res);
    return new Uint8Array(await res.arrayBuffer());
  }

  async previewPng(): Promise<Uint8Array<ArrayBuffer>> {
    const res = await this.fetchFn(`${this.base}/api/preview.png`);
    if (!res.ok) await decodeError(res);
    return new Uint8Array(await res.arrayBuffer());
  }
}
