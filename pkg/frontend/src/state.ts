/** Canvas view state: pan, clamped zoom, selection, active prompt box. */

export const MIN_ZOOM = 0.25;
export const MAX_ZOOM = 4;

export interface PromptBox {
  /** Anchored to a node (revision) or a free canvas point (fresh). */
  anchor: { nodeId: string } | { point: [number, number] };
  draft: string;
}

export class ViewState {
  panX = 0;
  panY = 0;
  zoom = 1;
  selection: string | null = null;
  promptBox: PromptBox | null = null;

  setZoom(zoom: number): number {
    this.zoom = Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, zoom));
    return this.zoom;
  }

  /** Zoom toward a screen point so the spot under the cursor stays put. */
  zoomAt(factor: number, screenX: number, screenY: number): void {
    const before = this.zoom;
    const after = this.setZoom(before * factor);
    const scale = after / before;
    this.panX = screenX - (screenX - this.panX) * scale;
    this.panY = screenY - (screenY - this.panY) * scale;
  }

  panBy(dx: number, dy: number): void {
    this.panX += dx;
    this.panY += dy;
  }

  /** Screen pixel -> canvas unit. */
  toCanvas(screenX: number, screenY: number): [number, number] {
    return [(screenX - this.panX) / this.zoom, (screenY - this.panY) / this.zoom];
  }

  select(nodeId: string | null): void {
    this.selection = nodeId;
  }

  openPrompt(anchor: PromptBox['anchor']): void {
    this.promptBox = { anchor, draft: '' };
  }

  closePrompt(): void {
    this.promptBox = null;
  }
}
