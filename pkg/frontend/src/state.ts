/** Client view state: latest frame, hover/drag targets, camera. */

import type { Frame, QueryResult } from "./api.js";

export interface Camera {
  x: number;
  y: number;
  scale: number;
}

export interface DragState {
  particle: string;
  /** Local pointer position in world coordinates; rendered in place of the
   * server echo, which may lag one frame. */
  x: number;
  y: number;
}

export class ViewState {
  sessionId: string | null = null;
  frame: Frame | null = null;
  result: QueryResult | null = null;
  hover: string | null = null; // image particle id
  drag: DragState | null = null;
  camera: Camera = { x: 0, y: 0, scale: 1 };

  startSession(sessionId: string, result: QueryResult, frame: Frame): void {
    this.sessionId = sessionId;
    this.result = result;
    this.frame = frame;
    this.hover = null;
    this.drag = null;
  }

  /** Apply a frame unless it is older than what we already show. */
  applyFrame(frame: Frame): boolean {
    if (this.frame && frame.step < this.frame.step) return false;
    this.frame = frame;
    return true;
  }

  moveDrag(x: number, y: number): void {
    if (this.drag) this.drag = { ...this.drag, x, y };
  }

  /** "City, Country" for a hovered image; "Country" when it hangs directly
   * off a country node. */
  locationOf(imageId: string): string | null {
    if (!this.result) return null;
    for (const [country, node] of Object.entries(this.result.geo)) {
      if (node.images.includes(imageId)) return country;
      for (const [city, images] of Object.entries(node.cities)) {
        if (images.includes(imageId)) return `${city}, ${country}`;
      }
    }
    return null;
  }
}
