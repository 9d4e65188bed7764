/** DOM renderer: one absolutely-positioned element per particle.
 *
 * Image thumbnails are appended in the server's draw order, so both DOM
 * order and z-index reproduce the painter's ordering (later = on top).
 */

import type { Particle } from "./api.js";
import type { ViewState } from "./state.js";

export const HOVER_SCALE = 2;
const THUMB_SIZE = 48;
const HOVER_Z = 100000;

export interface RendererOptions {
  thumbUrl: (imageId: string) => string;
}

export class Renderer {
  private readonly world: HTMLElement;
  private readonly label: HTMLElement;
  private readonly elements = new Map<string, HTMLElement>();

  constructor(container: HTMLElement, private readonly options: RendererOptions) {
    this.world = document.createElement("div");
    this.world.className = "world";
    this.world.style.position = "absolute";
    container.appendChild(this.world);

    this.label = document.createElement("div");
    this.label.className = "location-label";
    Object.assign(this.label.style, {
      position: "absolute",
      left: "8px",
      bottom: "8px",
      display: "none",
    });
    container.appendChild(this.label);
  }

  render(state: ViewState): void {
    const frame = state.frame;
    if (!frame) return;
    const cam = state.camera;
    this.world.style.transform = `translate(${cam.x}px, ${cam.y}px) scale(${cam.scale})`;

    const seen = new Set<string>();
    const nodes: Particle[] = [];
    const images = new Map<string, Particle>(); // image id -> particle
    for (const p of frame.particles) {
      seen.add(p.id);
      if (p.level === "image") images.set(p.payload, p);
      else nodes.push(p);
    }
    for (const [id, el] of this.elements) {
      if (!seen.has(id)) {
        el.remove();
        this.elements.delete(id);
      }
    }

    for (const p of nodes) this.place(p, this.nodeElement(p), state, 0);
    frame.draw_order.forEach((imageId, order) => {
      const p = images.get(imageId);
      if (!p) return;
      const el = this.imageElement(p);
      this.place(p, el, state, order + 1);
      this.world.appendChild(el); // re-append: DOM order == draw order
    });

    const hovered = state.hover && state.result ? state.locationOf(payloadOf(state.hover)) : null;
    this.label.textContent = hovered ?? "";
    this.label.style.display = hovered ? "block" : "none";
  }

  elementFor(particleId: string): HTMLElement | undefined {
    return this.elements.get(particleId);
  }

  private place(p: Particle, el: HTMLElement, state: ViewState, z: number): void {
    let { x, y } = p;
    if (state.drag && state.drag.particle === p.id) ({ x, y } = state.drag);
    const hovered = state.hover === p.id;
    el.style.left = `${x}px`;
    el.style.top = `${y}px`;
    el.style.transform = `translate(-50%, -50%) scale(${hovered ? HOVER_SCALE : 1})`;
    el.style.zIndex = String(hovered ? HOVER_Z : z);
  }

  private nodeElement(p: Particle): HTMLElement {
    let el = this.elements.get(p.id);
    if (!el) {
      el = document.createElement("div");
      el.className = `particle node ${p.level}`;
      el.dataset.particleId = p.id;
      el.dataset.level = p.level;
      el.style.position = "absolute";
      el.textContent = p.payload;
      this.elements.set(p.id, el);
      this.world.appendChild(el);
    }
    return el;
  }

  private imageElement(p: Particle): HTMLElement {
    let el = this.elements.get(p.id);
    if (!el) {
      el = document.createElement("div");
      el.className = "particle image";
      el.dataset.particleId = p.id;
      el.dataset.level = p.level;
      el.style.position = "absolute";
      const img = document.createElement("img");
      img.src = this.options.thumbUrl(p.payload);
      img.alt = p.payload;
      img.width = THUMB_SIZE;
      img.height = THUMB_SIZE;
      img.draggable = false;
      img.addEventListener("error", () => {
        const glyph = document.createElement("span");
        glyph.className = "placeholder";
        glyph.textContent = "?";
        img.replaceWith(glyph);
      });
      el.appendChild(img);
      this.elements.set(p.id, el);
      this.world.appendChild(el);
    }
    return el;
  }
}

function payloadOf(particleId: string): string {
  return particleId.startsWith("img:") ? particleId.slice(4) : particleId;
}
