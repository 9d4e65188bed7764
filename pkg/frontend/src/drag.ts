/** Translate drag gestures into pin / pin… / release calls.
 *
 * Pointer-down pins the particle at the pointer, every move re-pins, and
 * pointer-up (or any server error) releases it. The root marker is never
 * draggable. Server calls are serialized on a queue so at most one request
 * per session mutates at a time (the service answers 409 otherwise).
 */

import { ApiClient, ApiError } from "./api.js";
import type { ViewState } from "./state.js";

export class DragController {
  private queue: Promise<void> = Promise.resolve();

  constructor(
    private readonly api: ApiClient,
    private readonly state: ViewState,
    private readonly onError: (message: string) => void = () => {},
  ) {}

  /** Resolves when every queued server call has settled (for tests). */
  idle(): Promise<void> {
    return this.queue;
  }

  pointerDown(particleId: string, x: number, y: number): void {
    if (particleId === "root" || this.state.drag || !this.state.sessionId) return;
    this.state.drag = { particle: particleId, x, y };
    this.send(() => this.api.pin(this.state.sessionId!, particleId, x, y));
  }

  pointerMove(x: number, y: number): void {
    const drag = this.state.drag;
    if (!drag || !this.state.sessionId) return;
    this.state.moveDrag(x, y);
    this.send(() => this.api.pin(this.state.sessionId!, drag.particle, x, y));
  }

  pointerUp(): void {
    const drag = this.state.drag;
    if (!drag || !this.state.sessionId) return;
    this.state.drag = null;
    this.send(() => this.api.release(this.state.sessionId!, drag.particle));
  }

  private send(call: () => Promise<unknown>): void {
    this.queue = this.queue.then(async () => {
      try {
        await call();
      } catch (err) {
        const message = err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
        const drag = this.state.drag;
        this.state.drag = null;
        this.onError(message);
        if (drag && this.state.sessionId) {
          // release is always sent on drag abort; swallow a failure here
          try {
            await this.api.release(this.state.sessionId, drag.particle);
          } catch {
            /* session may be gone; nothing left to clean up */
          }
        }
      }
    });
  }
}

/** Wire pointer events from a renderer container to a DragController. */
export function attachDragHandlers(container: HTMLElement, controller: DragController): void {
  container.addEventListener("pointerdown", (ev) => {
    const target = (ev.target as HTMLElement).closest<HTMLElement>("[data-particle-id]");
    if (target?.dataset.particleId) {
      controller.pointerDown(target.dataset.particleId, ev.clientX, ev.clientY);
    }
  });
  container.addEventListener("pointermove", (ev) => controller.pointerMove(ev.clientX, ev.clientY));
  container.addEventListener("pointerup", () => controller.pointerUp());
}
